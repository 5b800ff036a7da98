#!/usr/bin/env python3
"""How much of Bob's traffic leaks to the replay attacker, per protocol.

Eve always reads Alice's code straight off her own Bell pair; Bob's code she
can only XOR out of a publicly announced measurement outcome.  This sweeps
the checking-mode rate and reports, for each protocol variant, the fraction
of rounds whose outcome goes public and the fraction of Bob's message rounds
Eve captures.
"""

import argparse

from qdialogue.harness import RunConfig, run_sessions
from qdialogue.protocol import Mode

OUTCOME_REVEAL = "outcome-reveal"


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--rounds", type=int, default=20_000)
    parser.add_argument("--seed", type=int, default=5)
    args = parser.parse_args()

    header = (
        f"{'protocol':<9} {'p_cm':>5} {'outcome public':>14} "
        f"{'bob msg rounds':>14} {'eve got bob':>12} {'eve/bob-msg':>11}"
    )
    print(f"strategy=bell-substitution  rounds={args.rounds}  seed={args.seed}")
    print(header)
    print("-" * len(header))

    for protocol in ("original", "modified"):
        for p_cm in (0.0, 0.25, 0.5, 0.75):
            _, transcripts = run_sessions(
                RunConfig(
                    protocol=protocol,
                    strategy="bell-substitution",
                    rounds=args.rounds,
                    p_cm=p_cm,
                    seed=args.seed,
                )
            )
            public = sum(
                any(a.kind == OUTCOME_REVEAL for a in t.announcements) for t in transcripts
            )
            if protocol == "original":
                bob_msg = [t for t in transcripts if t.alice_mode is Mode.MM]
            else:
                bob_msg = [t for t in transcripts if t.bob_mode is Mode.MM]
            eve_got = [
                t
                for t in bob_msg
                if t.eve_report is not None
                and t.eve_report.inferred_bob_public == t.bob_code
            ]
            share = len(eve_got) / len(bob_msg) if bob_msg else float("nan")
            print(
                f"{protocol:<9} {p_cm:>5.2f} {public / len(transcripts):>14.4f} "
                f"{len(bob_msg):>14} {len(eve_got):>12} {share:>11.4f}"
            )

    print()
    print(
        "In the original protocol every message round announces the outcome, so\n"
        "Eve captures all of Bob's payload.  The modified variant keeps the\n"
        "outcome private exactly in its Alice=MM/Bob=CM rounds, but Bob carries\n"
        "no message there; whenever Bob is in message mode the outcome still\n"
        "goes public and Eve still reads him at accuracy 1."
    )
    return 0


if __name__ == "__main__":
    raise SystemExit(main())

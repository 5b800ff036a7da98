"""Experiment runner, exact enumeration oracle, metrics and serialization.

The Monte Carlo runner draws every piece of round randomness (modes, codes,
Eve's choices, measurement outcomes) from a per-round substream so that runs
are reproducible and rounds are independent.  The split rule is:

    round i uses numpy's default_rng(SeedSequence(seed, spawn_key=(i,)))

which makes merged metrics independent of execution order.

The oracle side never touches the statevector simulator: it enumerates the
finitely many discrete branches of each strategy with exact rational
weights, so the two routes to every probability are independent.

Transcripts serialize as UTF-8 JSON lines with the fixed top-level keys
round_id, protocol, modes, codes, outcome, announcements, check, eve.  The
decode results are not stored because they are implied by protocol, modes,
codes and outcome; the parser reconstructs them, so a parsed line compares
equal to the transcript that produced it.
"""

from __future__ import annotations

import csv
import json
from collections import deque
from dataclasses import dataclass, fields
from fractions import Fraction
from typing import IO, Iterable, Iterator

import numpy as np

from .adversary import (
    BELL_SUBSTITUTION,
    DISTURBANCE,
    MEASURE_RESEND,
    NONE,
    STRATEGIES,
    AdversaryChannel,
    EveReport,
)
from .bell_core import ALL_CODES, BellIndex, PauliCode, decode_bits, random_code
from .protocol import (
    ORIGINAL,
    PROTOCOLS,
    Announcement,
    Mode,
    RoundTranscript,
    run_round_modified,
    run_round_original,
)

UNIFORM_RANDOM = "uniform-random"
TEXT = "text"
MESSAGE_SOURCES = (UNIFORM_RANDOM, TEXT)


class ConfigurationError(ValueError):
    """A run configuration field is out of range or unknown."""


@dataclass
class RunConfig:
    """Everything that determines a run; equal configs give identical runs."""

    protocol: str = ORIGINAL
    strategy: str = NONE
    rounds: int = 10_000
    p_cm: float = 0.5
    seed: int = 0
    message_source: str = UNIFORM_RANDOM
    alice_text: str = ""
    bob_text: str = ""
    suppress_outcome_reveal: bool = False

    def validate(self) -> None:
        if self.protocol not in PROTOCOLS:
            raise ConfigurationError(f"protocol must be one of {PROTOCOLS}, got {self.protocol!r}")
        if self.strategy not in STRATEGIES:
            raise ConfigurationError(f"strategy must be one of {STRATEGIES}, got {self.strategy!r}")
        if not isinstance(self.rounds, int) or self.rounds < 1:
            raise ConfigurationError(f"rounds must be a positive integer, got {self.rounds!r}")
        if not 0.0 <= self.p_cm <= 1.0:
            raise ConfigurationError(f"p_cm must lie in [0, 1], got {self.p_cm!r}")
        if self.message_source not in MESSAGE_SOURCES:
            raise ConfigurationError(
                f"message_source must be one of {MESSAGE_SOURCES}, got {self.message_source!r}"
            )


@dataclass
class RunSummary:
    """Aggregated metrics of one run.

    Rates are None when no round of the run contributes to them (for
    example eve accuracies under the transparent channel).  The CSV column
    order is exactly the field order here.
    """

    rounds_total: int
    rounds_cm: int
    rounds_mm: int
    rounds_mixed: int
    checks_performed: int
    checks_failed: int
    detection_rate: float | None
    alice_decode_accuracy: float | None
    bob_decode_accuracy: float | None
    eve_alice_accuracy: float | None
    eve_bob_public_accuracy: float | None
    throughput_bits: int


SUMMARY_COLUMNS = tuple(f.name for f in fields(RunSummary))


def _round_rng(seed: int, round_id: int) -> np.random.Generator:
    return np.random.default_rng(np.random.SeedSequence(seed, spawn_key=(round_id,)))


def _draw_mode(rng: np.random.Generator, p_cm: float) -> Mode:
    return Mode.CM if rng.random() < p_cm else Mode.MM


def iter_rounds(config: RunConfig) -> Iterator[RoundTranscript]:
    """Yield the run's transcripts one round at a time."""
    config.validate()
    text_mode = config.message_source == TEXT
    alice_queue = deque(text_to_codes(config.alice_text)) if text_mode else deque()
    bob_queue = deque(text_to_codes(config.bob_text)) if text_mode else deque()

    def next_bits(queue: deque, carries_message: bool, rng: np.random.Generator) -> PauliCode:
        if text_mode and carries_message and queue:
            return queue.popleft()
        return random_code(rng)

    for i in range(config.rounds):
        rng = _round_rng(config.seed, i)
        channel = AdversaryChannel(config.strategy)
        if config.protocol == ORIGINAL:
            alice_mode = _draw_mode(rng, config.p_cm)
            # round payload convention: a CM round sacrifices both codes
            carries = alice_mode is Mode.MM
            bob_bits = next_bits(bob_queue, carries, rng)
            alice_bits = next_bits(alice_queue, carries, rng)
            yield run_round_original(
                bob_bits,
                alice_mode,
                alice_bits,
                channel,
                rng,
                round_id=i,
                suppress_outcome_reveal=config.suppress_outcome_reveal,
            )
        else:
            bob_mode = _draw_mode(rng, config.p_cm)
            alice_mode = _draw_mode(rng, config.p_cm)
            bob_bits = next_bits(bob_queue, bob_mode is Mode.MM, rng)
            alice_bits = next_bits(alice_queue, alice_mode is Mode.MM, rng)
            yield run_round_modified(
                bob_mode, bob_bits, alice_mode, alice_bits, channel, rng, round_id=i
            )


def classify_round(transcript: RoundTranscript) -> str:
    """Bucket a round as 'cm', 'mm' or 'mixed' for the summary counters."""
    if transcript.protocol == ORIGINAL:
        return "cm" if transcript.alice_mode is Mode.CM else "mm"
    if transcript.bob_mode is transcript.alice_mode:
        return "cm" if transcript.bob_mode is Mode.CM else "mm"
    return "mixed"


def summarize(transcripts: Iterable[RoundTranscript]) -> RunSummary:
    """Fold a sequence of transcripts into a RunSummary."""
    buckets = {"cm": 0, "mm": 0, "mixed": 0}
    total = 0
    checks = 0
    failed = 0
    alice_ok = alice_n = 0
    bob_ok = bob_n = 0
    eve_a_ok = eve_a_n = 0
    eve_b_ok = eve_b_n = 0
    throughput = 0

    for t in transcripts:
        total += 1
        buckets[classify_round(t)] += 1
        if t.check_performed:
            checks += 1
            if not t.check_passed:
                failed += 1
        if t.alice_decoded is not None:
            alice_n += 1
            if t.alice_decoded == t.bob_code:
                alice_ok += 1
                throughput += 2
        if t.bob_decoded is not None:
            bob_n += 1
            if t.bob_decoded == t.alice_code:
                bob_ok += 1
                throughput += 2
        report = t.eve_report
        if report is not None and report.inferred_alice is not None:
            eve_a_n += 1
            if report.inferred_alice == t.alice_code:
                eve_a_ok += 1
        if report is not None and report.inferred_bob_public is not None:
            eve_b_n += 1
            if report.inferred_bob_public == t.bob_code:
                eve_b_ok += 1

    def rate(num: int, den: int) -> float | None:
        return num / den if den else None

    return RunSummary(
        rounds_total=total,
        rounds_cm=buckets["cm"],
        rounds_mm=buckets["mm"],
        rounds_mixed=buckets["mixed"],
        checks_performed=checks,
        checks_failed=failed,
        detection_rate=rate(failed, checks),
        alice_decode_accuracy=rate(alice_ok, alice_n),
        bob_decode_accuracy=rate(bob_ok, bob_n),
        eve_alice_accuracy=rate(eve_a_ok, eve_a_n),
        eve_bob_public_accuracy=rate(eve_b_ok, eve_b_n),
        throughput_bits=throughput,
    )


def run_sessions(config: RunConfig) -> tuple[RunSummary, list[RoundTranscript]]:
    """Run the configured number of rounds; deterministic given the seed."""
    transcripts = list(iter_rounds(config))
    return summarize(transcripts), transcripts


# ---------------------------------------------------------------------------
# text payloads

def text_to_codes(text: str) -> list[PauliCode]:
    """Pack UTF-8 bytes into 2-bit codes, most significant pair first."""
    out: list[PauliCode] = []
    for byte in text.encode("utf-8"):
        for shift in (6, 4, 2, 0):
            v = (byte >> shift) & 0b11
            out.append(PauliCode(v >> 1, v & 1))
    return out


def codes_to_text(codes: Iterable[PauliCode]) -> str:
    """Inverse of text_to_codes; trailing partial bytes are dropped."""
    codes = list(codes)
    data = bytearray()
    for i in range(0, len(codes) - len(codes) % 4, 4):
        byte = 0
        for code in codes[i : i + 4]:
            byte = (byte << 2) | (code.k << 1) | code.l
        data.append(byte)
    return data.decode("utf-8", errors="replace")


def delivered_codes(transcripts: Iterable[RoundTranscript], recipient: str) -> list[PauliCode]:
    """Codes a party decoded, in round order ('bob' got Alice's, 'alice' Bob's)."""
    if recipient == "bob":
        return [t.bob_decoded for t in transcripts if t.bob_decoded is not None]
    if recipient == "alice":
        return [t.alice_decoded for t in transcripts if t.alice_decoded is not None]
    raise ValueError(f"recipient must be 'alice' or 'bob', got {recipient!r}")


# ---------------------------------------------------------------------------
# exact enumeration oracle

@dataclass(frozen=True)
class OracleResult:
    """Exact per-check probabilities from exhaustive branch enumeration.

    ``check_pass_probability`` is conditional on a check being performed
    (original: Alice chose CM; modified: both chose CM).  The outcome
    distribution maps each (bob_code, alice_code) pair to the exact
    distribution of Bob's measured index.
    """

    protocol: str
    strategy: str
    check_pass_probability: Fraction
    eve_alice_accuracy_exact: Fraction | None
    outcome_distribution: dict[tuple[PauliCode, PauliCode], dict[BellIndex, Fraction]]

    @property
    def detection_probability(self) -> Fraction:
        return 1 - self.check_pass_probability


def _strategy_branches(
    strategy: str, bob: PauliCode, alice: PauliCode
) -> list[tuple[Fraction, BellIndex, PauliCode | None]]:
    """All (weight, outcome, eve_inferred_alice) branches of one round.

    Pure bit arithmetic: an undisturbed encoded pair measures to the XOR of
    the codes; an extra code e on the travel qubit shifts the index by e; a
    computational-basis tap collapses the pair to a product state whose two
    Bell components are fixed by its correlation parity.
    """
    honest = BellIndex(bob.k ^ alice.k, bob.l ^ alice.l)
    if strategy == NONE:
        return [(Fraction(1), honest, None)]
    if strategy == DISTURBANCE:
        return [
            (Fraction(1, 4), BellIndex(honest.x ^ e.k, honest.y ^ e.l), None)
            for e in ALL_CODES
        ]
    if strategy == MEASURE_RESEND:
        branches = []
        for t in (0, 1):
            # travel-qubit tap on the encoded Bell pair: each value with
            # weight 1/2; the home bit is fixed by the pair's correlation
            h = t ^ 1 ^ (bob.k ^ bob.l)
            t_after = t ^ (alice.k ^ alice.l)  # Alice's X-part flips travel
            if h ^ t_after:  # anti-correlated product: psi-family outcomes
                pair = (BellIndex(0, 0), BellIndex(1, 1))
            else:  # correlated product: phi-family outcomes
                pair = (BellIndex(0, 1), BellIndex(1, 0))
            branches.extend((Fraction(1, 4), idx, None) for idx in pair)
        return branches
    if strategy == BELL_SUBSTITUTION:
        # Eve's own pair is a Bell eigenstate after Alice encodes, so her
        # inference is deterministic and her replay restores the honest index.
        return [(Fraction(1, 4), honest, alice) for _ in ALL_CODES]
    raise ConfigurationError(f"strategy must be one of {STRATEGIES}, got {strategy!r}")


def exact_oracle(protocol: str, strategy: str) -> OracleResult:
    """Enumerate every discrete branch of a round with rational weights."""
    if protocol not in PROTOCOLS:
        raise ConfigurationError(f"protocol must be one of {PROTOCOLS}, got {protocol!r}")
    if strategy not in STRATEGIES:
        raise ConfigurationError(f"strategy must be one of {STRATEGIES}, got {strategy!r}")

    cell_weight = Fraction(1, 16)
    pass_prob = Fraction(0)
    eve_hits = Fraction(0)
    eve_total = Fraction(0)
    distribution: dict[tuple[PauliCode, PauliCode], dict[BellIndex, Fraction]] = {}

    for bob in ALL_CODES:
        for alice in ALL_CODES:
            honest = BellIndex(bob.k ^ alice.k, bob.l ^ alice.l)
            cell: dict[BellIndex, Fraction] = {}
            for weight, outcome, inferred in _strategy_branches(strategy, bob, alice):
                cell[outcome] = cell.get(outcome, Fraction(0)) + weight
                if outcome == honest:
                    pass_prob += cell_weight * weight
                if inferred is not None:
                    eve_total += cell_weight * weight
                    if inferred == alice:
                        eve_hits += cell_weight * weight
            distribution[(bob, alice)] = cell

    eve_accuracy = eve_hits / eve_total if eve_total else None
    return OracleResult(
        protocol=protocol,
        strategy=strategy,
        check_pass_probability=pass_prob,
        eve_alice_accuracy_exact=eve_accuracy,
        outcome_distribution=distribution,
    )


# ---------------------------------------------------------------------------
# serialization

def _code_pair(code: PauliCode | BellIndex | None) -> list[int] | None:
    return None if code is None else [int(b) for b in code]


def _announcement_record(ann: Announcement) -> dict:
    if isinstance(ann.payload, Mode):
        payload = ann.payload.value
    elif isinstance(ann.payload, (PauliCode, BellIndex)):
        payload = _code_pair(ann.payload)
    else:
        payload = None
    return {"speaker": ann.speaker, "kind": ann.kind, "payload": payload}


def _announcement_from_record(rec: dict) -> Announcement:
    kind = rec["kind"]
    raw = rec["payload"]
    if kind == "mode-reveal":
        payload = Mode(raw)
    elif kind == "outcome-reveal":
        payload = BellIndex(*raw)
    elif kind == "op-reveal":
        payload = PauliCode(*raw)
    else:
        payload = None
    return Announcement(rec["speaker"], kind, payload)


def transcript_to_record(t: RoundTranscript) -> dict:
    """Flatten one transcript to a JSON-ready dict with the fixed schema."""
    eve = None
    if t.eve_report is not None:
        eve = {
            "inferred_alice": _code_pair(t.eve_report.inferred_alice),
            "inferred_bob_private": _code_pair(t.eve_report.inferred_bob_private),
            "inferred_bob_public": _code_pair(t.eve_report.inferred_bob_public),
        }
    return {
        "round_id": t.round_id,
        "protocol": t.protocol,
        "modes": {"bob": t.bob_mode.value, "alice": t.alice_mode.value},
        "codes": {"bob": _code_pair(t.bob_code), "alice": _code_pair(t.alice_code)},
        "outcome": _code_pair(t.outcome),
        "announcements": [_announcement_record(a) for a in t.announcements],
        "check": {"check_performed": t.check_performed, "check_passed": t.check_passed},
        "eve": eve,
    }


def _decoded_pair(
    protocol: str,
    bob_mode: Mode,
    alice_mode: Mode,
    bob_code: PauliCode,
    alice_code: PauliCode,
    outcome: BellIndex,
) -> tuple[PauliCode | None, PauliCode | None]:
    """Reconstruct (bob_decoded, alice_decoded) implied by the round shape."""
    if protocol == ORIGINAL:
        if alice_mode is Mode.MM:
            return decode_bits(outcome, bob_code), decode_bits(outcome, alice_code)
        return None, None
    if bob_mode is Mode.MM and alice_mode is Mode.MM:
        return decode_bits(outcome, bob_code), decode_bits(outcome, alice_code)
    if bob_mode is Mode.MM and alice_mode is Mode.CM:
        return None, decode_bits(outcome, alice_code)
    if bob_mode is Mode.CM and alice_mode is Mode.MM:
        return decode_bits(outcome, bob_code), None
    return None, None


def record_to_transcript(rec: dict) -> RoundTranscript:
    """Rebuild a transcript from its serialized record."""
    bob_mode = Mode(rec["modes"]["bob"])
    alice_mode = Mode(rec["modes"]["alice"])
    bob_code = PauliCode(*rec["codes"]["bob"])
    alice_code = PauliCode(*rec["codes"]["alice"])
    outcome = BellIndex(*rec["outcome"])
    eve = None
    if rec["eve"] is not None:
        def opt(pair):
            return None if pair is None else PauliCode(*pair)

        eve = EveReport(
            inferred_alice=opt(rec["eve"]["inferred_alice"]),
            inferred_bob_private=opt(rec["eve"]["inferred_bob_private"]),
            inferred_bob_public=opt(rec["eve"]["inferred_bob_public"]),
        )
    bob_decoded, alice_decoded = _decoded_pair(
        rec["protocol"], bob_mode, alice_mode, bob_code, alice_code, outcome
    )
    return RoundTranscript(
        round_id=rec["round_id"],
        protocol=rec["protocol"],
        bob_mode=bob_mode,
        alice_mode=alice_mode,
        bob_code=bob_code,
        alice_code=alice_code,
        outcome=outcome,
        announcements=tuple(_announcement_from_record(a) for a in rec["announcements"]),
        check_performed=rec["check"]["check_performed"],
        check_passed=rec["check"]["check_passed"],
        bob_decoded=bob_decoded,
        alice_decoded=alice_decoded,
        eve_report=eve,
    )


def transcript_to_line(t: RoundTranscript) -> str:
    return json.dumps(transcript_to_record(t), separators=(",", ":"))


def parse_transcript_line(line: str) -> RoundTranscript:
    return record_to_transcript(json.loads(line))


def write_transcripts(transcripts: Iterable[RoundTranscript], sink: IO[str]) -> None:
    """Write transcripts as JSON lines, one round per line."""
    for t in transcripts:
        sink.write(transcript_to_line(t))
        sink.write("\n")


def summary_to_record(summary: RunSummary) -> dict:
    return {name: getattr(summary, name) for name in SUMMARY_COLUMNS}


def write_summary(summary: RunSummary, sink: IO[str], format: str = "text") -> None:
    """Write a run summary as aligned text, a CSV header+row, or one JSON record."""
    record = summary_to_record(summary)
    if format == "records":
        sink.write(json.dumps(record) + "\n")
    elif format == "csv":
        writer = csv.writer(sink)
        writer.writerow(SUMMARY_COLUMNS)
        writer.writerow(["" if v is None else v for v in record.values()])
    elif format == "text":
        width = max(len(name) for name in SUMMARY_COLUMNS)
        for name, value in record.items():
            if value is None:
                shown = "n/a"
            elif isinstance(value, float):
                shown = f"{value:.6f}"
            else:
                shown = str(value)
            sink.write(f"{name:<{width}}  {shown}\n")
    else:
        raise ConfigurationError(f"format must be text, csv or records, got {format!r}")

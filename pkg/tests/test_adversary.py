"""Adversary strategy tests.

The replay attack is cross-checked against a 16-dimensional joint-state
oracle built here with np.kron: Bob's pair tensor Eve's pair, Alice encoding
on Eve's travel qubit, Eve's Bell measurement as an explicit projector, and
her conditional replay on Bob's pair.  Agreement shows the factorized
two-pair representation inside the package is exact.
"""

import numpy as np
import pytest
from conftest import BIT_PAIRS, U_ORACLE, on_travel, oracle_bell

from qdialogue import adversary as adversary_mod
from qdialogue.adversary import (
    BELL_SUBSTITUTION,
    DISTURBANCE,
    MEASURE_RESEND,
    NONE,
    AdversaryChannel,
    EveReport,
    ProtocolOrderError,
)
from qdialogue.bell_core import (
    BellIndex,
    PauliCode,
    Qubit,
    apply_pauli,
    bell_state,
    overlap,
)
from qdialogue.protocol import (
    ALICE,
    BOB,
    MODE_REVEAL,
    OUTCOME_REVEAL,
    Announcement,
    Mode,
    run_round_original,
)
from qdialogue.harness import transcript_to_line


def joint_replay_oracle(bob, eve_code, alice):
    """Full 4-qubit model of the replay attack, qubit order (h, t, h', t').

    Returns (eve_branches, final) where eve_branches maps Eve's possible
    Bell outcomes to their probability, and final maps Bob's measured index
    to its probability after Eve's conditional replay.
    """
    psi = np.kron(oracle_bell(*bob), oracle_bell(*eve_code))
    # Alice encodes on t', the last qubit
    psi = np.kron(np.eye(8), U_ORACLE[alice]) @ psi

    eve_branches = {}
    final = {}
    for xp, yp in BIT_PAIRS:
        b = oracle_bell(xp, yp)
        projector = np.kron(np.eye(4), np.outer(b, b.conj()))
        branch = projector @ psi
        p = float(np.vdot(branch, branch).real)
        eve_branches[(xp, yp)] = p
        if p < 1e-12:
            continue
        post = branch / np.sqrt(p)
        # post factorizes as phi_(h,t) (x) b_(h',t'); contract out Eve's pair
        phi = post.reshape(4, 4) @ b.conj()
        inferred = (xp ^ eve_code[0], yp ^ eve_code[1])
        replayed = on_travel(U_ORACLE[inferred]) @ phi
        for x, y in BIT_PAIRS:
            q = p * abs(np.vdot(oracle_bell(x, y), replayed)) ** 2
            final[(x, y)] = final.get((x, y), 0.0) + q
    return eve_branches, final


class TestTransparency:
    @pytest.mark.parametrize("seed", [0, 7, 123456])
    def test_none_strategy_matches_bare_channel(self, seed):
        for mode in (Mode.MM, Mode.CM):
            bare = run_round_original(
                PauliCode(1, 0), mode, PauliCode(0, 1), None, np.random.default_rng(seed)
            )
            wrapped = run_round_original(
                PauliCode(1, 0),
                mode,
                PauliCode(0, 1),
                AdversaryChannel(NONE),
                np.random.default_rng(seed),
            )
            assert transcript_to_line(bare) == transcript_to_line(wrapped)

    def test_forward_and_return_leave_state_alone(self):
        channel = AdversaryChannel(NONE)
        state = bell_state(BellIndex(1, 0))
        rng = np.random.default_rng(0)
        assert channel.on_forward(state, rng) is state
        assert channel.on_return(state, rng) is state


class TestBellSubstitution:
    def test_forward_hands_alice_eves_pair(self, monkeypatch):
        monkeypatch.setattr(adversary_mod, "random_code", lambda rng: PauliCode(1, 1))
        channel = AdversaryChannel(BELL_SUBSTITUTION)
        world = bell_state(BellIndex(0, 1))
        handed = channel.on_forward(world, np.random.default_rng(0))
        np.testing.assert_allclose(handed.amps, bell_state(BellIndex(1, 1)).amps, atol=1e-12)
        assert channel.eve.stored_bob_pair is world
        assert channel.eve.eve_code == PauliCode(1, 1)

    def test_return_example(self, monkeypatch):
        # Eve's pair (1,0), Alice applies (0,1): Eve infers (0,1) and Bob
        # receives his own pair shifted by exactly that code.
        monkeypatch.setattr(adversary_mod, "random_code", lambda rng: PauliCode(1, 0))
        for k, l in BIT_PAIRS:
            channel = AdversaryChannel(BELL_SUBSTITUTION)
            rng = np.random.default_rng(5)
            handed = channel.on_forward(bell_state(BellIndex(k, l)), rng)
            encoded = apply_pauli(handed, PauliCode(0, 1), Qubit.TRAVEL)
            delivered = channel.on_return(encoded, rng)
            assert channel.eve.inferred_alice == PauliCode(0, 1)
            inner = overlap(bell_state(BellIndex(k, l ^ 1)), delivered)
            assert abs(abs(inner) - 1.0) <= 1e-9

    def test_exhaustive_inference_and_invisibility(self, monkeypatch):
        # all 64 (bob, eve, alice) combinations, no sampling: the inference
        # is always right and the checking round can never fail
        for k, l in BIT_PAIRS:
            for ek, el in BIT_PAIRS:
                for i, j in BIT_PAIRS:
                    monkeypatch.setattr(
                        adversary_mod, "random_code", lambda rng, c=PauliCode(ek, el): c
                    )
                    channel = AdversaryChannel(BELL_SUBSTITUTION)
                    t = run_round_original(
                        PauliCode(k, l),
                        Mode.CM,
                        PauliCode(i, j),
                        channel,
                        np.random.default_rng(1),
                    )
                    assert t.eve_report.inferred_alice == PauliCode(i, j)
                    assert t.outcome == BellIndex(k ^ i, l ^ j)
                    assert t.check_passed is True

    def test_agrees_with_joint_state_oracle(self):
        for bob in BIT_PAIRS:
            for eve in BIT_PAIRS:
                for alice in BIT_PAIRS:
                    eve_branches, final = joint_replay_oracle(bob, eve, alice)
                    # Eve's measurement is deterministic on her Bell pair
                    expected_eve = (alice[0] ^ eve[0], alice[1] ^ eve[1])
                    assert eve_branches[expected_eve] == pytest.approx(1.0, abs=1e-9)
                    # and Bob's final index is the honest XOR with certainty
                    honest = (bob[0] ^ alice[0], bob[1] ^ alice[1])
                    assert final[honest] == pytest.approx(1.0, abs=1e-9)

    def test_state_is_confined_to_the_legs(self, monkeypatch):
        monkeypatch.setattr(adversary_mod, "random_code", lambda rng: PauliCode(0, 1))
        channel = AdversaryChannel(BELL_SUBSTITUTION)
        rng = np.random.default_rng(2)
        handed = channel.on_forward(bell_state(BellIndex(0, 0)), rng)
        assert channel.eve.stored_bob_pair is not None
        assert channel.eve.eve_pair is not None
        encoded = apply_pauli(handed, PauliCode(1, 1), Qubit.TRAVEL)
        channel.on_return(encoded, rng)
        assert channel.eve.stored_bob_pair is None
        assert channel.eve.eve_pair is None
        assert channel.eve.inferred_alice == PauliCode(1, 1)


class TestDisturbance:
    @pytest.mark.parametrize("code", [PauliCode(a, b) for a, b in BIT_PAIRS])
    def test_check_passes_iff_identity_code(self, code, monkeypatch):
        monkeypatch.setattr(adversary_mod, "random_code", lambda rng: code)
        for k, l in BIT_PAIRS:
            for i, j in BIT_PAIRS:
                t = run_round_original(
                    PauliCode(k, l),
                    Mode.CM,
                    PauliCode(i, j),
                    AdversaryChannel(DISTURBANCE),
                    np.random.default_rng(3),
                )
                assert t.outcome == BellIndex(k ^ i ^ code.k, l ^ j ^ code.l)
                assert t.check_passed is (code == PauliCode(0, 0))

    def test_forward_leg_untouched(self):
        channel = AdversaryChannel(DISTURBANCE)
        state = bell_state(BellIndex(1, 1))
        assert channel.on_forward(state, np.random.default_rng(0)) is state


class TestMeasureResend:
    def test_forward_collapses_anchor_to_product(self):
        rng = np.random.default_rng(9)
        ket01 = np.array([0, 1, 0, 0], dtype=complex)
        ket10 = np.array([0, 0, 1, 0], dtype=complex)
        hits = {"01": 0, "10": 0}
        n = 2000
        for _ in range(n):
            channel = AdversaryChannel(MEASURE_RESEND)
            out = channel.on_forward(bell_state(BellIndex(0, 0)), rng)
            if np.allclose(out.amps, ket01, atol=1e-12):
                hits["01"] += 1
            elif np.allclose(out.amps, ket10, atol=1e-12):
                hits["10"] += 1
            else:
                pytest.fail(f"unexpected post-tap state {out.amps}")
        sigma = (0.25 / n) ** 0.5
        assert abs(hits["01"] / n - 0.5) <= 3 * sigma

    def test_return_leg_untouched(self):
        channel = AdversaryChannel(MEASURE_RESEND)
        rng = np.random.default_rng(0)
        channel.on_forward(bell_state(BellIndex(0, 0)), rng)
        state = bell_state(BellIndex(0, 1))
        assert channel.on_return(state, rng) is state


class TestObservePublic:
    def _substitution_channel_with(self, inferred):
        channel = AdversaryChannel(BELL_SUBSTITUTION)
        channel.eve.inferred_alice = inferred
        return channel

    def test_public_outcome_gives_bobs_code(self):
        channel = self._substitution_channel_with(PauliCode(0, 1))
        announcements = [
            Announcement(ALICE, MODE_REVEAL, Mode.MM),
            Announcement(BOB, OUTCOME_REVEAL, BellIndex(1, 1)),
        ]
        report = channel.observe_public(announcements)
        assert report.inferred_alice == PauliCode(0, 1)
        assert report.inferred_bob_public == PauliCode(1, 0)
        assert report.inferred_bob_private is None

    def test_none_strategy_reports_nothing(self):
        channel = AdversaryChannel(NONE)
        report = channel.observe_public([Announcement(BOB, OUTCOME_REVEAL, BellIndex(1, 1))])
        assert report == EveReport()
        assert report.is_empty()

    def test_no_outcome_reveal_means_no_bob_inference(self):
        channel = self._substitution_channel_with(PauliCode(1, 0))
        announcements = [
            Announcement(BOB, MODE_REVEAL, Mode.CM),
            Announcement(ALICE, MODE_REVEAL, Mode.MM),
        ]
        report = channel.observe_public(announcements)
        assert report.inferred_alice == PauliCode(1, 0)
        assert report.inferred_bob_public is None


class TestChannelOrdering:
    def test_return_before_forward_faults(self):
        channel = AdversaryChannel(BELL_SUBSTITUTION)
        with pytest.raises(ProtocolOrderError):
            channel.on_return(bell_state(BellIndex(0, 0)), np.random.default_rng(0))

    def test_double_forward_faults(self):
        channel = AdversaryChannel(NONE)
        rng = np.random.default_rng(0)
        channel.on_forward(bell_state(BellIndex(0, 0)), rng)
        with pytest.raises(ProtocolOrderError):
            channel.on_forward(bell_state(BellIndex(0, 0)), rng)

    def test_unknown_strategy_rejected(self):
        with pytest.raises(ValueError, match="unknown strategy"):
            AdversaryChannel("entangle-and-measure")

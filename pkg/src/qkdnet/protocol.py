"""Orchestration of the two center-mediated distribution protocols.

Protocol 1: the center prepares n-qubit cat states, authenticates each
member's block, members measure in random X/Y directions, rounds whose
announced direction counts have odd joint parity are discarded, and a
random test subset of the derived bits is compared publicly.

Protocol 2: the center keeps one qubit per copy in memory, chooses its own
measurement direction after the members announce theirs (so the joint
parity is always even), and reveals its outcome; no round is discarded.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field, asdict

import numpy as np

from . import auth, states
from .adversary import AdversarySpec
from .errors import CapacityError, InvalidArgumentError, StateError
from .stabilizer import gen_purity_family

CENTER = "C"


@dataclass
class NetworkConfig:
    n: int                      # total members across both parties
    m: int                      # size of party A
    t: int = 2                  # logical block size (copies per round)
    rounds: int = 100
    test_fraction: float = 0.2
    protocol: int = 1
    auth_enabled: bool = True
    family_params: tuple = (2, 2)
    shared_family: bool = False
    collector_a: int = 0        # ring position of the collector in each party
    collector_b: int = 0

    def __post_init__(self):
        if not 1 <= self.m < self.n:
            raise InvalidArgumentError("need 1 <= m < n")
        if self.rounds < 1:
            raise InvalidArgumentError("need at least one round")
        if not 0.0 < self.test_fraction < 1.0:
            raise InvalidArgumentError("test_fraction must be in (0, 1)")
        if self.protocol not in (1, 2):
            raise InvalidArgumentError("protocol must be 1 or 2")
        if self.t < 1:
            raise InvalidArgumentError("t must be >= 1")
        r, s = self.family_params
        if self.auth_enabled and self.t != (r - 1) * s:
            raise InvalidArgumentError(
                f"auth needs t = (r-1)s = {(r - 1) * s}, got {self.t}")

    @property
    def members(self) -> list:
        return [f"m{i}" for i in range(1, self.n + 1)]

    @property
    def party_a(self) -> list:
        return self.members[: self.m]

    @property
    def party_b(self) -> list:
        return self.members[self.m:]

    def qubit_budget(self) -> int:
        base = self.n * self.t + (self.t if self.protocol == 2 else 0)
        if self.auth_enabled:
            r, s = self.family_params
            base += r * s - self.t  # widest point: one block expanded to u
        return base


@dataclass
class RoundRecord:
    """One distributed cat-state copy and everything announced about it."""

    round_index: int
    copy_index: int
    bases: dict        # member -> announced direction ("X"/"Y")
    outcomes: dict     # member -> true outcome bit
    y_a: int = 0       # announced Y-direction count mod 4, party A
    y_b: int = 0
    m_a: int | None = None   # collected outcome parity (None if undetermined)
    m_b: int | None = None
    center_basis: str | None = None
    center_outcome: int | None = None
    sifted: bool = False
    b_a: int | None = None
    b_b: int | None = None

    @property
    def ybar_a(self) -> int:
        return self.y_a // 2

    @property
    def ybar_b(self) -> int:
        return self.y_b // 2

    @property
    def undetermined(self) -> bool:
        return self.m_a is None or self.m_b is None

    def to_dict(self) -> dict:
        d = asdict(self)
        return d


@dataclass
class Transcript:
    config: NetworkConfig
    seed: object
    records: list = field(default_factory=list)
    aborts: list = field(default_factory=list)
    test_indices: list = field(default_factory=list)
    verdict: str | None = None
    key_a: list = field(default_factory=list)
    key_b: list = field(default_factory=list)
    observed_error_rate: float | None = None

    def summary(self) -> dict:
        recs = self.records
        sifted = [r for r in recs if r.sifted and not r.undetermined]
        discarded = [r for r in recs if not r.sifted]
        undet = [r for r in recs if r.undetermined]
        return {
            "records": len(recs),
            "sifted": len(sifted),
            "discarded": len(discarded),
            "undetermined": len(undet),
            "aborted_rounds": len([a for a in self.aborts
                                   if a["cause"] == "syndrome-reject"]),
            "abort_causes": sorted({a["cause"] for a in self.aborts}),
            "test_bits": len(self.test_indices),
            "key_length": len(self.key_a),
            "error_rate": self.observed_error_rate,
            "verdict": self.verdict,
        }


def ring_collect(outcomes, rng):
    """Blinded ring XOR collection; returns (parity, transferred messages).

    The collector (position 0) draws a random blinding bit R, sends
    R xor own outcome; each member XORs in its outcome; the collector
    removes R from the returned message.
    """
    outcomes = [o for o in outcomes]
    if not outcomes:
        raise InvalidArgumentError("need at least one outcome")
    if any(o is None for o in outcomes):
        return None, []
    if len(outcomes) == 1:
        return int(outcomes[0]) & 1, []
    r = int(rng.integers(0, 2))
    messages = []
    acc = r
    for o in outcomes:
        acc ^= int(o) & 1
        messages.append(acc)
    parity = messages[-1] ^ r
    return parity, messages


def sift(records, protocol: int = 1):
    """Mark and return the records kept by the direction-parity rule."""
    kept = []
    for rec in records:
        if protocol == 2:
            rec.sifted = True
        else:
            rec.sifted = (rec.y_a + rec.y_b) % 2 == 0
        if rec.sifted and not rec.undetermined:
            kept.append(rec)
    return kept


def derive_key_bits(record: RoundRecord, protocol: int = 1):
    """Per-record key bits; party B applies the reconciliation correction
    so that b_a == b_b on noiseless runs."""
    if record.undetermined:
        raise StateError("cannot derive bits from an undetermined record")
    if protocol == 2:
        if record.center_outcome is None or record.center_basis is None:
            raise StateError("protocol 2 needs the center outcome")
        y_c = 1 if record.center_basis == "Y" else 0
        b_c = record.center_outcome  # ybar of a single qubit is 0
    else:
        y_c, b_c = 0, 0
    b_a = record.ybar_a ^ record.m_a
    b_b_raw = record.ybar_b ^ record.m_b
    total = (record.y_a + record.y_b + y_c) % 4
    if (record.y_a + record.y_b + y_c) % 2 == 1:
        raise StateError("determinate correlation needs even joint Y parity")
    h = record.ybar_a ^ record.ybar_b ^ (y_c // 2) ^ (total // 2)
    b_b = b_b_raw ^ b_c ^ h
    record.b_a, record.b_b = b_a, b_b
    return b_a, b_b


def test_and_finalize(records, test_fraction: float, rng):
    """Public comparison on a random test subset of the sifted bits."""
    usable = [r for r in records if r.sifted and not r.undetermined]
    if not usable:
        raise InvalidArgumentError("no sifted bits to test")
    k = int(test_fraction * len(usable))
    if k < 1:
        raise InvalidArgumentError("test_fraction yields an empty test set")
    order = rng.permutation(len(usable))
    test_idx = sorted(int(i) for i in order[:k])
    mismatches = sum(1 for i in test_idx if usable[i].b_a != usable[i].b_b)
    observed = mismatches / k
    if mismatches:
        return "Fail", [], [], observed, test_idx
    keep = [r for i, r in enumerate(usable) if i not in set(test_idx)]
    key_a = [r.b_a for r in keep]
    key_b = [r.b_b for r in keep]
    return "Pass", key_a, key_b, observed, test_idx


def _make_rng(rng_or_seed):
    if isinstance(rng_or_seed, np.random.Generator):
        return rng_or_seed, None
    return np.random.default_rng(rng_or_seed), rng_or_seed


def _build_families(config: NetworkConfig, rng):
    r, s = config.family_params
    if config.shared_family:
        fam = gen_purity_family(r, s, seed=int(rng.integers(2 ** 32)))
        return {mu: fam for mu in config.members}
    return {mu: gen_purity_family(r, s, seed=int(rng.integers(2 ** 32)))
            for mu in config.members}


def _initial_state(config: NetworkConfig):
    """Owner-major joint state of t cat-state copies."""
    owners = config.members + ([CENTER] if config.protocol == 2 else [])
    copies = []
    for c in range(config.t):
        labels = [(mu, c) for mu in owners]
        copies.append(states.make_cat(len(owners), states.PHI_PLUS, labels))
    state = copies[0]
    for extra in copies[1:]:
        state = states.tensor(state, extra)
    order = [(mu, c) for mu in owners for c in range(config.t)]
    return states.permute_labels(state, order)


def _authenticated_transit(config, families, adversary, state, rng, aborts,
                           round_index):
    """Per-member authenticated send/receive; returns state or None on abort."""
    for mu in config.members:
        fam = families[mu]
        keys = auth.keygen(fam, config.t, rng)
        block = [(mu, c) for c in range(config.t)]
        phys = [(mu, i) for i in range(fam.u)]
        state = auth.auth_send_in_place(keys, fam, state, block,
                                        out_labels=phys)
        for ch in adversary.channels_for(mu):
            state = ch.sample_apply(state, phys, rng)
        outcome = auth.auth_receive_in_place(keys, fam, state, phys, rng,
                                             out_labels=block)
        if not outcome.accepted:
            aborts.append({"round": round_index, "cause": "syndrome-reject",
                           "member": mu})
            return None
        state = outcome.logical_state
    return state


def _unauthenticated_transit(config, adversary, state, rng):
    for mu in config.members:
        labels = [(mu, c) for c in range(config.t)]
        for ch in adversary.channels_for(mu):
            state = ch.sample_apply(state, labels, rng)
    return state


def _measure_members(config, state, rng):
    bases = {}
    outcomes = {}
    for mu in config.members:
        bases[mu] = []
        outcomes[mu] = []
        for c in range(config.t):
            b = "X" if rng.integers(0, 2) == 0 else "Y"
            bit, state = states.measure_qubit(state, (mu, c), b, rng)
            bases[mu].append(b)
            outcomes[mu].append(bit)
    return bases, outcomes, state


def _announced_bases(config, adversary, bases, rng):
    announced = {}
    for mu in config.members:
        spec = adversary.dishonest_for(mu)
        announced[mu] = []
        for b in bases[mu]:
            if spec is not None and spec.mode == "lie_basis":
                announced[mu].append("Y" if b == "X" else "X")
            else:
                announced[mu].append(b)
    return announced


def _party_ring(config, party, collector_pos):
    k = collector_pos % len(party)
    return party[k:] + party[:k]


def _collect_party_parity(config, party, collector_pos, adversary, outcomes,
                          copy, rng):
    ring = _party_ring(config, party, collector_pos)
    contributions = []
    for mu in ring:
        spec = adversary.dishonest_for(mu)
        truth = outcomes[mu][copy]
        from .adversary import corrupt_announcement
        contributions.append(corrupt_announcement(truth, spec, rng))
    parity, _ = ring_collect(contributions, rng)
    return parity


def _run(config: NetworkConfig, adversary: AdversarySpec, rng_or_seed):
    rng, seed = _make_rng(rng_or_seed)
    if config.qubit_budget() > states.MAX_QUBITS:
        raise CapacityError(
            f"configuration needs {config.qubit_budget()} qubits at its "
            f"widest point, above the cap of {states.MAX_QUBITS}")
    families = _build_families(config, rng) if config.auth_enabled else None
    transcript = Transcript(config=config, seed=seed)
    center_drop = adversary.dishonest_for(CENTER)
    for rnd in range(config.rounds):
        state = _initial_state(config)
        if config.auth_enabled:
            state = _authenticated_transit(config, families, adversary, state,
                                           rng, transcript.aborts, rnd)
            if state is None:
                continue
        else:
            state = _unauthenticated_transit(config, adversary, state, rng)
        bases, outcomes, state = _measure_members(config, state, rng)
        announced = _announced_bases(config, adversary, bases, rng)
        for c in range(config.t):
            y_a = sum(1 for mu in config.party_a
                      if announced[mu][c] == "Y") % 4
            y_b = sum(1 for mu in config.party_b
                      if announced[mu][c] == "Y") % 4
            rec = RoundRecord(round_index=rnd, copy_index=c,
                              bases={mu: announced[mu][c]
                                     for mu in config.members},
                              outcomes={mu: outcomes[mu][c]
                                        for mu in config.members},
                              y_a=y_a, y_b=y_b)
            if config.protocol == 2:
                cb = "Y" if (y_a + y_b) % 2 == 1 else "X"
                bit, state = states.measure_qubit(state, (CENTER, c), cb, rng)
                if center_drop is not None and center_drop.mode == "silent_drop":
                    rec.center_basis, rec.center_outcome = None, None
                else:
                    rec.center_basis, rec.center_outcome = cb, bit
            rec.m_a = _collect_party_parity(config, config.party_a,
                                            config.collector_a, adversary,
                                            outcomes, c, rng)
            rec.m_b = _collect_party_parity(config, config.party_b,
                                            config.collector_b, adversary,
                                            outcomes, c, rng)
            transcript.records.append(rec)
    kept = sift(transcript.records, config.protocol)
    usable = []
    for rec in kept:
        if config.protocol == 2 and rec.center_outcome is None:
            rec.m_a = None  # undetermined correlation: center withheld
            continue
        derive_key_bits(rec, config.protocol)
        usable.append(rec)
    if usable:
        verdict, key_a, key_b, observed, test_idx = test_and_finalize(
            usable, config.test_fraction, rng)
        transcript.verdict = verdict
        transcript.key_a, transcript.key_b = key_a, key_b
        transcript.observed_error_rate = observed
        transcript.test_indices = test_idx
        if verdict == "Fail":
            transcript.aborts.append({"round": None,
                                      "cause": "test-bit-mismatch"})
    else:
        transcript.verdict = "Fail"
        transcript.aborts.append({"round": None, "cause": "no-usable-bits"})
    return transcript


def run_protocol1(config: NetworkConfig, adversary: AdversarySpec,
                  rng_or_seed) -> Transcript:
    if config.protocol != 1:
        raise InvalidArgumentError("config.protocol must be 1")
    return _run(config, adversary, rng_or_seed)


def run_protocol2(config: NetworkConfig, adversary: AdversarySpec,
                  rng_or_seed) -> Transcript:
    if config.protocol != 2:
        raise InvalidArgumentError("config.protocol must be 2")
    return _run(config, adversary, rng_or_seed)


# --------------------------------------------------------------------------
# serialization
# --------------------------------------------------------------------------

def transcript_to_jsonl(transcript: Transcript,
                        reveal_secrets: bool = False) -> str:
    """JSON lines: one object per record, then a summary block.

    Final key material counts as secret and is redacted unless requested.
    """
    cfg = transcript.config
    lines = []
    header = {
        "config": {
            "n": cfg.n, "m": cfg.m, "t": cfg.t, "rounds": cfg.rounds,
            "test_fraction": cfg.test_fraction, "protocol": cfg.protocol,
            "auth_enabled": cfg.auth_enabled,
            "family_params": list(cfg.family_params),
        },
        "seed": transcript.seed,
    }
    lines.append(json.dumps({"header": header}, sort_keys=True))
    for rec in transcript.records:
        d = rec.to_dict()
        lines.append(json.dumps({"record": d}, sort_keys=True))
    for ab in transcript.aborts:
        lines.append(json.dumps({"abort": ab}, sort_keys=True))
    summary = transcript.summary()
    summary["test_indices"] = transcript.test_indices
    if reveal_secrets:
        summary["key_a"] = transcript.key_a
        summary["key_b"] = transcript.key_b
    lines.append(json.dumps({"summary": summary}, sort_keys=True))
    return "\n".join(lines) + "\n"

"""Correctness, privacy and randomness checks for linear schemes.

Two independent privacy routes are provided. The algebraic route checks that
``[F[k] | H]`` is invertible for every k, which makes the answers uniform.
The enumeration route walks every ``(W_k, Z)`` and compares, across k, the
exact multiset of ``(answers, delivered value)`` pairs.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional

import numpy as np

from .matrix import identity, rank
from .schemes import Scheme

DEFAULT_BUDGET = 10**7
_CHUNK = 1 << 18
_CACHE_ENTRIES = 1 << 25

PASSED = "passed"
SKIPPED = "skipped"
FAILED = "failed"


def correctness_findings(s: Scheme) -> list[str]:
    out = []
    if not (s.G @ s.H).is_zero():
        out.append("G H != 0: randomness does not cancel at the decoder")
    eye = identity(s.field, s.L)
    for k, f in s.F.items():
        if s.G @ f != eye:
            out.append(f"k={k}: G F[k] != I_{s.L}")
    return out


def check_correctness(s: Scheme) -> bool:
    return not correctness_findings(s)


def rank_findings(s: Scheme) -> list[str]:
    out = []
    for k in s.F:
        r = rank(s.privacy_matrix(k))
        if r < s.download:
            out.append(f"k={k}: rank([F[k] | H]) = {r} < {s.download}")
    return out


def check_privacy_rank(s: Scheme) -> bool:
    return not rank_findings(s)


def storage_findings(s: Scheme) -> list[str]:
    out = []
    for k, f in s.F.items():
        for n in range(1, s.N + 1):
            if not s.storage.stores(n, k) and f.array[np.array(s.server_rows(n), dtype=np.int64) - 1].any():
                out.append(f"k={k}: server {n} encodes message {k} without storing it")
    return out


def check_security(s: Scheme) -> bool:
    """Answers for k depend only on stored copies of ``W_k`` and on ``Z``."""
    return not storage_findings(s)


def check_eta(s: Scheme) -> bool:
    rate = Fraction(s.L, sum(s.D))
    return Fraction(s.H.cols, s.L) == 1 / rate - 1


@dataclass
class ExhaustiveResult:
    status: str
    states: int
    uniform: Optional[dict] = None
    counterexample: Optional[dict] = None

    @property
    def passed(self) -> bool:
        return self.status == PASSED

    def to_dict(self) -> dict:
        doc = {"status": self.status, "states_per_k": self.states}
        if self.uniform is not None:
            doc["uniform_answers"] = {str(k): v for k, v in self.uniform.items()}
        if self.counterexample is not None:
            doc["counterexample"] = self.counterexample
        return doc


def _digits(start: int, stop: int, p: int, width: int) -> np.ndarray:
    idx = np.arange(start, stop, dtype=np.int64)
    out = np.empty((width, idx.size), dtype=np.float64)
    for i in range(width):
        out[i] = idx % p
        idx //= p
    return out


class _Inputs:
    """All (W_k, Z) vectors in chunks, kept in memory when small enough."""

    def __init__(self, p: int, width: int):
        self.p, self.width = p, width
        self.states = p**width
        self._cached = None
        if self.states * width <= _CACHE_ENTRIES:
            self._cached = [(a, b, _digits(a, b, p, width)) for a, b in self._bounds()]

    def _bounds(self):
        for start in range(0, self.states, _CHUNK):
            yield start, min(self.states, start + _CHUNK)

    def __iter__(self):
        if self._cached is not None:
            return iter(self._cached)
        return ((a, b, _digits(a, b, self.p, self.width)) for a, b in self._bounds())


def _joint_codes(s: Scheme, k: int, inputs: _Inputs) -> np.ndarray:
    """Integer codes of (answers, W_k) over all inputs.

    The float64 product ``B @ x`` is exact: its entries are below D * p**2.
    """
    p, D, L = s.p, s.download, s.L
    B = s.privacy_matrix(k).array.astype(np.float64)
    weights = p ** np.arange(D, dtype=np.int64)
    wl = float(p) ** np.arange(L)
    joint = np.empty(inputs.states, dtype=np.int64)
    for start, stop, x in inputs:
        a = (B @ x).astype(np.int64)
        a %= p
        joint[start:stop] = (weights @ a) * p**L + (wl @ x[:L]).astype(np.int64)
    return joint


def _decode_code(code: int, p: int, D: int, L: int) -> dict:
    value, ans = code % (p**L), code // (p**L)
    return {
        "answers": [(ans // p**i) % p for i in range(D)],
        "value": [(value // p**i) % p for i in range(L)],
    }


def check_privacy_exhaustive(s: Scheme, budget: int = DEFAULT_BUDGET) -> ExhaustiveResult:
    """Exact comparison of the (answers, W_k) distribution across all k."""
    states = s.p**s.download
    # joint codes must stay exact in float64 and int64
    if states > budget or states * s.p**s.L >= 2**53:
        return ExhaustiveResult(SKIPPED, states)
    inputs = _Inputs(s.p, s.download)
    reference = None
    uniform = {}
    counterexample = None
    for k in range(1, s.K + 1):
        joint = _joint_codes(s, k, inputs)
        joint.sort()
        # sorting by joint code also sorts by answer code
        answers = joint // s.p**s.L
        uniform[k] = bool(states == 1 or np.count_nonzero(np.diff(answers)) == states - 1)
        if reference is None:
            reference = joint
        elif counterexample is None and not np.array_equal(joint, reference):
            vals_k, counts_k = np.unique(joint, return_counts=True)
            vals_r, counts_r = np.unique(reference, return_counts=True)
            ck = dict(zip(vals_k.tolist(), counts_k.tolist()))
            cr = dict(zip(vals_r.tolist(), counts_r.tolist()))
            code = min(c for c in set(ck) | set(cr) if ck.get(c, 0) != cr.get(c, 0))
            counterexample = {
                "k": k,
                "reference_k": 1,
                "outcome": _decode_code(code, s.p, s.download, s.L),
                "count_k": ck.get(code, 0),
                "count_reference": cr.get(code, 0),
            }
    status = FAILED if counterexample else PASSED
    return ExhaustiveResult(status, states, uniform, counterexample)


def oracle_equivalence(s: Scheme, budget: int = DEFAULT_BUDGET) -> bool:
    """Does the rank test agree with enumerated answer uniformity, index by index?

    For every k, ``[F[k] | H]`` has full rank exactly when the enumerated
    answers for k are uniform over ``F_p^D``.
    """
    result = check_privacy_exhaustive(s, budget)
    if result.status == SKIPPED:
        raise ValueError(f"{result.states} states per index exceed the budget {budget}")
    for k in s.F:
        full = rank(s.privacy_matrix(k)) == s.download
        if full != result.uniform[k]:
            return False
    return True


@dataclass
class VerificationReport:
    correctness_ok: bool
    rank_privacy_ok: bool
    exhaustive_privacy: ExhaustiveResult
    security_ok: bool
    eta_ok: bool
    details: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return (
            self.correctness_ok
            and self.rank_privacy_ok
            and self.security_ok
            and self.eta_ok
            and self.exhaustive_privacy.status != FAILED
        )

    def to_dict(self) -> dict:
        return {
            "ok": self.ok,
            "correctness_ok": self.correctness_ok,
            "rank_privacy_ok": self.rank_privacy_ok,
            "exhaustive_privacy": self.exhaustive_privacy.to_dict(),
            "security_ok": self.security_ok,
            "eta_ok": self.eta_ok,
            "details": list(self.details),
        }


def verify(s: Scheme, budget: int = DEFAULT_BUDGET) -> VerificationReport:
    correct = correctness_findings(s)
    ranks = rank_findings(s)
    storage = storage_findings(s)
    exhaustive = check_privacy_exhaustive(s, budget)
    details = correct + ranks + storage
    if exhaustive.counterexample:
        ce = exhaustive.counterexample
        details.append(
            f"k={ce['k']}: outcome {ce['outcome']} occurs {ce['count_k']} times, "
            f"{ce['count_reference']} times for k={ce['reference_k']}"
        )
    eta = check_eta(s)
    if not eta:
        details.append("randomness size does not equal 1/rate - 1")
    return VerificationReport(not correct, not ranks, exhaustive, not storage, eta, details)

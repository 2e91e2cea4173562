"""Rate upper bounds by exhaustive search over replicated storage designs.

For a fixed design, any message stored only on servers ``S`` forces the
answers from ``S`` to carry at least a full message, so the total download
per message symbol is at least the optimum of a fractional covering LP over
the availability sets. Maximising ``1 / LP`` over every design bounds the
rate of every scheme.

The search only needs families of distinct, full servers:

* giving a server more messages only enlarges availability sets, which
  weakens the constraints, so full servers dominate;
* two servers with identical contents can be merged without changing the
  achievable rate, so only distinct storage sets need enumerating;
* adding a further distinct server can never hurt, so it suffices to look
  at families of exactly ``min(N, C(K, M))`` servers.

The LP value of any design is at least K/M (sum the constraints; each server
appears in at most M of them), so the search stops as soon as a design
reaches that floor.
"""

from __future__ import annotations

import os
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from math import comb
from typing import Iterator, Sequence

from .capacity import RegimeError, min_servers
from .design import DesignError, StorageDesign
from .lp import CoveringSolution, solve_covering_lp

DEFAULT_DESIGN_BUDGET = 10**6


class BudgetExceeded(RuntimeError):
    def __init__(self, estimate: int, budget: int):
        super().__init__(f"search would examine up to {estimate} designs, budget is {budget}")
        self.estimate = estimate
        self.budget = budget


def default_budget() -> int:
    env = os.environ.get("PIDKIT_BUDGET")
    return int(env) if env else DEFAULT_DESIGN_BUDGET


def availability_constraints(d: StorageDesign) -> list[tuple[int, ...]]:
    """Availability set of every message, first occurrence order, duplicates dropped."""
    missing = d.uncovered()
    if missing:
        raise DesignError(f"messages {missing} are not stored anywhere")
    out = []
    for k in range(1, d.K + 1):
        s = d.availability(k)
        if s not in out:
            out.append(s)
    return out


def min_download(constraints: Sequence[Sequence[int]], n_servers: int) -> Fraction:
    """Least total download per message symbol allowed by the given availability sets."""
    return solve_covering_lp(constraints, n_servers).value


def unique_holder_property(d: StorageDesign) -> bool:
    """Every server holds at least one message that no other server holds."""
    counts = {}
    for s in d.sets:
        for k in s:
            counts[k] = counts.get(k, 0) + 1
    return all(any(counts[k] == 1 for k in s) for s in d.sets)


@dataclass(frozen=True)
class ConverseCertificate:
    K: int
    M: int
    N: int
    best_design: StorageDesign
    constraints: tuple[tuple[int, ...], ...]
    lp_value: Fraction
    loads: tuple[Fraction, ...]
    weights: tuple[Fraction, ...]
    designs_examined: int
    symmetry: bool
    reached_floor: bool

    @property
    def rate_bound(self) -> Fraction:
        return 1 / self.lp_value

    @property
    def has_partial_server(self) -> bool:
        """The winning design leaves some server below capacity."""
        return any(len(s) < self.M for s in self.best_design.sets)

    def is_consistent(self) -> bool:
        """Re-derive the constraints from the design and re-check LP optimality."""
        if tuple(availability_constraints(self.best_design)) != self.constraints:
            return False
        sol = CoveringSolution(self.lp_value, self.loads, self.weights)
        return sol.is_certified(self.constraints) and self.lp_value >= 1

    def to_dict(self) -> dict:
        def frac(x):
            return {"num": x.numerator, "den": x.denominator}

        return {
            "K": self.K,
            "M": self.M,
            "N": self.N,
            "design": self.best_design.to_lists(),
            "constraints": [list(c) for c in self.constraints],
            "lp_value": frac(self.lp_value),
            "rate_bound": frac(self.rate_bound),
            "loads": [frac(x) for x in self.loads],
            "weights": [frac(x) for x in self.weights],
            "designs_examined": self.designs_examined,
            "symmetry": self.symmetry,
            "reached_floor": self.reached_floor,
            "has_partial_server": self.has_partial_server,
            "reasoning": (
                "families of min(N, C(K,M)) distinct full servers dominate all designs: "
                "merging identical servers preserves the rate, and adding messages or "
                "servers only relaxes the availability constraints"
            ),
        }


def _masks(K: int, M: int) -> list[int]:
    return [sum(1 << i for i in c) for c in combinations(range(K), M)]


def _families_plain(subsets: list[int], size: int, full: int, M: int) -> Iterator[tuple[int, ...]]:
    """All covering families of ``size`` distinct subsets, in lexicographic order."""
    n = len(subsets)

    def rec(start, chosen, covered):
        left = size - len(chosen)
        if left == 0:
            if covered == full:
                yield tuple(chosen)
            return
        if bin(full & ~covered).count("1") > left * M:
            return
        for i in range(start, n - left + 1):
            chosen.append(i)
            yield from rec(i + 1, chosen, covered | subsets[i])
            chosen.pop()

    yield from rec(0, [], 0)


def _families_symmetric(subsets: list[int], size: int, K: int, M: int) -> Iterator[tuple[int, ...]]:
    """Covering families up to message relabelling.

    Any family can be relabelled so that it contains {1..M} and, if t is its
    largest pairwise overlap, also {1..t} + {M+1..2M-t}; every other member
    then overlaps each member in at most t messages.
    """
    full = (1 << K) - 1
    first = subsets[0]
    if size == 1:
        if first == full:
            yield (0,)
        return
    index = {m: i for i, m in enumerate(subsets)}
    for t in range(M - 1, -1, -1):
        if 2 * M - t > K:
            continue
        second = sum(1 << i for i in range(t)) + sum(1 << i for i in range(M, 2 * M - t))
        j = index[second]
        pool = [
            i
            for i, m in enumerate(subsets)
            if i not in (0, j) and bin(m & first).count("1") <= t and bin(m & second).count("1") <= t
        ]

        def rec(start, chosen, covered, left):
            if left == 0:
                if covered == full:
                    yield tuple(sorted((0, j, *chosen)))
                return
            if bin(full & ~covered).count("1") > left * M:
                return
            for pos in range(start, len(pool) - left + 1):
                m = subsets[pool[pos]]
                if any(bin(m & subsets[c]).count("1") > t for c in chosen):
                    continue
                chosen.append(pool[pos])
                yield from rec(pos + 1, chosen, covered | m, left - 1)
                chosen.pop()

        yield from rec(0, [], first | second, size - 2)


def search_size(K: int, M: int, N: int) -> int:
    return min(N, comb(K, M))


def estimate_designs(K: int, M: int, N: int, symmetry: bool = True) -> int:
    """Upper bound on the number of families the search may visit."""
    total = comb(K, M)
    size = search_size(K, M, N)
    if not symmetry or size == 1:
        return comb(total, size)
    n_overlaps = sum(1 for t in range(M) if 2 * M - t <= K)
    return n_overlaps * comb(total - 2, size - 2)


def converse_rate(
    K: int,
    M: int,
    N: int,
    budget: int | None = None,
    symmetry: bool = True,
) -> ConverseCertificate:
    """Largest rate any replicated design with N servers could support.

    ``symmetry=False`` searches every family in lexicographic order, so the
    returned design is the lexicographically smallest maximiser; with
    symmetry on, the rate bound is identical but the witness design may be a
    relabelled one.
    """
    if K < 1 or not 1 <= M <= K:
        raise RegimeError(f"need 1 <= M <= K, got K={K}, M={M}")
    if N < min_servers(K, M):
        raise RegimeError(f"N={N} < ceil(K/M)={min_servers(K, M)}: infeasible")
    budget = default_budget() if budget is None else budget
    estimate = estimate_designs(K, M, N, symmetry)
    if estimate > budget:
        raise BudgetExceeded(estimate, budget)

    subsets = _masks(K, M)
    members = [[i for i in range(K) if m >> i & 1] for m in subsets]
    size = search_size(K, M, N)
    full = (1 << K) - 1
    floor = Fraction(K, M)
    families = _families_symmetric(subsets, size, K, M) if symmetry else _families_plain(subsets, size, full, M)

    cache: dict[tuple[int, ...], Fraction] = {}
    best_value, best_family = None, None
    examined = 0
    for fam in families:
        examined += 1
        avail = [0] * K
        for j, idx in enumerate(fam):
            for i in members[idx]:
                avail[i] |= 1 << j
        minimal = []
        for a in sorted(set(avail), key=lambda x: (bin(x).count("1"), x)):
            if not any(b & a == b for b in minimal):
                minimal.append(a)
        key = tuple(sorted(minimal))
        value = cache.get(key)
        if value is None:
            cons = [[j + 1 for j in range(size) if a >> j & 1] for a in key]
            value = cache[key] = min_download(cons, size)
        if best_value is None or value < best_value:
            best_value, best_family = value, fam
            if value == floor:
                break

    design = StorageDesign(K, M, tuple(tuple(i + 1 for i in members[idx]) for idx in best_family))
    constraints = tuple(availability_constraints(design))
    sol = solve_covering_lp(constraints, size)
    assert sol.value == best_value
    return ConverseCertificate(
        K=K,
        M=M,
        N=N,
        best_design=design,
        constraints=constraints,
        lp_value=sol.value,
        loads=sol.loads,
        weights=sol.weights,
        designs_examined=examined,
        symmetry=symmetry,
        reached_floor=best_value == floor,
    )


def enumerate_designs(K: int, M: int, N: int, sizes: Sequence[int] | None = None) -> Iterator[StorageDesign]:
    """Every covering design on N servers, as a multiset of storage sets.

    ``sizes`` restricts the allowed storage set sizes (default ``0..M``).
    Servers are unordered, so each multiset is produced once.
    """
    sizes = range(0, M + 1) if sizes is None else sizes
    subsets = [c for r in sorted(sizes) for c in combinations(range(1, K + 1), r)]
    masks = [sum(1 << (k - 1) for k in c) for c in subsets]
    full = (1 << K) - 1

    def rec(start, chosen, covered):
        left = N - len(chosen)
        if left == 0:
            if covered == full:
                yield StorageDesign(K, M, tuple(subsets[i] for i in chosen))
            return
        if bin(full & ~covered).count("1") > left * M:
            return
        for i in range(start, len(subsets)):
            chosen.append(i)
            yield from rec(i, chosen, covered | masks[i])
            chosen.pop()

    yield from rec(0, [], 0)

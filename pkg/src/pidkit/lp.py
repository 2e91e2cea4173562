"""Exact fractional covering LP.

    minimize  sum_n D_n   subject to   sum_{n in S} D_n >= 1  for each S,  D >= 0

The solver runs a textbook tableau simplex (Bland's rule, ``Fraction``
arithmetic) on the packing dual

    maximize  sum_S y_S   subject to   sum_{S ∋ n} y_S <= 1  for each n,  y >= 0

whose origin is feasible, so no phase one is needed. The optimal covering
loads are read off the reduced costs of the slack columns, and both vectors
are returned so the optimum can be re-checked by weak duality.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence


@dataclass(frozen=True)
class CoveringSolution:
    value: Fraction
    loads: tuple[Fraction, ...]  # optimal D_n, one per server
    weights: tuple[Fraction, ...]  # optimal y_S, one per constraint

    def is_certified(self, constraints: Sequence[Sequence[int]]) -> bool:
        """Primal and dual feasible with equal objectives (hence both optimal)."""
        if any(d < 0 for d in self.loads) or any(y < 0 for y in self.weights):
            return False
        for s in constraints:
            if sum(self.loads[n - 1] for n in s) < 1:
                return False
        for n in range(1, len(self.loads) + 1):
            if sum(y for y, s in zip(self.weights, constraints) if n in s) > 1:
                return False
        return sum(self.loads) == self.value == sum(self.weights)


def solve_covering_lp(constraints: Sequence[Sequence[int]], n_servers: int) -> CoveringSolution:
    """Solve the covering LP over servers ``1..n_servers`` (1-based subsets)."""
    if not constraints:
        raise ValueError("need at least one constraint")
    cons = [frozenset(s) for s in constraints]
    for s in cons:
        if not s:
            raise ValueError("empty constraint: a message stored nowhere cannot be delivered")
        if min(s) < 1 or max(s) > n_servers:
            raise ValueError(f"constraint {sorted(s)} mentions a server outside [1:{n_servers}]")

    m, J = n_servers, len(cons)
    width = J + m
    zero, one = Fraction(0), Fraction(1)
    # row i: server i+1 packing constraint; columns: y_0..y_{J-1}, slack_0..slack_{m-1}
    rows = []
    for i in range(m):
        row = [one if (i + 1) in s else zero for s in cons]
        row += [one if j == i else zero for j in range(m)]
        rows.append(row)
    rhs = [one] * m
    basis = [J + i for i in range(m)]
    # reduced costs for maximisation: c_j - c_B B^-1 A_j
    reduced = [one] * J + [zero] * m
    objective = zero

    while True:
        entering = next((j for j in range(width) if reduced[j] > 0), None)
        if entering is None:
            break
        best = None
        for i in range(m):
            a = rows[i][entering]
            if a > 0:
                ratio = rhs[i] / a
                if best is None or ratio < best[0] or (ratio == best[0] and basis[i] < basis[best[1]]):
                    best = (ratio, i)
        if best is None:
            raise ArithmeticError("packing LP is unbounded")
        r = best[1]
        piv = rows[r][entering]
        rows[r] = [v / piv for v in rows[r]]
        rhs[r] /= piv
        for i in range(m):
            f = rows[i][entering]
            if i != r and f:
                rows[i] = [a - f * b for a, b in zip(rows[i], rows[r])]
                rhs[i] -= f * rhs[r]
        f = reduced[entering]
        reduced = [a - f * b for a, b in zip(reduced, rows[r])]
        objective += f * rhs[r]
        basis[r] = entering

    weights = [zero] * J
    for i, b in enumerate(basis):
        if b < J:
            weights[b] = rhs[i]
    loads = tuple(-reduced[J + i] for i in range(m))
    return CoveringSolution(objective, loads, tuple(weights))

"""Linear private-delivery schemes and their builders.

Every scheme, whatever builder produced it, has the same shape: a decoder
``G`` (L x D_total) shared by all delivered indices, a randomness precoder
``H`` (D_total x (D_total - L)) shared by all indices, and one message
precoder ``F[k]`` (D_total x L) per index. Server ``n`` owns ``D[n-1]``
consecutive rows of ``F[k]`` and ``H``; its answer for index ``k`` is
``F[k]_n W_k + H_n Z``.
"""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field
from fractions import Fraction
from math import gcd
from typing import Mapping

import numpy as np

from .capacity import (
    RegimeError,
    full_rate_threshold,
    min_servers,
    replication_level,
)
from .design import StorageDesign, sequential_design
from .field import PrimeField, distinct_points, next_prime
from .matrix import (
    MatrixFp,
    SingularMatrixError,
    cauchy,
    hstack,
    identity,
    inverse,
    rank,
    right_null_basis,
    submatrix,
    vstack,
)


class SchemeError(ValueError):
    """A scheme whose matrices are inconsistent with its declared shape."""


class ConstructionError(RuntimeError):
    """A builder could not produce an invertible decoding block."""


@dataclass(frozen=True, eq=False)
class Scheme:
    K: int
    M: int
    field: PrimeField
    L: int
    storage: StorageDesign
    D: tuple[int, ...]
    G: MatrixFp
    H: MatrixFp
    F: Mapping[int, MatrixFp]
    construction: str = "custom"
    _offsets: tuple[int, ...] = dc_field(init=False, repr=False)

    def __post_init__(self):
        object.__setattr__(self, "D", tuple(int(d) for d in self.D))
        object.__setattr__(self, "F", dict(sorted(self.F.items())))
        if self.L < 1:
            raise SchemeError("message length L must be positive")
        if self.storage.K != self.K or self.storage.M != self.M:
            raise SchemeError("storage design disagrees with (K, M)")
        if len(self.D) != self.storage.N:
            raise SchemeError(f"{len(self.D)} answer sizes for {self.storage.N} servers")
        if any(d < 0 for d in self.D):
            raise SchemeError("answer sizes must be non-negative")
        total = sum(self.D)
        if total < self.L:
            raise SchemeError(f"total download {total} is below the message length {self.L}")
        for name, m in (("G", self.G), ("H", self.H), *((f"F[{k}]", f) for k, f in self.F.items())):
            if m.field != self.field:
                raise SchemeError(f"{name} is over {m.field}, scheme is over {self.field}")
        if self.G.shape != (self.L, total):
            raise SchemeError(f"G has shape {self.G.shape}, expected {(self.L, total)}")
        if self.H.shape != (total, total - self.L):
            raise SchemeError(f"H has shape {self.H.shape}, expected {(total, total - self.L)}")
        if sorted(self.F) != list(range(1, self.K + 1)):
            raise SchemeError(f"F must have one precoder for each k in [1:{self.K}]")
        for k, f in self.F.items():
            if f.shape != (total, self.L):
                raise SchemeError(f"F[{k}] has shape {f.shape}, expected {(total, self.L)}")
        object.__setattr__(self, "_offsets", tuple(np.cumsum((0,) + self.D[:-1]).tolist()))

    @property
    def N(self) -> int:
        return self.storage.N

    @property
    def p(self) -> int:
        return self.field.p

    @property
    def download(self) -> int:
        return sum(self.D)

    @property
    def randomness_size(self) -> int:
        return self.download - self.L

    @property
    def rate(self) -> Fraction:
        return Fraction(self.L, self.download)

    @property
    def eta(self) -> Fraction:
        return Fraction(self.randomness_size, self.L)

    def server_rows(self, n: int) -> list[int]:
        """1-based rows of ``F``/``H`` (columns of ``G``) owned by server ``n``."""
        start = self._offsets[n - 1]
        return list(range(start + 1, start + self.D[n - 1] + 1))

    def decoding_columns(self, k: int) -> list[int]:
        return [r for n in self.storage.availability(k) for r in self.server_rows(n)]

    def privacy_matrix(self, k: int) -> MatrixFp:
        """``[F[k] | H]``, the map from ``(W_k, Z)`` to all answers."""
        return hstack([self.F[k], self.H])

    def __eq__(self, other):
        if not isinstance(other, Scheme):
            return NotImplemented
        return (
            (self.K, self.M, self.field, self.L, self.storage, self.D, self.construction)
            == (other.K, other.M, other.field, other.L, other.storage, other.D, other.construction)
            and self.G == other.G
            and self.H == other.H
            and self.F == other.F
        )

    __hash__ = None


def _precoders(field, storage, D, L, G) -> dict[int, MatrixFp]:
    """Fill each F[k] with the inverse of G restricted to k's decoding columns."""
    total = sum(D)
    offsets = np.cumsum((0,) + tuple(D[:-1]))
    F = {}
    for k in range(1, storage.K + 1):
        cols = [int(offsets[n - 1]) + j + 1 for n in storage.availability(k) for j in range(D[n - 1])]
        if len(cols) != L:
            raise ConstructionError(f"message {k} reaches {len(cols)} answer symbols, need exactly {L}")
        try:
            block = inverse(submatrix(G, None, cols))
        except SingularMatrixError as exc:
            raise ConstructionError(f"decoder columns {cols} for message {k} are singular") from exc
        f = np.zeros((total, L), dtype=np.int64)
        f[np.array(cols) - 1, :] = block.array
        F[k] = MatrixFp(field, f, shape=(total, L))
    return F


def _systematic_cauchy_decoder(field: PrimeField, L: int, total: int) -> MatrixFp:
    alphas, betas = distinct_points(field, L, total - L)
    if total == L:
        return identity(field, L)
    return hstack([identity(field, L), cauchy(alphas, betas)])


def build_basic(K: int, M: int) -> Scheme:
    """Rate 1/ceil(K/M) over F_2 with sequential storage.

    Server ``i < N`` answers ``z_i`` (plus ``W_k`` if it stores k); the last
    server answers ``-(z_1 + ... + z_{N-1})`` (plus ``W_k``). The user sums
    all answers.
    """
    N = min_servers(K, M)
    field = PrimeField(2)
    storage = sequential_design(K, M)
    G = MatrixFp(field, np.ones((1, N), dtype=np.int64))
    H = vstack([identity(field, N - 1), MatrixFp(field, -np.ones((1, N - 1), dtype=np.int64), shape=(1, N - 1))])
    F = {}
    for k in range(1, K + 1):
        (n,) = storage.availability(k)
        f = np.zeros((N, 1), dtype=np.int64)
        f[n - 1, 0] = 1
        F[k] = MatrixFp(field, f)
    return Scheme(K, M, field, 1, storage, (1,) * N, G, H, F, construction="basic")


def build_full_rate(K: int, M: int) -> Scheme:
    """Rate M/K using the fewest servers that the block construction allows.

    Messages are grouped into blocks of gcd(K, M). The first N1 servers hold
    cyclically consecutive runs of L = M/g blocks and answer one symbol each;
    the remaining servers hold L disjoint blocks each and answer L symbols.
    """
    if K < 1 or not 1 <= M <= K:
        raise RegimeError(f"need 1 <= M <= K, got K={K}, M={M}")
    g = gcd(K, M)
    kb, L = K // g, M // g
    N = full_rate_threshold(K, M)
    n2 = K // M - 1
    n1 = N - n2
    field = PrimeField(next_prime(max(2, kb)))

    block_sets = [[(n + j) % n1 + 1 for j in range(L)] for n in range(n1)]
    block_sets += [list(range(n1 + i * L + 1, n1 + (i + 1) * L + 1)) for i in range(n2)]
    sets = tuple(tuple(m for b in blocks for m in range((b - 1) * g + 1, b * g + 1)) for blocks in block_sets)
    storage = StorageDesign(K, M, sets)
    D = (1,) * n1 + (L,) * n2

    G = _systematic_cauchy_decoder(field, L, kb)
    H = right_null_basis(G)
    F = _precoders(field, storage, D, L, G)
    return Scheme(K, M, field, L, storage, D, G, H, F, construction="full-rate")


def intermediate_design(K: int, M: int, N: int) -> StorageDesign:
    """Storage for the intermediate scheme.

    The first K1 messages, each repeated l times, are poured down the columns
    of an N1 x M table (row i = server i), so every message lands on l
    cyclically consecutive servers. The last K2 = N2*M messages sit M to a
    server on the remaining N2 servers. Unused table cells stay empty.
    """
    l = replication_level(K, M, N)
    n2 = K // M - 1
    n1 = N - n2
    k1 = K - n2 * M
    rows = [[] for _ in range(n1)]
    copies = [k for k in range(1, k1 + 1) for _ in range(l)]
    for pos, k in enumerate(copies):
        rows[pos % n1].append(k)
    tail = [tuple(range(k1 + i * M + 1, k1 + (i + 1) * M + 1)) for i in range(n2)]
    return StorageDesign(K, M, tuple(tuple(r) for r in rows) + tuple(tail))


def build_intermediate(K: int, M: int, N: int) -> Scheme:
    """Rate l / (N + (l-1)(floor(K/M)-1)) for ceil(K/M) <= N <= threshold."""
    if K < 1 or not 1 <= M <= K:
        raise RegimeError(f"need 1 <= M <= K, got K={K}, M={M}")
    if K % M == 0:
        raise RegimeError(f"M={M} divides K={K}; use build_full_rate")
    lo, hi = min_servers(K, M), full_rate_threshold(K, M)
    if not lo <= N <= hi:
        raise RegimeError(f"N={N} outside [{lo}:{hi}] for K={K}, M={M}")
    L = replication_level(K, M, N)
    n2 = K // M - 1
    n1 = N - n2
    total = n1 + L * n2
    field = PrimeField(next_prime(max(2, total)))
    storage = intermediate_design(K, M, N)
    D = (1,) * n1 + (L,) * n2

    G = _systematic_cauchy_decoder(field, L, total)
    H = right_null_basis(G)
    F = _precoders(field, storage, D, L, G)
    s = Scheme(K, M, field, L, storage, D, G, H, F, construction="intermediate")
    # privacy of this layout is checked per instance rather than assumed
    for k in range(1, K + 1):
        if rank(s.privacy_matrix(k)) < total:
            raise ConstructionError(f"[F[{k}] | H] is singular for K={K}, M={M}, N={N}, p={field.p}")
    return s


def build_scheme(K: int, M: int, N: int | None = None) -> Scheme:
    """Pick a builder by regime; ``N=None`` means the full-rate threshold.

    At the minimum server count the binary basic scheme is used, since it
    needs no field larger than F_2.
    """
    if K < 1 or not 1 <= M <= K:
        raise RegimeError(f"need 1 <= M <= K, got K={K}, M={M}")
    lo, hi = min_servers(K, M), full_rate_threshold(K, M)
    N = hi if N is None else N
    if N < lo:
        raise RegimeError(f"N={N} < ceil(K/M)={lo}: infeasible")
    if N > hi:
        raise RegimeError(f"N={N} exceeds the {hi} servers the full-rate scheme uses; pass N={hi}")
    if N == lo:
        return build_basic(K, M)
    if N == hi:
        return build_full_rate(K, M)
    return build_intermediate(K, M, N)


def cyclic_pair_scheme_f5() -> Scheme:
    """Hand-designed K=3, M=2 scheme over F_5 with one shared randomness symbol.

    Servers store {1,2}, {2,3}, {3,1}; the user reads symbol 1 as
    A1 + A2 + A3 and symbol 2 as A1 + 2 A2 + 3 A3.
    """
    field = PrimeField(5)
    storage = StorageDesign(3, 2, ((1, 2), (2, 3), (1, 3)))
    half = field.inv(2)
    G = MatrixFp(field, [[1, 1, 1], [1, 2, 3]])
    H = MatrixFp(field, [[1], [-2], [1]])
    F = {
        1: MatrixFp(field, [[3 * half, -half], [0, 0], [-half, half]]),
        2: MatrixFp(field, [[2, -1], [-1, 1], [0, 0]]),
        3: MatrixFp(field, [[0, 0], [3, -1], [-2, 1]]),
    }
    return Scheme(3, 2, field, 2, storage, (1, 1, 1), G, H, F, construction="custom")

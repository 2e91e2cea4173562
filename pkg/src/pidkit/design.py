"""Replicated storage designs: which messages live on which server."""

from __future__ import annotations

from dataclasses import dataclass


class DesignError(ValueError):
    pass


@dataclass(frozen=True)
class StorageDesign:
    """``sets[n-1]`` holds the 1-based message indices stored at server ``n``."""

    K: int
    M: int
    sets: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        sets = tuple(tuple(sorted(set(int(k) for k in s))) for s in self.sets)
        object.__setattr__(self, "sets", sets)
        if self.K < 1 or self.M < 1:
            raise DesignError("K and M must be positive")
        for n, s in enumerate(sets, 1):
            if len(s) > self.M:
                raise DesignError(f"server {n} stores {len(s)} > M={self.M} messages")
            if s and not (1 <= s[0] and s[-1] <= self.K):
                raise DesignError(f"server {n} stores an index outside [1:{self.K}]")
        missing = self.uncovered()
        if missing:
            raise DesignError(f"messages {missing} are not stored anywhere")

    @property
    def N(self) -> int:
        return len(self.sets)

    def uncovered(self) -> list[int]:
        held = set().union(*self.sets) if self.sets else set()
        return [k for k in range(1, self.K + 1) if k not in held]

    def availability(self, k: int) -> tuple[int, ...]:
        """Sorted 1-based servers holding message ``k``."""
        if not 1 <= k <= self.K:
            raise IndexError(f"message index {k} outside [1:{self.K}]")
        return tuple(n for n, s in enumerate(self.sets, 1) if k in s)

    def stores(self, n: int, k: int) -> bool:
        return k in self.sets[n - 1]

    def to_lists(self) -> list[list[int]]:
        return [list(s) for s in self.sets]


def sequential_design(K: int, M: int) -> StorageDesign:
    """Fill servers with ``M`` consecutive messages each, the last one possibly short."""
    N = -(-K // M)
    return StorageDesign(K, M, tuple(tuple(range(i * M + 1, min((i + 1) * M, K) + 1)) for i in range(N)))

"""End-to-end execution of a scheme: deal randomness, answer, decode.

Each server only ever receives what it is entitled to: the shared randomness
``z`` and, if it stores the delivered message, that message. Undelivered
messages are never read.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .schemes import Scheme


class StorageViolation(RuntimeError):
    """A server was asked to touch a message it does not store."""


class DeliveryError(ValueError):
    pass


@dataclass(frozen=True)
class Transcript:
    k: int
    seed: int | None
    message: tuple[int, ...]
    z: tuple[int, ...]
    answers: tuple[tuple[int, ...], ...]
    decoded: tuple[int, ...]
    download: int

    @property
    def success(self) -> bool:
        return self.decoded == self.message

    def to_dict(self, include_message: bool = False) -> dict:
        doc = {
            "k": self.k,
            "seed": self.seed,
            "z": list(self.z),
            "answers": [list(a) for a in self.answers],
            "decoded": list(self.decoded),
            "download": self.download,
            "success": self.success,
        }
        if include_message:
            doc["message"] = list(self.message)
        return doc


def _vector(v, length: int, p: int, what: str) -> np.ndarray:
    a = np.asarray(v, dtype=np.int64).reshape(-1)
    if a.size != length:
        raise DeliveryError(f"{what} has {a.size} symbols, expected {length}")
    return np.mod(a, p)


def deal_randomness(s: Scheme, seed: int | None = None) -> np.ndarray:
    """``D_total - L`` i.i.d. uniform symbols, reproducible from ``seed``."""
    rng = np.random.default_rng(seed)
    return rng.integers(0, s.p, size=s.randomness_size, dtype=np.int64)


def server_answer(s: Scheme, n: int, k: int, w_k, z) -> np.ndarray:
    """Answer of server ``n`` when message ``k`` is delivered.

    ``w_k`` must be ``None`` unless server ``n`` stores message ``k``.
    """
    if not 1 <= n <= s.N:
        raise DeliveryError(f"server index {n} outside [1:{s.N}]")
    if not 1 <= k <= s.K:
        raise DeliveryError(f"message index {k} outside [1:{s.K}]")
    rows = np.array(s.server_rows(n), dtype=np.int64) - 1
    z = _vector(z, s.randomness_size, s.p, "z")
    f_rows = s.F[k].array[rows]
    out = s.H.array[rows] @ z
    if s.storage.stores(n, k):
        if w_k is None:
            raise DeliveryError(f"server {n} stores message {k} but was not given it")
        out = out + f_rows @ _vector(w_k, s.L, s.p, "w_k")
    else:
        if w_k is not None:
            raise StorageViolation(f"server {n} was handed message {k}, which it does not store")
        if f_rows.any():
            raise StorageViolation(f"scheme asks server {n} to encode message {k}, which it does not store")
    return np.mod(out, s.p)


def user_decode(s: Scheme, answers: Sequence) -> np.ndarray:
    """Apply the fixed decoder ``G`` to the stacked answers."""
    if len(answers) != s.N:
        raise DeliveryError(f"got {len(answers)} answers for {s.N} servers")
    parts = [_vector(a, d, s.p, f"answer {n}") for n, (a, d) in enumerate(zip(answers, s.D), 1)]
    stacked = np.concatenate(parts) if parts else np.zeros(0, dtype=np.int64)
    return np.mod(s.G.array @ stacked, s.p)


def run_delivery(s: Scheme, k: int, messages: Sequence, seed: int | None = None, z=None) -> Transcript:
    """Deliver ``messages[k-1]`` through all servers and decode it.

    Only ``messages[k-1]`` is read. Pass ``z`` to replay a fixed randomness
    draw instead of dealing one from ``seed``.
    """
    if not 1 <= k <= s.K:
        raise DeliveryError(f"message index {k} outside [1:{s.K}]")
    if len(messages) != s.K:
        raise DeliveryError(f"expected {s.K} messages, got {len(messages)}")
    w_k = _vector(messages[k - 1], s.L, s.p, f"message {k}")
    z = deal_randomness(s, seed) if z is None else _vector(z, s.randomness_size, s.p, "z")
    answers = [server_answer(s, n, k, w_k if s.storage.stores(n, k) else None, z) for n in range(1, s.N + 1)]
    decoded = user_decode(s, answers)
    return Transcript(
        k=k,
        seed=seed,
        message=tuple(w_k.tolist()),
        z=tuple(z.tolist()),
        answers=tuple(tuple(a.tolist()) for a in answers),
        decoded=tuple(decoded.tolist()),
        download=sum(len(a) for a in answers),
    )


def random_messages(s: Scheme, rng: np.random.Generator) -> list[np.ndarray]:
    return list(rng.integers(0, s.p, size=(s.K, s.L), dtype=np.int64))

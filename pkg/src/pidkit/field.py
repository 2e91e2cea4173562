"""Prime field arithmetic.

Everything in the toolkit is built on :class:`PrimeField`; elements are kept
as canonical representatives in ``[0, p-1]`` so equality and serialization are
bit-exact.
"""

from __future__ import annotations

from dataclasses import dataclass


class FieldError(ValueError):
    """Structural misuse of field elements (mismatched fields, bad modulus)."""


class FieldTooSmallError(FieldError):
    pass


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n < 4:
        return True
    if n % 2 == 0:
        return False
    d = 3
    while d * d <= n:
        if n % d == 0:
            return False
        d += 2
    return True


def next_prime(n: int) -> int:
    """Smallest prime >= ``n`` (and >= 2)."""
    n = max(n, 2)
    while not is_prime(n):
        n += 1
    return n


@dataclass(frozen=True)
class PrimeField:
    p: int

    def __post_init__(self):
        if not isinstance(self.p, int) or isinstance(self.p, bool):
            raise FieldError(f"modulus must be an integer, got {self.p!r}")
        if not is_prime(self.p):
            raise FieldError(f"modulus {self.p} is not prime")

    def __call__(self, value: int) -> FieldElement:
        return FieldElement(int(value) % self.p, self)

    def elements(self):
        return [FieldElement(v, self) for v in range(self.p)]

    @property
    def zero(self) -> FieldElement:
        return FieldElement(0, self)

    @property
    def one(self) -> FieldElement:
        return FieldElement(1, self)

    def inv(self, value: int) -> int:
        """Inverse of a raw integer residue."""
        value %= self.p
        if value == 0:
            raise ZeroDivisionError(f"0 has no inverse in F_{self.p}")
        return pow(value, -1, self.p)

    def __repr__(self):
        return f"F_{self.p}"


@dataclass(frozen=True)
class FieldElement:
    value: int
    field: PrimeField

    def __post_init__(self):
        if not 0 <= self.value < self.field.p:
            raise FieldError(f"{self.value} is not a canonical residue mod {self.field.p}")

    def _check(self, other) -> FieldElement:
        if isinstance(other, int) and not isinstance(other, bool):
            return self.field(other)
        if not isinstance(other, FieldElement):
            return NotImplemented
        if other.field != self.field:
            raise FieldError(f"cannot combine elements of {self.field} and {other.field}")
        return other

    def __add__(self, other):
        other = self._check(other)
        if other is NotImplemented:
            return other
        return fe_add(self, other)

    __radd__ = __add__

    def __sub__(self, other):
        other = self._check(other)
        if other is NotImplemented:
            return other
        return FieldElement((self.value - other.value) % self.field.p, self.field)

    def __rsub__(self, other):
        other = self._check(other)
        if other is NotImplemented:
            return other
        return other - self

    def __mul__(self, other):
        other = self._check(other)
        if other is NotImplemented:
            return other
        return fe_mul(self, other)

    __rmul__ = __mul__

    def __truediv__(self, other):
        other = self._check(other)
        if other is NotImplemented:
            return other
        return fe_mul(self, fe_inv(other))

    def __neg__(self):
        return FieldElement((-self.value) % self.field.p, self.field)

    def __int__(self):
        return self.value

    def __repr__(self):
        return f"{self.value} (mod {self.field.p})"


def fe_add(a: FieldElement, b: FieldElement) -> FieldElement:
    if a.field != b.field:
        raise FieldError(f"field mismatch: {a.field} vs {b.field}")
    return FieldElement((a.value + b.value) % a.field.p, a.field)


def fe_mul(a: FieldElement, b: FieldElement) -> FieldElement:
    if a.field != b.field:
        raise FieldError(f"field mismatch: {a.field} vs {b.field}")
    return FieldElement((a.value * b.value) % a.field.p, a.field)


def fe_inv(a: FieldElement) -> FieldElement:
    return FieldElement(a.field.inv(a.value), a.field)


def distinct_points(field: PrimeField, n_alpha: int, n_beta: int):
    """Pick ``n_alpha + n_beta`` pairwise distinct residues for a Cauchy matrix.

    The choice is deterministic: alphas are ``0..n_alpha-1`` and betas follow
    on consecutively.
    """
    if n_alpha < 0 or n_beta < 0:
        raise ValueError("point counts must be non-negative")
    if n_alpha + n_beta > field.p:
        raise FieldTooSmallError(
            f"need {n_alpha + n_beta} distinct points but F_{field.p} has only {field.p}"
        )
    alphas = [field(i) for i in range(n_alpha)]
    betas = [field(n_alpha + j) for j in range(n_beta)]
    return alphas, betas

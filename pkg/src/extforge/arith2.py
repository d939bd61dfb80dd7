"""2-adic arithmetic: binary digit sums, valuations, and binomial
coefficient rules (Kummer and Lucas), including negative upper indices."""

from __future__ import annotations

from dataclasses import dataclass

__all__ = ["alpha", "nu", "nu_binom", "binom_mod2", "TwoAdic"]


def alpha(m: int) -> int:
    """Number of 1s in the binary expansion of m >= 0."""
    if m < 0:
        raise ValueError("alpha requires a nonnegative argument, got %d" % m)
    return bin(m).count("1")


def nu(n: int) -> int:
    """Exact 2-adic valuation of a nonzero integer."""
    if n == 0:
        raise ValueError("nu(0) is infinite")
    return (n & -n).bit_length() - 1


def nu_binom(a: int, b: int) -> int:
    """2-adic valuation of binomial(a, b) for 0 <= b <= a.

    Kummer: the valuation is the number of carries when adding b and a-b
    in base 2, which equals alpha(b) + alpha(a-b) - alpha(a).
    """
    if b < 0 or b > a:
        raise ValueError("nu_binom requires 0 <= b <= a, got (%d, %d)" % (a, b))
    return alpha(b) + alpha(a - b) - alpha(a)


def binom_mod2(i: int, k: int) -> int:
    """binomial(i, k) mod 2 for k >= 0; i may be negative.

    Lucas digitwise rule; a negative i carries the all-ones 2-adic tail,
    which Python's infinite-precision bitwise complement provides for free.
    """
    if k < 0:
        raise ValueError("binom_mod2 requires k >= 0, got %d" % k)
    return int(k & ~i == 0)


@dataclass(frozen=True)
class TwoAdic:
    """An integer residue known mod 2**precision.

    The valuation is exact when it is below the precision; otherwise only
    the lower bound `precision` is known and `valuation_is_exact` is False.
    """

    value: int
    precision: int = 64

    def __post_init__(self):
        object.__setattr__(self, "value", self.value % (1 << self.precision))

    @property
    def valuation(self) -> int:
        if self.value == 0:
            return self.precision
        return nu(self.value)

    @property
    def valuation_is_exact(self) -> bool:
        return self.value != 0

    @property
    def is_odd(self) -> bool:
        return bool(self.value & 1)

    def _coerce(self, other) -> "TwoAdic":
        if isinstance(other, TwoAdic):
            return other
        return TwoAdic(other, self.precision)

    def __add__(self, other):
        o = self._coerce(other)
        k = min(self.precision, o.precision)
        return TwoAdic(self.value + o.value, k)

    __radd__ = __add__

    def __sub__(self, other):
        o = self._coerce(other)
        k = min(self.precision, o.precision)
        return TwoAdic(self.value - o.value, k)

    def __mul__(self, other):
        o = self._coerce(other)
        k = min(self.precision, o.precision)
        return TwoAdic(self.value * o.value, k)

    __rmul__ = __mul__

    def inverse(self) -> "TwoAdic":
        if not self.is_odd:
            raise ValueError("only odd 2-adic residues are invertible")
        return TwoAdic(pow(self.value, -1, 1 << self.precision), self.precision)

    def __repr__(self) -> str:
        if self.value == 0:
            return "TwoAdic(0 mod 2^%d)" % self.precision
        return "TwoAdic(%d mod 2^%d, nu=%d)" % (self.value, self.precision, self.valuation)

"""The axial-class engine: truncated p-series over the 2-adics, the c4
fixed-point series, unit decomposition and inversion, the tmf-ring toy
model with L-classes, and nonvanishing certification of powers.

p_j stands for z^j + z^{-j}; products follow p_i p_j = p_{i+j} + p_{|i-j|}
with p_0 folded in as the constant 2. Coefficients are integer residues
mod 2^K. Internally series are widened past the requested truncation so
that every coefficient the caller sees is exact mod 2^K; the public
`truncated` flag only fires when a product genuinely loses terms.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Optional, Sequence

import numpy as np

from .arith2 import TwoAdic, nu, nu_binom

__all__ = [
    "PSeries",
    "TheoremCheckError",
    "MissingOrderError",
    "solve_theta",
    "theta_residual",
    "UnitSeries",
    "axial_decompose",
    "invert_unit",
    "TmfRingElt",
    "tmfring_pow",
    "OrderEntry",
    "OrderTable",
    "certify_nonvanishing",
]


class TheoremCheckError(AssertionError):
    """An internally verified valuation bound failed."""


class MissingOrderError(KeyError):
    """certify_nonvanishing was asked about a monomial with no order entry."""


@lru_cache(maxsize=None)
def _mul_grids(j: int):
    idx = np.arange(1, j + 1)
    plus = idx[:, None] + idx[None, :]
    absd = np.abs(idx[:, None] - idx[None, :])
    spill = plus > j
    plus = np.where(spill, 0, plus)
    diag = np.eye(j, dtype=bool)
    return plus, absd, spill, diag


class PSeries:
    """A truncated series c_0 + sum_{j>=1} c_j p_j with coefficients mod 2^K."""

    __slots__ = ("J", "K", "coeffs", "truncated")

    def __init__(self, J: int, K: int, coeffs: Optional[np.ndarray] = None, truncated: bool = False):
        if K > 62:
            raise ValueError("coefficient precision above 2^62 is not supported")
        self.J = J
        self.K = K
        if coeffs is None:
            coeffs = np.zeros(J + 1, dtype=np.uint64)
        self.coeffs = coeffs
        self.truncated = truncated

    @classmethod
    def from_terms(cls, J: int, K: int, terms: dict[int, int]) -> "PSeries":
        s = cls(J, K)
        for j, c in terms.items():
            if j > J:
                raise ValueError("index %d beyond truncation %d" % (j, J))
            s.coeffs[j] = np.uint64(c % (1 << K))
        return s

    def _mask(self) -> None:
        self.coeffs &= np.uint64((1 << self.K) - 1)

    def coeff(self, j: int) -> TwoAdic:
        v = int(self.coeffs[j]) if j <= self.J else 0
        return TwoAdic(v, self.K)

    @property
    def coefficients(self) -> dict[int, TwoAdic]:
        return {j: self.coeff(j) for j in range(self.J + 1) if int(self.coeffs[j])}

    def support(self) -> list[int]:
        return [j for j in range(self.J + 1) if int(self.coeffs[j])]

    def is_zero(self) -> bool:
        return not self.support()

    def copy(self) -> "PSeries":
        return PSeries(self.J, self.K, self.coeffs.copy(), self.truncated)

    def resized(self, J: int) -> "PSeries":
        out = PSeries(J, self.K, truncated=self.truncated)
        n = min(J, self.J) + 1
        out.coeffs[:n] = self.coeffs[:n]
        if J < self.J and any(int(self.coeffs[j]) for j in range(J + 1, self.J + 1)):
            out.truncated = True
        return out

    def __add__(self, other: "PSeries") -> "PSeries":
        self._check(other)
        out = PSeries(self.J, self.K, self.coeffs + other.coeffs, self.truncated or other.truncated)
        out._mask()
        return out

    def __sub__(self, other: "PSeries") -> "PSeries":
        self._check(other)
        out = PSeries(self.J, self.K, self.coeffs - other.coeffs, self.truncated or other.truncated)
        out._mask()
        return out

    def scale(self, c: int) -> "PSeries":
        out = PSeries(self.J, self.K, self.coeffs * np.uint64(c % (1 << self.K)), self.truncated)
        out._mask()
        return out

    def _check(self, other: "PSeries") -> None:
        if self.J != other.J or self.K != other.K:
            raise ValueError("series truncation/precision mismatch")

    def __mul__(self, other: "PSeries") -> "PSeries":
        return pmul(self, other)

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, PSeries)
            and self.J == other.J
            and self.K == other.K
            and bool(np.array_equal(self.coeffs, other.coeffs))
        )

    def __hash__(self):
        return hash((self.J, self.K, self.coeffs.tobytes()))

    def __repr__(self) -> str:
        terms = []
        for j in self.support():
            c = int(self.coeffs[j])
            terms.append(str(c) if j == 0 else "%d*p%d" % (c, j))
        body = " + ".join(terms) if terms else "0"
        flag = ", truncated" if self.truncated else ""
        return "PSeries(%s mod 2^%d, J=%d%s)" % (body, self.K, self.J, flag)


def pmul(a: PSeries, b: PSeries) -> PSeries:
    """Product under p_i p_j = p_{i+j} + p_{|i-j|}; overflow past J is flagged."""
    a._check(b)
    J, K = a.J, a.K
    out = PSeries(J, K, truncated=a.truncated or b.truncated)
    ca, cb = a.coeffs, b.coeffs
    with np.errstate(over="ignore"):
        res = ca * cb[0] + cb * ca[0]
        res[0] -= ca[0] * cb[0]
        if J >= 1:
            cross = np.outer(ca[1:], cb[1:])
            plus, absd, spill, diag = _mul_grids(J)
            if bool((cross[spill] & np.uint64((1 << K) - 1)).any()):
                out.truncated = True
            np.add.at(res, plus, np.where(spill, np.uint64(0), cross))
            np.add.at(res, absd, cross)
            res[0] += cross[diag].sum()  # p_i p_i contributes p_0 = 2, one copy extra
    out.coeffs = res
    out._mask()
    return out


def _internal_J(J: int, K: int, extra: int = 0) -> int:
    # indices m with nu(coeff p_m) < K satisfy m < 2K - 7 for the theta
    # shape; keeping everything below that makes low coefficients exact
    return max(J, 2 * K - 7, extra)


def solve_theta(gammas: Sequence[int], J: int, K: int, leading: int = 16) -> PSeries:
    """Fixed point of theta = leading*p_1 + sum_i 2*gamma_i*theta^i*p_{i+1}.

    Every theta on the right carries a factor 2, so iteration contracts
    2-adically and the fixed point mod 2^K is unique. The result is
    supported on odd indices with nu(coeff of p_{2i+1}) >= 4 + i; both
    facts are verified before returning.
    """
    if leading % 16:
        raise ValueError("leading coefficient must be divisible by 16")
    jint = _internal_J(J, K, 2 * (len(gammas) + 2))
    p1 = PSeries.from_terms(jint, K, {1: 1})
    base = p1.scale(leading)
    theta = PSeries(jint, K)
    for _ in range(K + 4):
        rhs = base.copy()
        power = PSeries.from_terms(jint, K, {0: 1})
        for i, g in enumerate(gammas, start=1):
            power = power * theta
            if g % (1 << K):
                pj = PSeries.from_terms(jint, K, {i + 1: 1})
                rhs = rhs + (power * pj).scale(2 * g)
        if rhs == theta:
            theta = rhs
            break
        theta = rhs
    else:
        raise AssertionError("theta iteration failed to converge; the contraction argument forbids this")

    for j in theta.support():
        if j % 2 == 0:
            raise TheoremCheckError("theta has an even-index term p_%d" % j)
        i = (j - 1) // 2
        val = theta.coeff(j).valuation
        if val < 4 + i:
            raise TheoremCheckError("nu(coeff p_%d) = %d < %d" % (j, val, 4 + i))
    return theta.resized(J)


def theta_residual(theta: PSeries, gammas: Sequence[int], K: int, leading: int = 16) -> PSeries:
    """theta - RHS(theta); zero mod 2^K when theta solves the equation."""
    jint = theta.J
    p1 = PSeries.from_terms(jint, K, {1: 1})
    rhs = p1.scale(leading)
    power = PSeries.from_terms(jint, K, {0: 1})
    for i, g in enumerate(gammas, start=1):
        power = power * theta
        pj = PSeries.from_terms(jint, K, {i + 1: 1})
        rhs = rhs + (power * pj).scale(2 * g)
    return theta - rhs


@dataclass
class UnitSeries:
    """u + sum_j beta_j p_{2j} with beta_j = 2^{4+j} alpha_j."""

    u: TwoAdic
    alphas: list[TwoAdic]
    K: int

    def betas(self) -> list[int]:
        return [(a.value << (4 + j)) % (1 << self.K) for j, a in enumerate(self.alphas, start=1)]

    def to_pseries(self, J: int) -> PSeries:
        s = PSeries.from_terms(J, self.K, {0: self.u.value})
        for j, b in enumerate(self.betas(), start=1):
            if 2 * j <= J:
                s.coeffs[2 * j] = np.uint64(b)
        return s


def _axial_series(kappas: Sequence[int], gammas: Sequence[int], jint: int, K: int, leading: int = 16) -> PSeries:
    theta = solve_theta(gammas, jint, K, leading=leading)
    s = PSeries.from_terms(jint, K, {1: 1})
    power = PSeries.from_terms(jint, K, {0: 1})
    for i, kap in enumerate(kappas, start=1):
        power = power * theta
        if kap % (1 << K):
            pj = PSeries.from_terms(jint, K, {i + 1: 1})
            s = s + (power * pj).scale(2 * kap)
    return s


def axial_decompose(
    kappas: Sequence[int],
    gammas: Sequence[int],
    J: int,
    K: int,
    leading: int = 16,
) -> UnitSeries:
    """Write the axial class as (X1 + X2) times a unit series.

    In p-coordinates the axial class is p_1 + sum_i 2 kappa_i theta^i p_{i+1}
    times sqrt(X1 X2); dividing by p_1 solves a triangular system for
    u + sum beta_j p_{2j}. The valuation bound nu(beta_j) >= j + 4 from the
    expansion argument is enforced before returning.
    """
    jint = _internal_J(J, K, 2 * (max(len(kappas), len(gammas)) + 2))
    s = _axial_series(kappas, gammas, jint, K, leading=leading)
    for j in s.support():
        if j % 2 == 0:
            raise TheoremCheckError("axial series has an even-index term p_%d" % j)

    mod = 1 << K
    jmax = (jint - 1) // 2
    beta = [0] * (jmax + 2)
    for j in range(jmax, 0, -1):
        beta[j] = (int(s.coeffs[2 * j + 1]) - beta[j + 1]) % mod
    u = (int(s.coeffs[1]) - beta[1]) % mod
    if u % 2 == 0:
        raise TheoremCheckError("unit part of the axial decomposition came out even")
    for j in range(1, jmax + 1):
        if beta[j] and nu(beta[j]) < j + 4:
            raise TheoremCheckError("nu(beta_%d) = %d < %d" % (j, nu(beta[j]), j + 4))

    # round-trip: p_1 * (u + sum beta_j p_{2j}) must reproduce the series
    unit = PSeries.from_terms(jint, K, {0: u})
    for j in range(1, jmax + 1):
        if 2 * j <= jint:
            unit.coeffs[2 * j] = np.uint64(beta[j])
    p1 = PSeries.from_terms(jint, K, {1: 1})
    back = p1 * unit
    for j in range(0, min(J, jint - 1) + 1):
        if int(back.coeffs[j]) != int(s.coeffs[j]):
            raise TheoremCheckError("axial decomposition round-trip failed at p_%d" % j)

    ncoef = min(jmax, max(1, J // 2))
    alphas = [TwoAdic(beta[j] >> (4 + j), max(1, K - 4 - j)) for j in range(1, ncoef + 1)]
    return UnitSeries(u=TwoAdic(u, K), alphas=alphas, K=K)


def invert_unit(unit: UnitSeries, J: Optional[int] = None) -> UnitSeries:
    """Inverse of u + sum 2^{4+j} alpha_j p_{2j}, of the same shape."""
    if not unit.u.is_odd:
        raise ValueError("only odd unit parts are invertible")
    K = unit.K
    jint = _internal_J(J if J is not None else 2 * len(unit.alphas), K)
    useries = unit.to_pseries(jint)
    mod = 1 << K
    v = PSeries.from_terms(jint, K, {0: pow(unit.u.value, -1, mod)})
    two = PSeries.from_terms(jint, K, {0: 2})
    one = PSeries.from_terms(jint, K, {0: 1})
    for _ in range(8):
        err = one - useries * v
        if err.is_zero():
            break
        v = v * (two - useries * v)
    else:
        raise AssertionError("unit inversion failed to converge")

    alphas = []
    for j in range(1, (jint // 2) + 1):
        c = int(v.coeffs[2 * j])
        if c and nu(c) < j + 4:
            raise TheoremCheckError("inverse coefficient of p_%d has nu %d < %d" % (2 * j, nu(c), j + 4))
        if 2 * j - 1 >= 1 and int(v.coeffs[2 * j - 1]):
            raise TheoremCheckError("inverse has an odd-index term p_%d" % (2 * j - 1))
        alphas.append(TwoAdic(c >> (4 + j), max(1, K - 4 - j)))
    while alphas and alphas[-1].value == 0:
        alphas.pop()
    return UnitSeries(u=TwoAdic(int(v.coeffs[0]), K), alphas=alphas, K=K)


# -- the tmf-ring toy model ------------------------------------------------


class TmfRingElt:
    """Integer combinations of X1^a X2^b L1^e L2^f with L^2 = 2L, L X = 2X.

    Normal form keeps e, f in {0, 1} and drops an L_i next to a positive
    power of X_i (folding in the factor 2), so the basis monomials are
    X1^a X2^b, L1 X2^b, X1^a L2, L1, L2, and L1 L2.
    """

    __slots__ = ("terms",)

    def __init__(self, terms: Optional[dict[tuple[int, int, int, int], int]] = None):
        self.terms: dict[tuple[int, int, int, int], int] = {}
        if terms:
            for key, c in terms.items():
                self._add(key, c)

    @classmethod
    def monomial(cls, a: int = 0, b: int = 0, e1: int = 0, e2: int = 0, coeff: int = 1) -> "TmfRingElt":
        out = cls()
        out._add((a, b, e1, e2), coeff)
        return out

    @classmethod
    def x1(cls) -> "TmfRingElt":
        return cls.monomial(a=1)

    @classmethod
    def x2(cls) -> "TmfRingElt":
        return cls.monomial(b=1)

    @classmethod
    def l1(cls) -> "TmfRingElt":
        return cls.monomial(e1=1)

    @classmethod
    def l2(cls) -> "TmfRingElt":
        return cls.monomial(e2=1)

    def _add(self, key: tuple[int, int, int, int], coeff: int) -> None:
        a, b, e1, e2 = key
        while e1 > 1:
            e1 -= 1
            coeff *= 2
        while e2 > 1:
            e2 -= 1
            coeff *= 2
        if e1 and a > 0:
            e1 = 0
            coeff *= 2
        if e2 and b > 0:
            e2 = 0
            coeff *= 2
        if coeff == 0:
            return
        k = (a, b, e1, e2)
        c = self.terms.get(k, 0) + coeff
        if c:
            self.terms[k] = c
        else:
            self.terms.pop(k, None)

    def __add__(self, other: "TmfRingElt") -> "TmfRingElt":
        out = TmfRingElt(dict(self.terms))
        for k, c in other.terms.items():
            out._add(k, c)
        return out

    def __sub__(self, other: "TmfRingElt") -> "TmfRingElt":
        out = TmfRingElt(dict(self.terms))
        for k, c in other.terms.items():
            out._add(k, -c)
        return out

    def scale(self, c: int) -> "TmfRingElt":
        return TmfRingElt({k: v * c for k, v in self.terms.items()})

    def mul(self, other: "TmfRingElt", caps: Optional[tuple[int, int]] = None) -> "TmfRingElt":
        out = TmfRingElt()
        for (a1, b1, e1, f1), c1 in self.terms.items():
            for (a2, b2, e2, f2), c2 in other.terms.items():
                a, b = a1 + a2, b1 + b2
                if caps is not None and (a > caps[0] or b > caps[1]):
                    continue
                out._add((a, b, e1 + e2, f1 + f2), c1 * c2)
        return out

    def __mul__(self, other: "TmfRingElt") -> "TmfRingElt":
        return self.mul(other)

    def __eq__(self, other) -> bool:
        return isinstance(other, TmfRingElt) and self.terms == other.terms

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def coeff(self, a: int, b: int, e1: int = 0, e2: int = 0) -> int:
        return self.terms.get((a, b, e1, e2), 0)

    def __repr__(self) -> str:
        if not self.terms:
            return "0"
        bits = []
        for (a, b, e1, e2), c in sorted(self.terms.items()):
            mono = "".join(
                part
                for part in (
                    "L1" if e1 else "",
                    "X1^%d" % a if a else "",
                    "L2" if e2 else "",
                    "X2^%d" % b if b else "",
                )
                if part
            )
            bits.append("%+d%s" % (c, "*" + mono if mono else ""))
        return " ".join(bits)


def tmfring_pow(e: TmfRingElt, n: int, caps: Optional[tuple[int, int]] = None) -> TmfRingElt:
    """n-th power in normal form, dropping cap-exceeding monomials as it goes."""
    if caps is not None and (caps[0] < 0 or caps[1] < 0):
        raise ValueError("caps must be nonnegative")
    out = TmfRingElt.monomial()
    base = e
    k = n
    while k:
        if k & 1:
            out = out.mul(base, caps)
        k >>= 1
        if k:
            base = base.mul(base, caps)
    return out


# -- order tables and the nonvanishing verdict -----------------------------


@dataclass(frozen=True)
class OrderEntry:
    """2-power order exponent of one monomial, with where it came from."""

    exponent: int
    provenance: str

    @property
    def assumed(self) -> bool:
        return self.provenance.startswith("assumed")


@dataclass
class OrderTable:
    """Orders of monomials X1^i X2^j under dimension caps (n, m)."""

    caps: tuple[int, int]
    entries: dict[tuple[int, int], OrderEntry]

    def get(self, i: int, j: int) -> OrderEntry:
        if (i, j) not in self.entries:
            raise MissingOrderError("no order entry for X1^%d X2^%d" % (i, j))
        return self.entries[(i, j)]

    def any_assumed(self) -> bool:
        return any(e.assumed for e in self.entries.values())


def certify_nonvanishing(ell: int, caps: tuple[int, int], orders: OrderTable) -> tuple[bool, Optional[dict]]:
    """Is (X1 + X2)^ell nonzero under the caps, given monomial orders?

    True exactly when some surviving monomial X1^i X2^{ell-i} has
    nu(binom(ell, i)) below its order exponent; the basis monomials are
    independent, so no cross-cancellation is possible.
    """
    cap1, cap2 = caps
    lo = max(0, ell - cap2)
    hi = min(ell, cap1)
    for i in range(lo, hi + 1):
        entry = orders.get(i, ell - i)
        v = nu_binom(ell, i)
        if v < entry.exponent:
            witness = {
                "monomial": [i, ell - i],
                "nu": v,
                "order_exponent": entry.exponent,
                "provenance": entry.provenance,
            }
            return True, witness
    return False, None

"""Exact q-series arithmetic and certified coefficient bounds.

Theta functions of even unimodular lattices live in finite dimensional spaces
of modular forms, so every theta series used here is an exact rational
combination of Eisenstein series and a normalized cusp form.  Coefficients are
Fractions end to end; floats appear only in the certified-bound layer, where
every constant is rounded upward.

The bound layer provides three certified estimates:

* ``zeta_upper``          an upper enclosure of zeta(s) for integer s >= 2,
* ``jenkins_rouse_constant``  the explicit cusp-form coefficient bound
                          |a_m| <= C d(m) m^((k-1)/2) of Jenkins and Rouse,
* ``tail_bound``          sum_{m >= j} m^k e^(-2 alpha m) <= j^k e^(-2 alpha j)
                          + (2 alpha)^(-(k+1)) Gamma(k+1, 2 alpha j).

All upward rounding is done by a relative inflation of 1e-9, far above the
float64 rounding accumulated in these short formulas.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

import numpy as np

DEFAULT_LENGTH = 64

# relative inflation applied to every certified constant
_UP = 1.0 + 1e-9

# exp() floor: an upper bound that underflows must stay positive
_LOG_FLOOR = -700.0


class InvalidWeight(ValueError):
    """Eisenstein or cusp weight outside the supported even range."""


class InconsistentRootCount(ValueError):
    """Root count incompatible with the dimension's theta space."""


class UnsupportedDimension(ValueError):
    """Dimension without the required modular-form data."""


class MonotonicityViolated(ValueError):
    """tail_bound called left of the summand's maximum."""


class TruncationInsufficient(ValueError):
    """Series too short for the requested certified evaluation."""


# ---------------------------------------------------------------------------
# small number theory helpers
# ---------------------------------------------------------------------------


@lru_cache(maxsize=None)
def bernoulli(k: int) -> Fraction:
    """k-th Bernoulli number (B_1 = -1/2 convention), exact."""
    if k < 0:
        raise ValueError("negative Bernoulli index")
    row = [Fraction(0)] * (k + 1)
    for m in range(k + 1):
        row[m] = Fraction(1, m + 1)
        for j in range(m, 0, -1):
            row[j - 1] = j * (row[j - 1] - row[j])
    return row[0]


def sigma(k: int, m: int) -> int:
    """Divisor power sum sigma_k(m) for m >= 1."""
    assert m >= 1
    total = 0
    d = 1
    while d * d <= m:
        if m % d == 0:
            total += d**k
            e = m // d
            if e != d:
                total += e**k
        d += 1
    return total


def divisor_count(m: int) -> int:
    return sigma(0, m)


def _sigma_table(k: int, length: int) -> list[int]:
    # sieve: cheaper than per-m factorization for long series
    table = [0] * length
    for d in range(1, length):
        dk = d**k
        for m in range(d, length, d):
            table[m] += dk
    return table


# ---------------------------------------------------------------------------
# exact q-series
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class QSeries:
    """Truncated q-expansion sum_m c_m q^m with exact rational coefficients.

    ``weight`` is the modular weight, carried so arithmetic can check that
    sums stay inside one space.  ``coeffs[m]`` is the coefficient of q^m;
    the truncation order is ``len(coeffs)``.
    """

    weight: int
    coeffs: tuple[Fraction, ...]

    @property
    def length(self) -> int:
        return len(self.coeffs)

    def coefficient(self, m: int) -> Fraction:
        if m >= len(self.coeffs):
            raise TruncationInsufficient(
                f"coefficient {m} beyond truncation order {len(self.coeffs)}"
            )
        return self.coeffs[m]

    def __add__(self, other: "QSeries") -> "QSeries":
        if self.weight != other.weight:
            raise InvalidWeight(
                f"cannot add weights {self.weight} and {other.weight}"
            )
        n = min(len(self.coeffs), len(other.coeffs))
        return QSeries(
            self.weight,
            tuple(a + b for a, b in zip(self.coeffs[:n], other.coeffs[:n])),
        )

    def __sub__(self, other: "QSeries") -> "QSeries":
        return self + other.scale(-1)

    def __mul__(self, other: "QSeries") -> "QSeries":
        n = min(len(self.coeffs), len(other.coeffs))
        a, b = self.coeffs, other.coeffs
        prod = [Fraction(0)] * n
        for i in range(n):
            ai = a[i]
            if ai == 0:
                continue
            for j in range(n - i):
                prod[i + j] += ai * b[j]
        return QSeries(self.weight + other.weight, tuple(prod))

    def scale(self, factor) -> "QSeries":
        f = Fraction(factor)
        return QSeries(self.weight, tuple(f * c for c in self.coeffs))

    def floats(self) -> list[float]:
        return [float(c) for c in self.coeffs]

    def is_integral(self) -> bool:
        return all(c.denominator == 1 for c in self.coeffs)

    def to_json_dict(self) -> dict:
        """Exact JSON form: rationals as 'p/q' strings."""
        return {
            "weight": self.weight,
            "coefficients": [
                str(c.numerator) if c.denominator == 1 else f"{c.numerator}/{c.denominator}"
                for c in self.coeffs
            ],
        }


def eisenstein(k: int, length: int = DEFAULT_LENGTH) -> QSeries:
    """Normalized Eisenstein series E_k = 1 - (2k/B_k) sum sigma_{k-1}(m) q^m."""
    if k < 4 or k % 2 != 0:
        raise InvalidWeight(f"Eisenstein weight must be even and >= 4, got {k}")
    factor = Fraction(-2 * k) / bernoulli(k)
    table = _sigma_table(k - 1, length)
    coeffs = [Fraction(1)] + [factor * table[m] for m in range(1, length)]
    return QSeries(k, tuple(coeffs))


@lru_cache(maxsize=64)
def _eisenstein_cached(k: int, length: int) -> QSeries:
    return eisenstein(k, length)


@lru_cache(maxsize=16)
def discriminant(length: int = DEFAULT_LENGTH) -> QSeries:
    """The normalized weight-12 cusp form (E4^3 - E6^2) / 1728."""
    e4 = _eisenstein_cached(4, length)
    e6 = _eisenstein_cached(6, length)
    delta = (e4 * e4 * e4 - e6 * e6).scale(Fraction(1, 1728))
    assert delta.coeffs[0] == 0 and delta.coeffs[1] == 1
    assert delta.is_integral()
    return delta


def eisenstein_first_coeff(k: int) -> Fraction:
    """Coefficient of q in E_k, i.e. -2k/B_k."""
    return Fraction(-2 * k) / bernoulli(k)


@lru_cache(maxsize=128)
def cusp_normalized(n: int, length: int = DEFAULT_LENGTH) -> QSeries:
    """Normalized cusp form of weight n/2 + 4 for dimension n in {16, 24, 32}.

    These are the forms pairing with degree-4 harmonics of theta series:
    Delta, E4*Delta and E4^2*Delta for n = 16, 24, 32.  Dimension 8 has no
    cusp form of weight 8, which callers treat as an identically zero series.
    """
    if n not in (16, 24, 32):
        raise UnsupportedDimension(f"no weight-(n/2+4) cusp form stored for n={n}")
    form = discriminant(length)
    e4 = _eisenstein_cached(4, length)
    for _ in range((n - 16) // 8):
        form = form * e4
    assert form.weight == n // 2 + 4
    assert form.coeffs[1] == 1
    return form


@lru_cache(maxsize=256)
def theta_even_unimodular(n: int, root_count, length: int = DEFAULT_LENGTH) -> QSeries:
    """Theta series of an even unimodular lattice of dimension n.

    The q-expansion is pinned by (n, root_count):

    * n = 8:   E4 (root_count must be 240),
    * n = 16:  E4^2 (root_count must be 480),
    * n = 24:  E4^3 + (root_count - 720) Delta,
    * n = 32:  E16 + (root_count - 16320/3617) E4 Delta.
    """
    rc = Fraction(root_count)
    e4 = _eisenstein_cached(4, length)
    if n == 8:
        if rc != 240:
            raise InconsistentRootCount("dimension 8 forces 240 roots")
        return QSeries(4, e4.coeffs)
    if n == 16:
        if rc != 480:
            raise InconsistentRootCount("dimension 16 forces 480 roots")
        return QSeries(8, (e4 * e4).coeffs)
    if n == 24:
        base = e4 * e4 * e4
        return base + discriminant(length).scale(rc - 720)
    if n == 32:
        base = _eisenstein_cached(16, length)
        cusp = discriminant(length) * e4  # weight-16 normalized cusp form
        return base + cusp.scale(rc - eisenstein_first_coeff(16))
    raise UnsupportedDimension(f"theta series known for n in 8..32 by 8, got {n}")


# ---------------------------------------------------------------------------
# certified bounds
# ---------------------------------------------------------------------------


@lru_cache(maxsize=64)
def zeta_upper(s: int) -> float:
    """Certified upper bound on zeta(s) for integer s >= 2.

    Partial sum over 10^6 terms plus the integral remainder
    sum_{n > N} n^-s <= N^(1-s)/(s-1), everything inflated upward.
    """
    if s < 2:
        raise ValueError("zeta_upper needs s >= 2")
    N = 10**6
    terms = np.arange(1, N + 1, dtype=float) ** (-float(s))
    partial = float(np.sum(terms[::-1]))  # ascending magnitudes
    remainder = N ** (1.0 - s) / (s - 1.0)
    return (partial + remainder) * _UP


def round_up_significant(x: float, digits: int) -> float:
    """Round x > 0 upward to the given number of significant digits."""
    assert x > 0 and digits >= 1
    exponent = math.floor(math.log10(x))
    scale = 10.0 ** (digits - 1 - exponent)
    return math.ceil(x * scale - 1e-12) / scale


@dataclass(frozen=True)
class CoeffBound:
    """Certified bound sum_i c_i * m^(e_i) on |a_m|, all m >= 1."""

    terms: tuple[tuple[float, int], ...]

    def eval(self, m: int) -> float:
        return sum(c * float(m) ** e for c, e in self.terms)

    def series_tail(self, j: int, alpha: float, extra_exponent: int = 0) -> float:
        """Certified bound on sum_{m >= j} (bound at m) * m^extra * e^(-2 alpha m)."""
        return sum(
            c * tail_bound(j, e + extra_exponent, alpha) for c, e in self.terms
        )


@lru_cache(maxsize=64)
def eisenstein_coeff_bound(n: int) -> CoeffBound:
    """Bound on the Eisenstein part of a dimension-n theta series.

    |(2k/|B_k|) sigma_{k-1}(m)| <= (2k/|B_k|) zeta(k-1) m^(k-1) with k = n/2;
    the constant is rounded up to 2 significant digits (n = 32 gives 4.6).
    """
    if n % 8 != 0 or not 8 <= n <= 32:
        raise UnsupportedDimension(f"Eisenstein bound defined for n in 8..32 by 8, got {n}")
    k = n // 2
    raw = abs(float(eisenstein_first_coeff(k))) * zeta_upper(k - 1)
    return CoeffBound(((round_up_significant(raw, 2), k - 1),))


def jenkins_rouse_constant(k: int, leading_coeffs) -> float:
    """Explicit constant C with |a_m| <= C d(m) m^((k-1)/2) for a weight-k cusp form.

    ``leading_coeffs`` are the first coefficients a_1..a_R of the form (any
    nonempty prefix works; the bound uses whatever is supplied).  Formula of
    Jenkins and Rouse, evaluated with upward rounding slack.
    """
    if k < 12 or k % 2 != 0:
        raise InvalidWeight(f"cusp weight must be even and >= 12, got {k}")
    coeffs = [float(c) for c in leading_coeffs]
    if not coeffs:
        raise ValueError("need at least one leading coefficient")
    quad = math.sqrt(sum(c * c / float(r + 1) ** (k - 1) for r, c in enumerate(coeffs)))
    lin = abs(sum(c * math.exp(-7.288 * (r + 1)) for r, c in enumerate(coeffs)))
    # e^18.72 * 41.41^(k/2) / k^((k-1)/2), safely in log space
    big = math.exp(18.72 + (k / 2) * math.log(41.41) - ((k - 1) / 2) * math.log(k))
    return math.sqrt(math.log(k)) * (11.0 * quad + big * lin) * _UP


def cusp_coeff_bound(k: int, leading_coeffs) -> CoeffBound:
    """Jenkins-Rouse bound with d(m) <= 2 sqrt(m) folded in: 2C m^(k/2)."""
    c = jenkins_rouse_constant(k, leading_coeffs)
    return CoeffBound(((2.0 * c, k // 2),))


@lru_cache(maxsize=256)
def theta_coeff_bound(n: int, root_count) -> CoeffBound:
    """Certified bound on |a_m| for the dimension-n theta with given root count.

    Eisenstein part from ``eisenstein_coeff_bound``; for n >= 24 the cusp part
    uses the Jenkins-Rouse constant of the cusp component, whose first
    coefficient is root_count - (coefficient of q in E_{n/2}).
    """
    eis = eisenstein_coeff_bound(n)
    if n < 24:
        return eis
    c1 = Fraction(root_count) - eisenstein_first_coeff(n // 2)
    if c1 == 0:
        return eis
    cusp = cusp_coeff_bound(n // 2, (c1,))
    return CoeffBound(eis.terms + cusp.terms)


def incomplete_gamma(s: int, x: float) -> float:
    """Upper incomplete Gamma(s, x) for integer s >= 1, x >= 0.

    Exact finite form (s-1)! e^-x sum_{t<s} x^t/t!, evaluated in log space so
    small values stay positive upper bounds instead of underflowing to zero.
    """
    if s < 1:
        raise ValueError("integer s >= 1 required")
    if x < 0:
        raise ValueError("x >= 0 required")
    if x == 0.0:
        return float(math.factorial(s - 1))
    # partial sum with the largest term factored out, all in logs
    logs = [t * math.log(x) - math.lgamma(t + 1) for t in range(s)]
    peak = max(logs)
    inner = sum(math.exp(v - peak) for v in logs)
    logval = math.lgamma(s) - x + peak + math.log(inner)
    return math.exp(max(logval, _LOG_FLOOR)) * _UP


def tail_bound(j: int, k: int, alpha: float) -> float:
    """Certified bound on sum_{m >= j} m^k e^(-2 alpha m).

    Valid once the summand is nonincreasing from j on, which requires
    j >= k / (2 alpha); earlier j raises MonotonicityViolated.  The bound is
    j^k e^(-2 alpha j) + (2 alpha)^(-(k+1)) Gamma(k+1, 2 alpha j).
    """
    if j < 1 or k < 0:
        raise ValueError("need j >= 1 and k >= 0")
    if alpha <= 0:
        raise ValueError("alpha must be positive")
    if 2.0 * alpha * j < k:
        raise MonotonicityViolated(
            f"tail start j={j} below k/(2 alpha) = {k / (2 * alpha):.3f}"
        )
    x = 2.0 * alpha * j
    first = math.exp(max(k * math.log(j) - x, _LOG_FLOOR)) if j > 1 else math.exp(-x)
    rest = incomplete_gamma(k + 1, x) * math.exp(
        max(-(k + 1) * math.log(2.0 * alpha), _LOG_FLOOR)
    )
    return (first + rest) * _UP


def theta_duality_residual(theta: QSeries, n: int, y: float) -> float:
    """|Theta(iy) - y^(-n/2) Theta(i/y)| from the truncated series.

    Both evaluations use every stored coefficient.  The neglected tails are
    certified first; if either can exceed 1e-12 the truncation is refused.
    """
    if not 0.5 <= y <= 2.0:
        raise ValueError("y restricted to [0.5, 2]")
    length = theta.length
    bound = theta_coeff_bound(n, theta.coeffs[1])
    for alpha_eff, scale in ((math.pi * y, 1.0), (math.pi / y, y ** (-n / 2.0))):
        if 2.0 * alpha_eff * length < max(e for _, e in bound.terms):
            raise TruncationInsufficient("series too short for tail certification")
        tail = bound.series_tail(length, alpha_eff) * scale
        if tail > 1e-12:
            raise TruncationInsufficient(
                f"certified tail {tail:.3e} exceeds 1e-12 at y={y}"
            )
    floats = theta.floats()
    lhs = _theta_value(floats, math.pi * y)
    rhs = y ** (-n / 2.0) * _theta_value(floats, math.pi / y)
    return abs(lhs - rhs)


def _theta_value(coeffs: list[float], alpha_eff: float) -> float:
    # ascending-term summation: small high-index terms first
    total = 0.0
    for m in range(len(coeffs) - 1, -1, -1):
        total += coeffs[m] * math.exp(-2.0 * alpha_eff * m)
    return total

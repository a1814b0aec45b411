"""Criticality and certified Morse data for Gaussian-core energy.

The energy of a lattice under f(r) = e^(-alpha r^2) is a function on the
space of unimodular deformations, and for the lattices in the catalog both
questions about it reduce to q-series with certified tails:

* criticality is decided exactly by second moments of the root shell, since
  the degree-2 harmonic theta series is a cusp form whose weight-(n/2 + 2)
  space is trivial for n <= 24 and one-dimensional, detected by its first
  coefficient, for n = 32;

* at a critical lattice the traceless Hessian diagonalizes along the
  eigenspaces of the root-shell quartic form Q, and each eigenvalue is an
  explicit series in the theta coefficients a_m and the coefficients b_m of
  a normalized weight-(n/2 + 4) cusp form.

Every reported eigenvalue carries an error radius that accounts for series
truncation (via the coefficient bounds in ``modforms``) and floating point
roundoff, so sign decisions and the resulting local min / max / saddle
classification are certificates, not estimates.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from . import enumlat, modforms, symspace
from .latcat import LatticeEntry
from .rootsys import second_moment

CLASS_LOCAL_MIN = "LocalMin"
CLASS_LOCAL_MAX = "LocalMax"
CLASS_SADDLE = "Saddle"
CLASS_INDETERMINATE = "Indeterminate"

_ROUNDOFF = 1e-13


class NotCritical(ValueError):
    pass


class CertificateFails(ArithmeticError):
    pass


class ToleranceUnreachable(ArithmeticError):
    pass


class Inapplicable(ValueError):
    pass


def truncate_decimal(x: float, digits: int) -> float:
    """Truncate toward zero to the given number of decimal places."""
    scale = 10**digits
    return math.trunc(x * scale) / scale


# ---------------------------------------------------------------------------
# criticality
# ---------------------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class CriticalityResult:
    """Outcome of the exact root-shell second-moment test.

    ``blocks`` lists (size, moment) pairs covering all n coordinates: one per
    irreducible component with its exact per-axis second moment 2h, plus a
    zero-moment block for coordinates outside the root span.  ``target`` is
    the isotropic value 2 a_1 / n, and ``defects`` the per-block deviations.
    """

    kind: str  # "critical_all_alpha" | "moment_defect"
    target: Fraction
    blocks: tuple[tuple[int, Fraction], ...]
    defects: tuple[Fraction, ...]
    witness: np.ndarray | None
    reason: str

    @property
    def is_critical(self) -> bool:
        return self.kind == "critical_all_alpha"


def criticality(entry: LatticeEntry) -> CriticalityResult:
    """Decide whether the lattice is a critical point at every alpha.

    The decision is exact: rational block moments against the rational
    target.  A nonzero defect comes with a traceless block-diagonal witness
    direction along which the gradient does not vanish for generic alpha
    (``noncritical_certificate`` pins it down at a specific alpha).
    """
    n = entry.dimension
    system = entry.root_system
    target = Fraction(2 * entry.root_count, n)
    blocks: list[tuple[int, Fraction]] = [
        (comp.rank, Fraction(2 * comp_h))
        for comp, comp_h in zip(system.components, system.coxeter_numbers)
    ]
    uncovered = n - system.total_rank
    if uncovered:
        blocks.append((uncovered, Fraction(0)))
    defects = tuple(moment - target for _, moment in blocks)
    assert sum(size * d for (size, _), d in zip(blocks, defects)) == 0

    if all(d == 0 for d in defects):
        reason = (
            "every block of the root-shell second moment equals 2 a_1 / n, and "
            "the degree-2 harmonic theta series, a cusp form of weight n/2 + 2, "
            "is then forced to vanish (its space is trivial for n <= 24 and "
            "detected by the root-shell coefficient for n = 32), so every shell "
            "is a 2-design and the gradient vanishes at every alpha"
        )
        return CriticalityResult(
            kind="critical_all_alpha",
            target=target,
            blocks=tuple(blocks),
            defects=defects,
            witness=None,
            reason=reason,
        )

    witness = np.zeros((n, n))
    offset = 0
    for (size, _), d in zip(blocks, defects):
        witness[offset : offset + size, offset : offset + size] = float(d) * np.eye(size)
        offset += size
    witness.setflags(write=False)
    reason = (
        "the root-shell second moment is not isotropic; pairing the gradient "
        "with the witness direction isolates a nonzero root-shell term"
    )
    return CriticalityResult(
        kind="moment_defect",
        target=target,
        blocks=tuple(blocks),
        defects=defects,
        witness=witness,
        reason=reason,
    )


@dataclass(frozen=True, eq=False)
class Certificate:
    """Proof that the gradient pairing with ``direction`` is nonzero.

    root_term is the exact contribution of the norm-2 shell; remainder bounds
    everything else (exact partial sums for 2 <= m <= exact_terms, certified
    coefficient-bound tail beyond).  Validity: root_term > remainder.
    """

    lattice: str
    alpha: float
    direction: np.ndarray
    root_term: float
    remainder: float
    exact_terms: int
    constants: dict

    @property
    def margin(self) -> float:
        return self.root_term - self.remainder


def noncritical_certificate(
    entry: LatticeEntry,
    alpha: float,
    direction=None,
    exact_terms: int = 8,
) -> Certificate:
    """Certify <grad E, H> != 0 at this alpha, proving the point noncritical.

    The pairing is -alpha sum_m e^(-2 alpha m) <H, S_m> with S_m the shell
    second moment.  The m = 1 term is computed exactly; |<H, S_m>| for m >= 2
    is bounded by max|eig H| * 2m * a_m, summed exactly up to ``exact_terms``
    and closed with the certified theta coefficient tail.  Raises
    CertificateFails when the root term does not dominate.
    """
    if alpha <= 0:
        raise ValueError("alpha must be positive")
    if entry.root_count == 0:
        raise CertificateFails("no root shell: the leading gradient term is absent")
    crit = criticality(entry)

    if direction is None:
        if crit.witness is None:
            raise CertificateFails(
                f"{entry.name} is critical at every alpha; no witness direction exists"
            )
        direction = crit.witness
        # exact pairing: sum over blocks of size * defect * 2h
        pairing = sum(
            size * d * moment for (size, moment), d in zip(crit.blocks, crit.defects)
        )
        root_pairing = abs(float(pairing))
        max_eig = max(abs(float(d)) for d in crit.defects)
    else:
        direction = np.asarray(direction, dtype=float)
        n = entry.dimension
        if direction.shape != (n, n):
            raise ValueError("direction has the wrong shape")
        if abs(float(np.trace(direction))) > 1e-12 * max(1.0, float(np.abs(direction).max())):
            raise ValueError("direction must be traceless")
        s1 = second_moment(entry.root_system)
        pad = np.zeros((n, n))
        r = s1.shape[0]
        pad[:r, :r] = s1
        # float pairing, deflated; the witness route keeps this exact
        root_pairing = abs(float(np.sum(pad * direction))) * (1.0 - 1e-9)
        max_eig = float(np.max(np.abs(np.linalg.eigvalsh(direction)))) * (1.0 + 1e-9)

    if root_pairing <= 0:
        raise CertificateFails("direction pairs to zero with the root-shell moment")

    root_term = alpha * math.exp(-2.0 * alpha) * root_pairing

    # the tail bound needs its start past k/(2 alpha); extend the exact range
    # rather than leak a precondition error for small alpha
    k_max = max(e for _, e in entry.coeff_bound().terms) + 1
    exact_terms = max(exact_terms, math.ceil(k_max / (2.0 * alpha)))
    if exact_terms > 4096:
        raise CertificateFails(
            f"alpha = {alpha:g} is too shallow for a certified remainder bound"
        )
    a = entry.series_floats(exact_terms + 1)[0]
    m = np.arange(2, exact_terms + 1)
    partial = float(np.sum(a[2:] * 2.0 * m * np.exp(-2.0 * alpha * m)))
    tail = 2.0 * entry.coeff_bound().series_tail(exact_terms + 1, alpha, extra_exponent=1)
    remainder = alpha * max_eig * (partial * (1.0 + _ROUNDOFF) + tail)

    cert = Certificate(
        lattice=entry.name,
        alpha=alpha,
        direction=direction,
        root_term=root_term,
        remainder=remainder,
        exact_terms=exact_terms,
        constants={
            "root_pairing": root_pairing,
            "max_abs_eigenvalue": max_eig,
            "partial_sum": partial,
            "tail": tail,
        },
    )
    if not root_term > remainder:
        raise CertificateFails(
            f"root term {root_term:.6g} does not dominate remainder {remainder:.6g} "
            f"at alpha = {alpha:g}"
        )
    return cert


# ---------------------------------------------------------------------------
# certified Hessian spectrum
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class SpectralLine:
    """One Hessian eigenvalue: Q-eigenvalue lambda, multiplicity, certified mu."""

    q_eigenvalue: int
    multiplicity: int
    value: float
    error_radius: float

    @property
    def sign(self) -> int:
        if self.value - self.error_radius > 0:
            return 1
        if self.value + self.error_radius < 0:
            return -1
        return 0


@dataclass(frozen=True, eq=False)
class SpectrumReport:
    lattice: str
    alpha: float
    terms: int
    lines: tuple[SpectralLine, ...]
    classification: str
    morse_index: int | None
    margin: float

    def to_json_dict(self) -> dict:
        def f(x: float) -> float:
            return float(f"{x:.12g}")

        return {
            "lattice": self.lattice,
            "alpha": f(self.alpha),
            "terms": self.terms,
            "classification": self.classification,
            "morse_index": self.morse_index,
            "margin": f(self.margin),
            "lines": [
                {
                    "lambda": line.q_eigenvalue,
                    "multiplicity": line.multiplicity,
                    "mu": f(line.value),
                    "error_radius": f(line.error_radius),
                    "sign": line.sign,
                }
                for line in self.lines
            ],
        }


def _lambda_spectrum(entry: LatticeEntry) -> tuple[tuple[int, int], ...]:
    """(lambda, multiplicity) rows of the root-shell quartic form Q."""
    n = entry.dimension
    if entry.root_count == 0:
        return ((0, n * (n + 1) // 2 - 1),)
    assert entry.root_system.total_rank == n
    spec = symspace.closed_spectrum(entry.root_system)
    return tuple((int(round(lam)), mult) for lam, mult in spec.entries)


def classify(lines) -> tuple[str, int | None, float]:
    """(classification, morse_index, margin) from certified signs.

    margin is the smallest |mu| - radius over all lines: positive margins
    mean every sign decision has room, a nonpositive margin means some
    eigenvalue interval touches zero and the answer is Indeterminate.
    """
    lines = tuple(lines)
    if not lines:
        raise symspace.EmptyInput("no spectral lines to classify")
    margin = min(abs(line.value) - line.error_radius for line in lines)
    signs = [line.sign for line in lines]
    if any(s == 0 for s in signs):
        return CLASS_INDETERMINATE, None, margin
    index = sum(line.multiplicity for line in lines if line.sign < 0)
    if all(s > 0 for s in signs):
        return CLASS_LOCAL_MIN, 0, margin
    if all(s < 0 for s in signs):
        return CLASS_LOCAL_MAX, index, margin
    return CLASS_SADDLE, index, margin


def _min_terms(n: int, alpha: float) -> int:
    # tail majorization |2am(2am - (n/2+1))| <= (2am)^2 and the monotone-tail
    # preconditions all hold once 2 alpha (M+1) >= n/2 + 1
    return max(16, math.ceil((n / 2 + 1) / (2.0 * alpha)))


def hessian_spectrum(
    entry: LatticeEntry,
    alpha: float,
    tol: float = 1e-10,
    max_terms: int = 4096,
) -> SpectrumReport:
    """Certified traceless Hessian spectrum of a critical lattice at alpha.

    Eigenvalues come out as mu(lambda) = (Sa + (lambda n(n+2) - 8 a_1) Sb)
    / (n(n+2)) with Sa, Sb series over theta and cusp coefficients.  The
    series are summed to M terms, M doubling from a precondition-respecting
    start until every error radius (certified tail plus roundoff allowance)
    is within tol; raises ToleranceUnreachable past ``max_terms``.
    """
    if alpha <= 0:
        raise ValueError("alpha must be positive")
    crit = criticality(entry)
    if not crit.is_critical:
        raise NotCritical(
            f"{entry.name} has a root-shell moment defect; the Hessian spectrum "
            "formula applies only at critical lattices"
        )
    n = entry.dimension
    a1 = entry.root_count
    denom = float(n * (n + 2))
    lam_rows = _lambda_spectrum(entry)
    bound = entry.coeff_bound()
    cusp_bound = None
    if entry.cusp is not None:
        cusp_bound = modforms.cusp_coeff_bound(n // 2 + 4, (1,))

    terms = _min_terms(n, alpha)
    if terms > max_terms:
        raise ToleranceUnreachable(
            f"alpha = {alpha:g} needs more than max_terms = {max_terms} series "
            "terms before the tail bounds even apply"
        )
    while True:
        terms = min(terms, max_terms)
        a, b = entry.series_floats(terms + 1)
        m = np.arange(1, terms + 1, dtype=float)
        w = np.exp(-2.0 * alpha * m)
        sa_terms = a[1 : terms + 1] * (2.0 * alpha * m) * (2.0 * alpha * m - (n / 2 + 1)) * w
        sb_terms = b[1 : terms + 1] * (alpha * alpha / 2.0) * w
        sa, sa_abs = float(np.sum(sa_terms)), float(np.sum(np.abs(sa_terms)))
        sb, sb_abs = float(np.sum(sb_terms)), float(np.sum(np.abs(sb_terms)))

        a_tail = 4.0 * alpha * alpha * bound.series_tail(terms + 1, alpha, extra_exponent=2)
        b_tail = 0.0
        if cusp_bound is not None:
            b_tail = (alpha * alpha / 2.0) * cusp_bound.series_tail(terms + 1, alpha)

        lines = []
        for lam, mult in lam_rows:
            coef = lam * n * (n + 2) - 8 * a1
            if entry.cusp is None:
                assert coef == 0, "dimension-8 spectrum must not touch the cusp series"
            mu = (sa + coef * sb) / denom
            radius = (
                a_tail
                + abs(coef) * b_tail
                + _ROUNDOFF * (sa_abs + abs(coef) * sb_abs)
            ) / denom
            lines.append(
                SpectralLine(
                    q_eigenvalue=lam, multiplicity=mult, value=mu, error_radius=radius
                )
            )
        worst = max(line.error_radius for line in lines)
        if worst <= tol:
            break
        if terms >= max_terms:
            raise ToleranceUnreachable(
                f"error radius {worst:.3g} still above tol {tol:.3g} "
                f"at {terms} series terms"
            )
        terms *= 2

    classification, index, margin = classify(lines)
    return SpectrumReport(
        lattice=entry.name,
        alpha=alpha,
        terms=terms,
        lines=tuple(lines),
        classification=classification,
        morse_index=index,
        margin=margin,
    )


def spectrum_partial(entry: LatticeEntry, alpha: float, lam: int, m_terms: int) -> float:
    """Partial eigenvalue sum through m_terms, no tail: for truncation-matched
    cross-checks against direct shell enumeration."""
    n = entry.dimension
    a, b = entry.series_floats(m_terms + 1)
    m = np.arange(1, m_terms + 1, dtype=float)
    w = np.exp(-2.0 * alpha * m)
    sa = float(np.sum(a[1 : m_terms + 1] * (2.0 * alpha * m) * (2.0 * alpha * m - (n / 2 + 1)) * w))
    sb = float(np.sum(b[1 : m_terms + 1] * (alpha * alpha / 2.0) * w))
    coef = lam * n * (n + 2) - 8 * entry.root_count
    return (sa + coef * sb) / float(n * (n + 2))


def alpha_sweep(entry: LatticeEntry, alphas, tol: float = 1e-8) -> list[SpectrumReport]:
    return [hessian_spectrum(entry, float(alpha), tol=tol) for alpha in alphas]


def large_alpha_class(entry: LatticeEntry) -> str:
    """Classification in the steep limit, from root data alone.

    As alpha grows, mu(lambda) ~ (lambda/2) alpha^2 e^(-2 alpha) for
    lambda > 0 while mu(0) ~ -(n + 2) alpha a_1 e^(-2 alpha) < 0, so the
    outcome is LocalMin exactly when Q has no zero eigenvalue.  Without a
    root shell both leading terms vanish and root data decides nothing.
    """
    if entry.root_count == 0:
        raise Inapplicable(
            f"{entry.name} has no roots; the steep-limit sign is not determined "
            "by the root shell"
        )
    crit = criticality(entry)
    if not crit.is_critical:
        raise NotCritical(f"{entry.name} is not critical")
    lams = [lam for lam, _ in _lambda_spectrum(entry)]
    return CLASS_SADDLE if 0 in lams else CLASS_LOCAL_MIN


def isotropic_hessian_series(
    entry: LatticeEntry, alpha: float, m_terms: int = 8
) -> tuple[float, float]:
    """(partial value, certified tail) of the single Hessian eigenvalue of a
    rootless lattice.

    With no roots Q vanishes identically, the cusp contribution carries the
    coefficient lambda n(n+2) - 8 a_1 = 0, and the whole traceless Hessian is
    mu * identity with mu = Sa / (n(n+2)).  The partial sum runs over
    m <= m_terms; the tail is certified from the theta coefficient bound.
    """
    if entry.root_count != 0:
        raise Inapplicable("isotropic Hessian series requires a rootless lattice")
    n = entry.dimension
    denom = float(n * (n + 2))
    if 2.0 * alpha * (m_terms + 1) < n / 2 + 1:
        raise modforms.MonotonicityViolated(
            "m_terms too small for the tail majorization at this alpha"
        )
    a = entry.series_floats(m_terms + 1)[0]
    m = np.arange(1, m_terms + 1, dtype=float)
    w = np.exp(-2.0 * alpha * m)
    partial = float(
        np.sum(a[1 : m_terms + 1] * (2.0 * alpha * m) * (2.0 * alpha * m - (n / 2 + 1)) * w)
    )
    tail = 4.0 * alpha * alpha * entry.coeff_bound().series_tail(
        m_terms + 1, alpha, extra_exponent=2
    )
    return partial / denom, tail / denom


# ---------------------------------------------------------------------------
# deformation cross-check
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class DeformationCheck:
    measured_ratio: float
    expected_ratio: float
    agree: bool


def deformation_check(
    gram, alpha: float, direction, m_max: int = 4, step: float = 1e-3
) -> DeformationCheck:
    """Finite-difference check of the Hessian convention on an actual path.

    Deform along t -> e^(tH/2), so the squared norms become x^T e^(tH) x, and
    compare the Richardson second derivative of the (truncated) energy with
    the analytic pairing from ``hessian_direct``.  Both truncate at the same
    shells, so the ratio must be the convention factor 2 up to O(step^2).
    """
    g = np.asarray(gram)
    n = g.shape[0]
    h = np.asarray(direction, dtype=float)
    frame = np.linalg.cholesky(g.astype(float)).T
    shells = enumlat.shells_up_to(g, m_max)
    points = np.vstack([s.vectors @ frame.T for s in shells if s.count])

    evals, evecs = np.linalg.eigh(h)

    def energy(t: float) -> float:
        y = points @ evecs
        q = np.sum(y * y * np.exp(t * evals), axis=1)
        return float(np.sum(np.exp(-alpha * q)))

    d2 = (
        16.0 * (energy(step) + energy(-step))
        - (energy(2 * step) + energy(-2 * step))
        - 30.0 * energy(0.0)
    ) / (12.0 * step * step)
    analytic = enumlat.hessian_direct(g, alpha, h, m_max)
    ratio = d2 / analytic
    return DeformationCheck(
        measured_ratio=ratio,
        expected_ratio=2.0,
        agree=abs(ratio - 2.0) <= 1e-5 * max(1.0, abs(ratio)),
    )

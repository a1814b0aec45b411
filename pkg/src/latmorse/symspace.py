"""The quartic form of a root shell on traceless symmetric matrices.

For a root system R in R^n the form

    Q[H] = sum_{x in R} (x^T H x)^2

is the second-order data of Gaussian lattice energy at a critical point.  This
module evaluates Q, diagonalizes it on the traceless space T0 (closed form for
ADE sums with equal Coxeter number, dense numerics otherwise), builds the
invariant subspaces that realize each eigenvalue, and provides the spherical
design checks and degree-4 harmonic decomposition behind those formulas.

Conventions: matrices act in the root system's orthonormal frame coordinates;
<A, B> = Tr(AB); H[x] = x^T H x.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .rootsys import (
    IrreducibleRootSystem,
    RootSystem,
    direct_sum,
    properties,
)

CLUSTER_TOL = 1e-6

U1 = "U1"
U2 = "U2"
D4_PLUS = "D4_PLUS"
D4_MINUS = "D4_MINUS"


class UnequalCoxeter(ValueError):
    """Closed spectrum requested for a sum with mixed Coxeter numbers."""


class SubspaceUndefined(ValueError):
    pass


class EmptyInput(ValueError):
    pass


class OffSphere(ValueError):
    """Design check received points of unequal norm."""


class NonTraceless(ValueError):
    pass


class UnsupportedDimension(ValueError):
    pass


# ---------------------------------------------------------------------------
# traceless basis and the quartic form
# ---------------------------------------------------------------------------


@lru_cache(maxsize=64)
def traceless_basis(n: int) -> np.ndarray:
    """Deterministic orthonormal basis of T0^n, shape (d, n, n), d = n(n+1)/2 - 1.

    Off-diagonal elements (E_ij + E_ji)/sqrt(2) in lexicographic (i, j) order,
    then n-1 diagonal vectors from Gram-Schmidt on E_ii - E_(i+1,i+1).
    """
    if n < 2:
        raise ValueError("traceless space needs n >= 2")
    mats = []
    s = 1.0 / math.sqrt(2.0)
    for i in range(n):
        for j in range(i + 1, n):
            m = np.zeros((n, n))
            m[i, j] = m[j, i] = s
            mats.append(m)
    diag = np.zeros((n - 1, n))
    for i in range(n - 1):
        diag[i, i], diag[i, i + 1] = 1.0, -1.0
    for i in range(n - 1):
        for _ in range(2):
            for j in range(i):
                diag[i] -= (diag[j] @ diag[i]) * diag[j]
        diag[i] /= np.linalg.norm(diag[i])
    for i in range(n - 1):
        mats.append(np.diag(diag[i]))
    basis = np.stack(mats)
    basis.setflags(write=False)
    return basis


def _as_matrix(h, n: int) -> np.ndarray:
    h = np.asarray(h, dtype=float)
    if h.shape != (n, n):
        raise ValueError(f"expected a {n}x{n} matrix, got shape {h.shape}")
    return h


def quartic_form(system: RootSystem | IrreducibleRootSystem, h) -> float:
    """Q[H] = sum over roots of (x^T H x)^2, H in frame coordinates."""
    rows = system.frame_roots
    if rows.shape[0] == 0:
        return 0.0
    n = rows.shape[1]
    h = _as_matrix(h, n)
    vals = np.einsum("ri,ij,rj->r", rows, h, rows)
    return float(vals @ vals)


def quartic_values(system: RootSystem | IrreducibleRootSystem, h) -> np.ndarray:
    """The values x^T H x over the shell (one per root)."""
    rows = system.frame_roots
    h = _as_matrix(h, rows.shape[1])
    return np.einsum("ri,ij,rj->r", rows, h, rows)


@dataclass(frozen=True)
class QSpectrum:
    """Eigenvalues of Q on T0^n with multiplicities, ascending."""

    space_dim: int
    entries: tuple[tuple[float, int], ...]

    @property
    def multiplicity_total(self) -> int:
        return sum(m for _, m in self.entries)

    def eigenvalues(self) -> list[float]:
        return [lam for lam, _ in self.entries]

    def as_dict(self) -> dict[float, int]:
        return {lam: m for lam, m in self.entries}


def _component_rows(comp: IrreducibleRootSystem) -> list[tuple[int, int]]:
    """Traceless eigenvalue rows (value, multiplicity) of one irreducible shell."""
    n = comp.rank
    if comp.kind == "A":
        if n < 2:
            return []
        rows = [(2 * (n + 1), n)]
        if n * (n - 1) // 2 - 1 > 0:
            rows.append((4, n * (n - 1) // 2 - 1))
        return rows
    if comp.kind == "D":
        return [(4 * (n - 2), n - 1), (8, n * (n - 1) // 2)]
    return {6: [(12, 20)], 7: [(16, 27)], 8: [(24, 35)]}[n]


def closed_spectrum(system: RootSystem | IrreducibleRootSystem) -> QSpectrum:
    """Exact Q-spectrum on T0^n for irreducible shells and equal-Coxeter sums.

    Per component the traceless eigenvalues are the classified ones (4 and
    2(n+1) for A_n, 8 and 4(n-2) for D_n, 8h/(n+2) for the E's); a sum of m
    components with common Coxeter number h adds eigenvalue 0 on off-block
    matrices (multiplicity sum_{i<j} n_i n_j) and 4h on the trace-balanced
    diagonal directions (multiplicity m - 1).
    """
    if isinstance(system, IrreducibleRootSystem):
        system = direct_sum([system])
    if not system.components:
        raise ValueError("closed spectrum of an empty system is undefined")
    if not system.equal_coxeter and len(system.components) > 1:
        raise UnequalCoxeter(
            f"components have Coxeter numbers {sorted(set(system.coxeter_numbers))}"
        )
    n = system.total_rank
    spec: dict[int, int] = {}
    for comp in system.components:
        for lam, mult in _component_rows(comp):
            spec[lam] = spec.get(lam, 0) + mult
    ranks = [c.rank for c in system.components]
    cross = (n * n - sum(r * r for r in ranks)) // 2
    if cross:
        spec[0] = spec.get(0, 0) + cross
    if len(system.components) > 1:
        h = system.coxeter_numbers[0]
        spec[4 * h] = spec.get(4 * h, 0) + len(system.components) - 1
    entries = tuple((float(lam), mult) for lam, mult in sorted(spec.items()))
    out = QSpectrum(space_dim=n * (n + 1) // 2 - 1, entries=entries)
    assert out.multiplicity_total == out.space_dim
    return out


def quartic_gram(system: RootSystem | IrreducibleRootSystem) -> np.ndarray:
    """Gram matrix of the polarized quartic form on ``traceless_basis``."""
    rows = system.frame_roots
    n = rows.shape[1]
    basis = traceless_basis(n)
    d = basis.shape[0]
    squares = rows**2
    values = np.empty((rows.shape[0], d))
    col = 0
    s = math.sqrt(2.0)
    for i in range(n):
        for j in range(i + 1, n):
            values[:, col] = s * rows[:, i] * rows[:, j]
            col += 1
    for k in range(n * (n - 1) // 2, d):
        values[:, col] = squares @ np.diag(basis[k])
        col += 1
    return values.T @ values


def numeric_spectrum(
    system: RootSystem | IrreducibleRootSystem, tol: float = CLUSTER_TOL
) -> QSpectrum:
    """Dense eigendecomposition of Q on T0^n with eigenvalue clustering.

    Eigenvalues within ``tol`` of each other fall into one cluster reported at
    the cluster mean; values within tol of zero are snapped to zero.
    """
    if isinstance(system, IrreducibleRootSystem):
        system = direct_sum([system])
    n = system.total_rank
    if n < 2:
        raise ValueError("need rank >= 2 for a nontrivial traceless space")
    gram = quartic_gram(system)
    eigs = np.linalg.eigvalsh(gram)
    entries: list[tuple[float, int]] = []
    start = 0
    for i in range(1, len(eigs) + 1):
        if i == len(eigs) or eigs[i] - eigs[i - 1] > tol:
            cluster = eigs[start:i]
            value = float(np.mean(cluster))
            if abs(value) <= tol:
                value = 0.0
            entries.append((value, int(len(cluster))))
            start = i
    return QSpectrum(space_dim=len(eigs), entries=tuple(entries))


# ---------------------------------------------------------------------------
# invariant subspaces
# ---------------------------------------------------------------------------


def pair_matrix(x, y) -> np.ndarray:
    """M(x, y) = x y^T + y x^T."""
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    return np.outer(x, y) + np.outer(y, x)


def _lex_positive(row) -> bool:
    for v in row:
        if v != 0:
            return v > 0
    return False


def subspace_basis(system: IrreducibleRootSystem, which: str) -> list[np.ndarray]:
    """Spanning matrices (frame coordinates) of a classified eigenspace.

    * A_n, U1: M(x, y) over orthogonal root pairs (eigenvalue 4),
    * A_n, U2: P_i = sum_j M(e_i - e_j) projectors - 2I (eigenvalue 2(n+1)),
    * D_n, U1: off-diagonal E_ij + E_ji (eigenvalue 8),
    * D_n, U2: traceless diagonal (eigenvalue 4(n-2)),
    * D4 only: D4_PLUS / D4_MINUS, the two 3-dimensional halves of U1(D4).

    Spanning sets are deduplicated up to sign but not reduced to bases.
    """
    kind, n = system.kind, system.rank
    if which in (D4_PLUS, D4_MINUS):
        if (kind, n) != ("D", 4):
            raise SubspaceUndefined("D4_PLUS/D4_MINUS exist only for D4")
        flip = -1.0 if which == D4_MINUS else 1.0
        out = []
        for a, b, c in np.eye(3):
            m = np.array(
                [
                    [0, a, b, flip * c],
                    [a, 0, c, flip * b],
                    [b, c, 0, flip * a],
                    [flip * c, flip * b, flip * a, 0],
                ],
                dtype=float,
            )
            out.append(m)
        return out
    if which not in (U1, U2):
        raise SubspaceUndefined(f"unknown subspace {which!r}")
    if kind == "A":
        if n < 2:
            raise SubspaceUndefined("A_n subspaces need n >= 2")
        frame_rows = system.frame_roots
        if which == U2:
            # P_i built from the n roots through vertex i of the extended frame
            dim = n + 1
            out = []
            for i in range(dim):
                acc = -2.0 * np.eye(n)
                for j in range(dim):
                    if j == i:
                        continue
                    seed = np.zeros(dim)
                    seed[i], seed[j] = 1.0, -1.0
                    r = seed @ system.frame
                    acc += np.outer(r, r)
                out.append(acc)
            return out
        doubled = system.doubled_roots
        keep = [i for i in range(len(doubled)) if _lex_positive(doubled[i])]
        out = []
        for a_pos in range(len(keep)):
            for b_pos in range(a_pos + 1, len(keep)):
                i, j = keep[a_pos], keep[b_pos]
                if int(doubled[i] @ doubled[j]) == 0:
                    out.append(pair_matrix(frame_rows[i], frame_rows[j]))
        return out
    if kind == "D":
        if which == U1:
            out = []
            for i in range(n):
                for j in range(i + 1, n):
                    m = np.zeros((n, n))
                    m[i, j] = m[j, i] = 1.0
                    out.append(m)
            return out
        out = []
        for i in range(n - 1):
            d = np.zeros(n)
            d[i], d[i + 1] = 1.0, -1.0
            out.append(np.diag(d))
        return out
    raise SubspaceUndefined("E-type traceless spaces are irreducible, no U1/U2 split")


# ---------------------------------------------------------------------------
# spherical designs
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class DesignCheck:
    strength: int
    radius_sq: float
    residual: float
    passed: bool


def design_check(points, t: int) -> DesignCheck:
    """Test whether a centrally symmetric shell is a spherical t-design.

    t = 2: max-entry residual of sum x x^T = (r^2 |X| / n) I, pass at 1e-10.
    t = 4: additionally the polarized quartic identity
    sum_x H[x] G[x] = (2 r^4 |X| / (n (n+2))) <H, G> over the traceless basis,
    measured as a relative Gram residual, pass at 1e-8.
    """
    if t not in (2, 4):
        raise ValueError("design strength t must be 2 or 4")
    pts = np.asarray(points, dtype=float)
    if pts.ndim != 2 or pts.shape[0] == 0:
        raise EmptyInput("need a nonempty 2d array of points")
    k, n = pts.shape
    norms = np.einsum("ij,ij->i", pts, pts)
    r2 = float(np.mean(norms))
    if np.max(np.abs(norms - r2)) > 1e-9 * max(1.0, r2):
        raise OffSphere("points do not share a common norm")
    moment = pts.T @ pts
    target = r2 * k / n * np.eye(n)
    resid2 = float(np.max(np.abs(moment - target)))
    if t == 2:
        return DesignCheck(2, r2, resid2, resid2 <= 1e-10)
    if n < 2:
        # no traceless directions on a line: the quartic identity is vacuous
        # and a centrally symmetric pair on S^0 is a design of every strength
        return DesignCheck(4, r2, resid2, resid2 <= 1e-10)
    basis = traceless_basis(n)
    d = basis.shape[0]
    values = np.einsum("ri,aij,rj->ra", pts, basis, pts)
    gram = values.T @ values
    scale = 2.0 * r2 * r2 * k / (n * (n + 2))
    resid4 = float(np.max(np.abs(gram - scale * np.eye(d)))) / scale
    passed = resid2 <= 1e-10 and resid4 <= 1e-8
    return DesignCheck(4, r2, max(resid4, resid2), passed)


# ---------------------------------------------------------------------------
# degree-4 harmonic decomposition
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class HarmonicParts:
    """Decomposition H[x]^2 = p4(x) + |x|^2 p2(x) + |x|^4 p0 with p4, p2 harmonic."""

    n: int
    h: np.ndarray
    h_squared: np.ndarray
    trace_sq: float
    p0: float

    def quartic(self, x) -> float:
        x = np.asarray(x, dtype=float)
        return float(x @ self.h @ x) ** 2

    def p2(self, x) -> float:
        x = np.asarray(x, dtype=float)
        n = self.n
        hx2 = float(x @ self.h_squared @ x)
        return (8.0 * hx2 - (8.0 / n) * self.trace_sq * float(x @ x)) / (8.0 + 2.0 * n)

    def p4(self, x) -> float:
        x = np.asarray(x, dtype=float)
        n = self.n
        norm2 = float(x @ x)
        hx = float(x @ self.h @ x)
        hx2 = float(x @ self.h_squared @ x)
        return (
            hx * hx
            - norm2 * (4.0 / (4.0 + n)) * hx2
            + norm2 * norm2 * (2.0 / ((4.0 + n) * (2.0 + n))) * self.trace_sq
        )

    def reconstruct(self, x) -> float:
        x = np.asarray(x, dtype=float)
        norm2 = float(x @ x)
        return self.p4(x) + norm2 * self.p2(x) + norm2 * norm2 * self.p0


def harmonic_components(h) -> HarmonicParts:
    """Split H[x]^2 into harmonic layers; requires Tr H = 0 (tolerance 1e-12)."""
    h = np.asarray(h, dtype=float)
    if h.ndim != 2 or h.shape[0] != h.shape[1]:
        raise ValueError("need a square matrix")
    n = h.shape[0]
    if abs(float(np.trace(h))) > 1e-12 * max(1.0, float(np.abs(h).max())):
        raise NonTraceless("harmonic decomposition defined for traceless H")
    h2 = h @ h
    tr2 = float(np.trace(h2))
    p0 = 2.0 * tr2 / ((2.0 + n) * n)
    return HarmonicParts(n=n, h=h, h_squared=h2, trace_sq=tr2, p0=p0)


# ---------------------------------------------------------------------------
# shell quartic sums from modular data
# ---------------------------------------------------------------------------


def shell_quartic_sum(lattice, h, m: int) -> float:
    """sum over the norm-2m shell of H[x]^2, from the lattice's modular data.

    The degree-4 harmonic part of the theta series is c times the normalized
    cusp form, with c pinned by the root shell:
    c = Q[H] - (8 / ((2+n) n)) |L(2)| Tr H^2.  The shell sum is then
    c b_m + 4 m^2 (2 / ((2+n) n)) a_m Tr H^2.  Dimension 8 has no cusp form.
    """
    n = lattice.dimension
    if lattice.cusp is None:
        raise UnsupportedDimension("no cusp form in dimension 8")
    if m < 1:
        raise ValueError("shell index m >= 1")
    h = _as_matrix(h, n)
    tr2 = float(np.trace(h @ h))
    q = quartic_form(lattice.root_system, h) if lattice.root_count else 0.0
    c = q - 8.0 / ((2.0 + n) * n) * lattice.root_count * tr2
    a_m = float(lattice.theta.coefficient(m))
    b_m = float(lattice.cusp.coefficient(m))
    return c * b_m + 4.0 * m * m * (2.0 / ((2.0 + n) * n)) * a_m * tr2

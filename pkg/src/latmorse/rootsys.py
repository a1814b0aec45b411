"""Irreducible ADE root systems with exact coordinates and canonical frames.

Roots are stored with doubled coordinates as integers (every ADE root has
half-integer entries), so membership and moment identities are checked with
exact integer arithmetic.  Standard models:

* A_n: all e_i - e_j inside the zero-sum hyperplane of R^(n+1),
* D_n: all +-e_i +- e_j in R^n,
* E8:  D8 roots plus half-integer vectors with an even number of minus signs,
* E7, E6: the E8 roots orthogonal to e7 - e8, resp. to e7 - e8 and e6 - e7.

Every system carries a deterministic orthonormal ``frame`` of its span so all
rank-n linear algebra happens in R^n regardless of the ambient model.
"""

from __future__ import annotations

import itertools
import re
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property, lru_cache

import numpy as np


class InvalidRank(ValueError):
    """Rank outside the family's defined range."""


class DimensionMismatch(ValueError):
    pass


_WEYL = {
    "E6": 51840,
    "E7": 2903040,
    "E8": 696729600,
}


@dataclass(frozen=True)
class RootSystemProperties:
    """Closed-form invariants of an irreducible system.

    ``orthogonal_count`` is the number of roots orthogonal to a fixed root,
    ``unit_pair_count`` the number at inner product exactly +1.  Together with
    the two roots at +-2 these exhaust the shell:
    count = 2 + orthogonal_count + 2 * unit_pair_count.
    """

    count: int
    coxeter_number: int
    orthogonal_count: int
    unit_pair_count: int
    weyl_order: int


def _sorted_rows(rows: list[tuple[int, ...]]) -> np.ndarray:
    arr = np.array(sorted(rows), dtype=np.int64)
    arr.setflags(write=False)
    return arr


@lru_cache(maxsize=None)
def _doubled_roots(kind: str, rank: int) -> np.ndarray:
    """All roots of the system, coordinates doubled, lexicographically sorted."""
    if kind == "A":
        dim = rank + 1
        rows = []
        for i, j in itertools.permutations(range(dim), 2):
            v = [0] * dim
            v[i], v[j] = 2, -2
            rows.append(tuple(v))
        return _sorted_rows(rows)
    if kind == "D":
        rows = []
        for i, j in itertools.combinations(range(rank), 2):
            for si, sj in itertools.product((2, -2), repeat=2):
                v = [0] * rank
                v[i], v[j] = si, sj
                rows.append(tuple(v))
        return _sorted_rows(rows)
    if kind == "E" and rank == 8:
        rows = [tuple(v) for v in _doubled_roots("D", 8).tolist()]
        for signs in itertools.product((1, -1), repeat=8):
            if signs.count(-1) % 2 == 0:
                rows.append(signs)
        return _sorted_rows(rows)
    if kind == "E" and rank == 7:
        e8 = _doubled_roots("E", 8)
        return _sorted_rows([tuple(r) for r in e8.tolist() if r[6] == r[7]])
    if kind == "E" and rank == 6:
        e8 = _doubled_roots("E", 8)
        return _sorted_rows(
            [tuple(r) for r in e8.tolist() if r[6] == r[7] and r[5] == r[6]]
        )
    raise InvalidRank(f"no irreducible system {kind}{rank}")


def _gram_schmidt(columns: np.ndarray) -> np.ndarray:
    """Orthonormalize the columns (classical two-pass, deterministic)."""
    q = columns.astype(float).copy()
    for i in range(q.shape[1]):
        for _ in range(2):
            for j in range(i):
                q[:, i] -= (q[:, j] @ q[:, i]) * q[:, j]
        norm = float(np.linalg.norm(q[:, i]))
        assert norm > 1e-9, "dependent frame seed"
        q[:, i] /= norm
    return q


@dataclass(frozen=True, eq=False)
class IrreducibleRootSystem:
    kind: str
    rank: int

    @property
    def name(self) -> str:
        return f"{self.kind}{self.rank}"

    @property
    def ambient_dim(self) -> int:
        if self.kind == "A":
            return self.rank + 1
        if self.kind == "D":
            return self.rank
        return 8

    @cached_property
    def doubled_roots(self) -> np.ndarray:
        """Integer matrix of 2x root coordinates, shape (count, ambient_dim)."""
        return _doubled_roots(self.kind, self.rank)

    @property
    def count(self) -> int:
        return int(self.doubled_roots.shape[0])

    @cached_property
    def roots(self) -> list[tuple[Fraction, ...]]:
        half = Fraction(1, 2)
        return [tuple(half * int(c) for c in row) for row in self.doubled_roots]

    @cached_property
    def frame(self) -> np.ndarray:
        """Orthonormal basis of the span, ambient_dim x rank, deterministic.

        A_n uses Gram-Schmidt on the chain e_i - e_(i+1); D and E8 are already
        full dimensional; E6/E7 orthonormalize the first independent roots in
        sorted order.
        """
        if self.kind == "A":
            n, dim = self.rank, self.rank + 1
            seeds = np.zeros((dim, n))
            for i in range(n):
                seeds[i, i], seeds[i + 1, i] = 1.0, -1.0
            return _gram_schmidt(seeds)
        if self.ambient_dim == self.rank:
            return np.eye(self.rank)
        seeds = []
        rank_now = 0
        candidates = self.doubled_roots.astype(float) / 2.0
        basis = np.zeros((self.ambient_dim, self.rank))
        for row in candidates:
            trial = basis.copy()
            trial[:, rank_now] = row
            if np.linalg.matrix_rank(trial[:, : rank_now + 1], tol=1e-8) == rank_now + 1:
                basis[:, rank_now] = row
                rank_now += 1
                if rank_now == self.rank:
                    break
        assert rank_now == self.rank
        return _gram_schmidt(basis)

    @cached_property
    def frame_roots(self) -> np.ndarray:
        """All roots in frame coordinates, shape (count, rank)."""
        return (self.doubled_roots.astype(float) / 2.0) @ self.frame

    def __repr__(self) -> str:
        return f"IrreducibleRootSystem({self.name}, {self.count} roots)"


@lru_cache(maxsize=None)
def make_irreducible(kind: str, rank: int) -> IrreducibleRootSystem:
    kind = kind.upper()
    if kind == "A" and rank >= 1:
        pass
    elif kind == "D" and rank >= 4:
        pass
    elif kind == "E" and rank in (6, 7, 8):
        pass
    else:
        raise InvalidRank(f"no irreducible system {kind}{rank}")
    system = IrreducibleRootSystem(kind, rank)
    system.doubled_roots  # force validation of the construction
    return system


def properties(system: IrreducibleRootSystem) -> RootSystemProperties:
    """Closed-form shell invariants; the count is cross-checked on the roots."""
    k, n = system.kind, system.rank
    if k == "A":
        props = RootSystemProperties(
            count=n * (n + 1),
            coxeter_number=n + 1,
            orthogonal_count=(n - 1) * (n - 2),
            unit_pair_count=2 * (n - 1),
            weyl_order=_factorial(n + 1),
        )
    elif k == "D":
        props = RootSystemProperties(
            count=2 * n * (n - 1),
            coxeter_number=2 * (n - 1),
            orthogonal_count=2 * (n * n - 5 * n + 7),
            unit_pair_count=4 * (n - 2),
            weyl_order=2 ** (n - 1) * _factorial(n),
        )
    else:
        counts = {6: (72, 12, 30, 20), 7: (126, 18, 60, 32), 8: (240, 30, 126, 56)}
        c, h, n0, n1 = counts[n]
        props = RootSystemProperties(c, h, n0, n1, _WEYL[f"E{n}"])
    assert props.count == system.count
    assert props.count == props.coxeter_number * n
    return props


def _factorial(n: int) -> int:
    out = 1
    for i in range(2, n + 1):
        out *= i
    return out


# ---------------------------------------------------------------------------
# direct sums
# ---------------------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class RootSystem:
    """Orthogonal direct sum of irreducible systems (possibly empty)."""

    components: tuple[IrreducibleRootSystem, ...]

    @property
    def total_rank(self) -> int:
        return sum(c.rank for c in self.components)

    @property
    def count(self) -> int:
        return sum(c.count for c in self.components)

    @cached_property
    def coxeter_numbers(self) -> tuple[int, ...]:
        return tuple(properties(c).coxeter_number for c in self.components)

    @property
    def equal_coxeter(self) -> bool:
        return len(set(self.coxeter_numbers)) <= 1

    @cached_property
    def name(self) -> str:
        if not self.components:
            return "0"
        parts = []
        for key, group in itertools.groupby(self.components, key=lambda c: c.name):
            reps = len(list(group))
            parts.append(f"{key}^{reps}" if reps > 1 else key)
        return "+".join(parts)

    @cached_property
    def rank_offsets(self) -> tuple[int, ...]:
        offsets, pos = [], 0
        for c in self.components:
            offsets.append(pos)
            pos += c.rank
        return tuple(offsets)

    @cached_property
    def frame_roots(self) -> np.ndarray:
        """All roots in the block orthonormal frame, shape (count, total_rank)."""
        n = self.total_rank
        rows = np.zeros((self.count, n))
        at = 0
        for comp, off in zip(self.components, self.rank_offsets):
            rows[at : at + comp.count, off : off + comp.rank] = comp.frame_roots
            at += comp.count
        rows.setflags(write=False)
        return rows

    def blocks(self):
        """Yield (component, rank offset) pairs."""
        return zip(self.components, self.rank_offsets)

    def __repr__(self) -> str:
        return f"RootSystem({self.name}, rank {self.total_rank})"


def direct_sum(components) -> RootSystem:
    comps = tuple(components)
    if not comps:
        raise ValueError("direct_sum needs at least one component")
    if not all(isinstance(c, IrreducibleRootSystem) for c in comps):
        raise TypeError("components must be irreducible root systems")
    return RootSystem(comps)


def empty_root_system() -> RootSystem:
    return RootSystem(())


_TOKEN = re.compile(r"^([ADE])(\d+)(?:\^(\d+))?$", re.IGNORECASE)


def parse_root_system(text: str) -> RootSystem:
    """Parse strings like ``A1^24``, ``A5^4+D4``, ``E8^3`` (case-insensitive)."""
    parts = [p.strip() for p in text.split("+")]
    if not parts or any(not p for p in parts):
        raise ValueError(f"malformed root-system string: {text!r}")
    comps: list[IrreducibleRootSystem] = []
    for part in parts:
        match = _TOKEN.match(part)
        if match is None:
            raise ValueError(f"malformed summand {part!r} in {text!r}")
        kind, rank, reps = match.group(1).upper(), int(match.group(2)), match.group(3)
        reps = int(reps) if reps else 1
        if reps < 1:
            raise ValueError(f"repeat count must be positive in {part!r}")
        comps.extend([make_irreducible(kind, rank)] * reps)
    return direct_sum(comps)


# ---------------------------------------------------------------------------
# second moments
# ---------------------------------------------------------------------------


def second_moment(system: RootSystem | IrreducibleRootSystem) -> np.ndarray:
    """Sum of x x^T over all roots, in frame coordinates."""
    rows = system.frame_roots
    return rows.T @ rows


def second_moment_blocks(system: RootSystem) -> tuple[int, ...]:
    """Exact per-block scalar of the second moment: 2h_i on the i-th block.

    Each irreducible shell satisfies sum x x^T = 2h P_span exactly (the Weyl
    group acts irreducibly on the span); verify_moment_identity checks this
    with integer arithmetic.
    """
    return tuple(2 * h for h in system.coxeter_numbers)


def verify_moment_identity(system: IrreducibleRootSystem) -> bool:
    """Exact check that sum x x^T acts as 2h on every root (integer arithmetic)."""
    r2 = system.doubled_roots
    s2 = r2.T @ r2  # equals 4 * sum x x^T
    h = properties(system).coxeter_number
    return bool(np.array_equal(s2 @ r2.T, 8 * h * r2.T))

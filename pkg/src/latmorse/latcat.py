"""Catalog of even unimodular lattices in dimensions 8 to 32.

Each entry carries the data the energy computations need: the root system
(norm-2 shell), its size, the theta series and the normalized cusp form of the
relevant weight.  Explicit Gram matrices and basis realizations are stored
only where direct shell enumeration is wanted (E8 and D16+); everything else
is determined by modular forms.

Dimension 24 holds the Leech lattice plus the 23 Niemeier lattices named by
their root systems.  Dimension 32 holds two witnesses: a rootless lattice and
the lattice with root system A1^8 A3^8.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from . import modforms
from .rootsys import RootSystem, empty_root_system, parse_root_system


class UnknownLattice(KeyError):
    pass


@dataclass(frozen=True, eq=False)
class LatticeEntry:
    name: str
    dimension: int
    root_system: RootSystem
    root_count: int
    coxeter_number: int | None
    theta: modforms.QSeries
    cusp: modforms.QSeries | None
    gram: np.ndarray | None = None
    basis: np.ndarray | None = None

    def series_floats(self, length: int) -> tuple[np.ndarray, np.ndarray]:
        """Float theta and cusp coefficient arrays of at least this length.

        The cusp array is identically zero in dimension 8, where the relevant
        cusp space is trivial.
        """
        return _series_pair(self.dimension, self.root_count, length)

    def coeff_bound(self) -> modforms.CoeffBound:
        return modforms.theta_coeff_bound(self.dimension, self.root_count)

    def __repr__(self) -> str:
        return f"LatticeEntry({self.name}, dim {self.dimension}, {self.root_count} roots)"


@lru_cache(maxsize=None)
def _series_pair(n: int, root_count: int, length: int) -> tuple[np.ndarray, np.ndarray]:
    theta = modforms.theta_even_unimodular(n, root_count, length)
    a = np.array(theta.floats())
    if n == 8:
        b = np.zeros(length)
    else:
        b = np.array(modforms.cusp_normalized(n, length).floats())
    a.setflags(write=False)
    b.setflags(write=False)
    return a, b


def _unimodular_basis(n: int) -> np.ndarray:
    """Rows 2 e_1, e_k - e_(k-1), (1/2, ..., 1/2): a det-1 basis of E8 / D16+.

    Lower triangular with diagonal (2, 1, ..., 1, 1/2), so the determinant is
    exactly 1; every row lies in the lattice, and equal covolumes force the
    generated lattice to be the whole thing.
    """
    rows = np.zeros((n, n))
    rows[0, 0] = 2.0
    for k in range(1, n - 1):
        rows[k, k - 1], rows[k, k] = -1.0, 1.0
    rows[n - 1, :] = 0.5
    return rows


def _entry(
    name: str,
    dimension: int,
    root_string: str | None,
    with_gram: bool = False,
) -> LatticeEntry:
    if root_string is None:
        system = empty_root_system()
    else:
        system = parse_root_system(root_string)
    count = system.count
    theta = modforms.theta_even_unimodular(dimension, count)
    cusp = None
    if dimension != 8:
        cusp = modforms.cusp_normalized(dimension)
    hs = set(system.coxeter_numbers)
    coxeter = hs.pop() if len(hs) == 1 else None
    gram = basis = None
    if with_gram:
        basis = _unimodular_basis(dimension)
        gram_f = basis @ basis.T
        gram = np.rint(gram_f).astype(np.int64)
        assert np.max(np.abs(gram - gram_f)) == 0.0
        gram.setflags(write=False)
        basis.setflags(write=False)
    return LatticeEntry(
        name=name,
        dimension=dimension,
        root_system=system,
        root_count=count,
        coxeter_number=coxeter,
        theta=theta,
        cusp=cusp,
        gram=gram,
        basis=basis,
    )


NIEMEIER_ROOT_SYSTEMS = (
    "A1^24",
    "A2^12",
    "A3^8",
    "A4^6",
    "A5^4+D4",
    "D4^6",
    "A6^4",
    "A7^2+D5^2",
    "A8^3",
    "A9^2+D6",
    "D6^4",
    "E6^4",
    "A11+D7+E6",
    "A12^2",
    "D8^3",
    "A15+D9",
    "A17+E7",
    "D10+E7^2",
    "D12^2",
    "A24",
    "D16+E8",
    "E8^3",
    "D24",
)


@lru_cache(maxsize=1)
def _catalog() -> tuple[LatticeEntry, ...]:
    entries = [
        _entry("E8", 8, "E8", with_gram=True),
        _entry("D16+", 16, "D16", with_gram=True),
        _entry("E8^2", 16, "E8^2"),
        _entry("Leech", 24, None),
    ]
    for name in NIEMEIER_ROOT_SYSTEMS:
        entries.append(_entry(name, 24, name))
    entries.append(_entry("Rootless32", 32, None))
    entries.append(_entry("A1^8+A3^8", 32, "A1^8+A3^8"))
    entries.sort(key=lambda e: (e.dimension, e.root_count, e.name))
    return tuple(entries)


def list_catalog() -> list[LatticeEntry]:
    """All entries, ordered by (dimension, root count, name)."""
    return list(_catalog())


def get(name: str) -> LatticeEntry:
    """Case-insensitive lookup by catalog name."""
    wanted = name.strip().upper()
    for entry in _catalog():
        if entry.name.upper() == wanted:
            return entry
    raise UnknownLattice(
        f"no catalog entry {name!r}; see list_catalog() for the names"
    )


def make_entry(
    root_string: str, dimension: int | None = None, root_count: int | None = None
) -> LatticeEntry:
    """Entry for a root system outside the catalog (dimension may exceed rank).

    Used to analyze hypothetical even unimodular lattices given their root
    shell.  The theta series is pinned by (dimension, root count); no Gram
    matrix is attached.
    """
    system = parse_root_system(root_string)
    n = dimension if dimension is not None else system.total_rank
    if n not in (8, 16, 24, 32):
        raise ValueError(f"even unimodular dimension must be 8/16/24/32, got {n}")
    if system.total_rank > n:
        raise ValueError("root system rank exceeds the lattice dimension")
    count = root_count if root_count is not None else system.count
    theta = modforms.theta_even_unimodular(n, count)
    cusp = modforms.cusp_normalized(n) if n != 8 else None
    hs = set(system.coxeter_numbers)
    return LatticeEntry(
        name=system.name if n == system.total_rank else f"{system.name} (dim {n})",
        dimension=n,
        root_system=system,
        root_count=count,
        coxeter_number=hs.pop() if len(hs) == 1 else None,
        theta=theta,
        cusp=cusp,
    )


def entry_summary(entry: LatticeEntry, theta_terms: int = 16) -> dict:
    """JSON-ready description: identity, root data, leading theta coefficients."""
    coeffs = [int(c) for c in entry.theta.coeffs[:theta_terms]]
    return {
        "name": entry.name,
        "dimension": entry.dimension,
        "root_system": entry.root_system.name,
        "root_count": entry.root_count,
        "coxeter_number": entry.coxeter_number,
        "theta_coefficients": coeffs,
    }

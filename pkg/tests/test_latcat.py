"""Catalog entries: identities, Gram data, theta rows, construction guards."""

from __future__ import annotations

import json

import numpy as np
import pytest

from latmorse import latcat

NIEMEIER_COUNT = 23  # rooted 24-dimensional entries

ROOTLESS32_ROW = [
    1,
    0,
    146880,
    64757760,
    4844836800,
    137695887360,
    2121555283200,
    21421110804480,
    158757684004800,
]


def test_catalog_size_and_order():
    entries = latcat.list_catalog()
    assert len(entries) == 29
    assert [e.name for e in entries[:4]] == ["E8", "D16+", "E8^2", "Leech"]
    keys = [(e.dimension, e.root_count, e.name) for e in entries]
    assert keys == sorted(keys)
    dims = [e.dimension for e in entries]
    assert dims.count(24) == NIEMEIER_COUNT + 1  # Leech plus the rooted ones


def test_lookup_case_insensitive():
    assert latcat.get("leech").name == "Leech"
    assert latcat.get("d16+").name == "D16+"
    assert latcat.get(" E8 ").name == "E8"
    with pytest.raises(latcat.UnknownLattice):
        latcat.get("Z24")


def test_gram_matrices():
    for name in ("E8", "D16+"):
        entry = latcat.get(name)
        g = entry.gram
        assert g is not None
        assert np.array_equal(g, g.T)
        assert np.all(np.diag(g) % 2 == 0)
        assert round(float(np.linalg.det(g.astype(float)))) == 1
        assert np.max(np.abs(entry.basis @ entry.basis.T - g)) < 1e-9
    assert latcat.get("Leech").gram is None
    assert latcat.get("E8^2").gram is None


def test_root_data_consistency():
    for entry in latcat.list_catalog():
        if entry.root_count == 0:
            assert entry.coxeter_number is None
            assert entry.root_system.count == 0
            continue
        assert entry.root_system.count == entry.root_count
        if entry.dimension == 24:
            # rooted Niemeier lattices: |R| = 24 h with one common h
            assert entry.coxeter_number is not None
            assert entry.root_count == 24 * entry.coxeter_number
    assert latcat.get("A1^8+A3^8").coxeter_number is None  # mixed h = 2, 4


def test_theta_coefficients_nonnegative_integers():
    for entry in latcat.list_catalog():
        assert entry.theta.is_integral()
        assert all(c >= 0 for c in entry.theta.coeffs)
        assert entry.theta.coeffs[0] == 1
        assert entry.theta.coefficient(1) == entry.root_count


def test_theta_known_rows():
    leech = latcat.get("Leech")
    assert int(leech.theta.coefficient(2)) == 196560
    assert int(leech.theta.coefficient(3)) == 16773120
    rootless = latcat.get("Rootless32")
    assert [int(c) for c in rootless.theta.coeffs[:9]] == ROOTLESS32_ROW
    defective = latcat.get("A1^8+A3^8")
    assert defective.root_count == 112
    assert int(defective.theta.coefficient(2)) == 171072


def test_series_floats():
    entry = latcat.get("E8")
    a, b = entry.series_floats(10)
    assert len(a) >= 10 and len(b) >= 10
    assert a[1] == 240.0
    assert np.all(b == 0.0)  # no cusp form in dimension 8, by convention zeros

    leech_a, leech_b = latcat.get("Leech").series_floats(4)
    assert leech_a[2] == 196560.0
    assert leech_b[1] == 1.0

    again = entry.series_floats(10)
    assert again[0] is a  # cached


def test_coeff_bound_structure():
    # dimensions 8 and 16 are pure Eisenstein; 24 and 32 carry a cusp part
    # (for n = 24 the Eisenstein coefficient of q is fractional, so that part
    # never cancels exactly)
    assert len(latcat.get("E8").coeff_bound().terms) == 1
    assert len(latcat.get("D16+").coeff_bound().terms) == 1
    assert len(latcat.get("E8^3").coeff_bound().terms) == 2
    assert len(latcat.get("A1^24").coeff_bound().terms) == 2
    assert len(latcat.get("Rootless32").coeff_bound().terms) == 2


def test_make_entry():
    entry = latcat.make_entry("D16", 16)
    assert entry.dimension == 16
    assert entry.root_count == 480
    assert entry.theta.coeffs == latcat.get("D16+").theta.coeffs

    full = latcat.make_entry("A1^8+A3^8")
    assert full.dimension == 32
    assert full.theta.coefficient(2) == latcat.get("A1^8+A3^8").theta.coefficient(2)

    padded = latcat.make_entry("A1", 32, 2)
    assert padded.name == "A1 (dim 32)"
    assert padded.root_count == 2

    with pytest.raises(ValueError):
        latcat.make_entry("A5", 12)
    with pytest.raises(ValueError):
        latcat.make_entry("A24", 16)


def test_entry_summary_json_ready():
    payload = latcat.entry_summary(latcat.get("A2^12"))
    assert payload["name"] == "A2^12"
    assert payload["dimension"] == 24
    assert payload["root_count"] == 72
    assert payload["coxeter_number"] == 3
    assert len(payload["theta_coefficients"]) == 16
    json.dumps(payload)  # must not raise

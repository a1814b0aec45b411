"""Criticality decisions, certified spectra, certificates, classification."""

from __future__ import annotations

import math
from fractions import Fraction

import numpy as np
import pytest

from latmorse import latcat, modforms, morse, symspace

ALPHA = math.pi

# five reference eigenvalues in dimension 16 at alpha = pi, truncated to 5 places
DIM16_ANCHORS = {
    ("D16+", 8): -0.06196,
    ("D16+", 56): 0.36093,
    ("E8^2", 0): -0.13245,
    ("E8^2", 24): 0.07899,
    ("E8^2", 120): 0.92480,
}


def _line(report: morse.SpectrumReport, lam: int) -> morse.SpectralLine:
    for line in report.lines:
        if line.q_eigenvalue == lam:
            return line
    raise AssertionError(f"no spectral line at lambda = {lam}")


def test_truncate_decimal():
    assert morse.truncate_decimal(0.360932185, 5) == 0.36093
    assert morse.truncate_decimal(-0.061969273, 5) == -0.06196  # toward zero
    assert morse.truncate_decimal(1.9999, 2) == 1.99
    assert morse.truncate_decimal(-0.00271, 4) == -0.0027


def test_criticality_catalog():
    for entry in latcat.list_catalog():
        crit = morse.criticality(entry)
        if entry.name == "A1^8+A3^8":
            assert not crit.is_critical
            assert crit.kind == "moment_defect"
        else:
            assert crit.is_critical
            assert crit.witness is None
            assert all(d == 0 for d in crit.defects)


def test_criticality_defect_structure():
    crit = morse.criticality(latcat.get("A1^8+A3^8"))
    assert crit.target == Fraction(7)
    assert crit.blocks == ((1, Fraction(4)),) * 8 + ((3, Fraction(8)),) * 8
    assert crit.defects == (Fraction(-3),) * 8 + (Fraction(1),) * 8
    witness = crit.witness
    assert witness is not None
    assert not witness.flags.writeable
    assert abs(float(np.trace(witness))) == 0.0
    assert np.array_equal(np.diag(witness), np.array([-3.0] * 8 + [1.0] * 24))


def test_criticality_rootless_blocks():
    crit = morse.criticality(latcat.get("Leech"))
    assert crit.blocks == ((24, Fraction(0)),)
    assert crit.target == 0
    assert crit.is_critical


def test_dim16_anchor_values():
    for name in ("D16+", "E8^2"):
        report = morse.hessian_spectrum(latcat.get(name), ALPHA)
        for line in report.lines:
            expected = DIM16_ANCHORS[(name, line.q_eigenvalue)]
            assert morse.truncate_decimal(line.value, 5) == expected
            assert line.error_radius < 1e-9
    d16 = morse.hessian_spectrum(latcat.get("D16+"), ALPHA)
    assert d16.classification == morse.CLASS_SADDLE
    assert d16.morse_index == 120
    two_e8 = morse.hessian_spectrum(latcat.get("E8^2"), ALPHA)
    assert two_e8.classification == morse.CLASS_SADDLE
    assert two_e8.morse_index == 64


def test_leech_local_min():
    report = morse.hessian_spectrum(latcat.get("Leech"), ALPHA)
    assert report.classification == morse.CLASS_LOCAL_MIN
    assert report.morse_index == 0
    (line,) = report.lines
    assert line.q_eigenvalue == 0
    assert line.multiplicity == 299
    assert line.value == pytest.approx(0.015780918464607406, rel=1e-12)


def test_rootless32_local_max():
    report = morse.hessian_spectrum(latcat.get("Rootless32"), ALPHA)
    assert report.classification == morse.CLASS_LOCAL_MAX
    (line,) = report.lines
    assert line.multiplicity == 527
    assert line.value == pytest.approx(-0.00027893406077867056, rel=1e-9)
    assert line.value + line.error_radius < 0


def test_niemeier_sample_rows():
    report = morse.hessian_spectrum(latcat.get("A1^24"), ALPHA)
    assert [(l.q_eigenvalue, l.multiplicity) for l in report.lines] == [(0, 276), (8, 23)]
    assert morse.truncate_decimal(_line(report, 0).value, 4) == 0.0018
    assert morse.truncate_decimal(_line(report, 8).value, 4) == 0.1044
    assert report.classification == morse.CLASS_LOCAL_MIN

    report = morse.hessian_spectrum(latcat.get("D24"), ALPHA)
    assert [(l.q_eigenvalue, l.multiplicity) for l in report.lines] == [(8, 276), (88, 23)]
    assert morse.truncate_decimal(_line(report, 8).value, 4) == -0.2014
    assert morse.truncate_decimal(_line(report, 88).value, 4) == 0.8246
    assert report.classification == morse.CLASS_SADDLE
    assert report.morse_index == 276


def test_multiplicity_totals():
    for entry in latcat.list_catalog():
        if entry.name == "A1^8+A3^8":
            continue
        report = morse.hessian_spectrum(entry, ALPHA)
        n = entry.dimension
        assert sum(line.multiplicity for line in report.lines) == n * (n + 1) // 2 - 1


def test_classify_synthetic():
    plus = morse.SpectralLine(0, 10, 0.5, 0.1)
    minus = morse.SpectralLine(4, 3, -0.2, 0.1)
    wide = morse.SpectralLine(8, 2, 0.05, 0.1)

    assert morse.classify([plus]) == (morse.CLASS_LOCAL_MIN, 0, pytest.approx(0.4))
    assert morse.classify([minus]) == (morse.CLASS_LOCAL_MAX, 3, pytest.approx(0.1))
    label, index, _ = morse.classify([plus, minus])
    assert (label, index) == (morse.CLASS_SADDLE, 3)
    label, index, margin = morse.classify([plus, wide])
    assert label == morse.CLASS_INDETERMINATE
    assert index is None
    assert margin < 0
    with pytest.raises(symspace.EmptyInput):
        morse.classify([])


def test_spectrum_adaptive_terms():
    # shallow alpha: series magnitudes reach 1e7, so roundoff caps the radius
    # well above 1e-10 and the term count must grow past the starting 25
    report = morse.hessian_spectrum(latcat.get("E8"), 0.1, tol=1e-6)
    assert report.terms > 25
    assert all(line.error_radius <= 1e-6 for line in report.lines)
    fast = morse.hessian_spectrum(latcat.get("E8"), ALPHA)
    assert fast.terms == 16


def test_tolerance_unreachable():
    with pytest.raises(morse.ToleranceUnreachable):
        morse.hessian_spectrum(latcat.get("E8"), 0.001, max_terms=64)
    with pytest.raises(morse.ToleranceUnreachable):
        morse.hessian_spectrum(latcat.get("E8"), ALPHA, tol=0.0, max_terms=32)
    with pytest.raises(ValueError):
        morse.hessian_spectrum(latcat.get("E8"), -1.0)


def test_not_critical_raises():
    entry = latcat.get("A1^8+A3^8")
    with pytest.raises(morse.NotCritical):
        morse.hessian_spectrum(entry, ALPHA)
    with pytest.raises(morse.NotCritical):
        morse.large_alpha_class(entry)


def test_certificate_default_witness():
    cert = morse.noncritical_certificate(latcat.get("A1^8+A3^8"), 14.0)
    # exact root pairing: 8 * (-3) * 4 + 24 * 1 * 8 = 96
    assert cert.constants["root_pairing"] == 96.0
    assert cert.root_term == pytest.approx(96.0 * 14.0 * math.exp(-28.0), rel=1e-12)
    assert cert.remainder < cert.root_term
    assert cert.margin > 0
    assert cert.exact_terms == 8
    assert set(cert.constants) == {
        "root_pairing",
        "max_abs_eigenvalue",
        "partial_sum",
        "tail",
    }


def test_certificate_user_direction():
    direction = np.diag([24.0] * 8 + [-8.0] * 24)
    cert = morse.noncritical_certificate(latcat.get("A1^8+A3^8"), 14.0, direction)
    assert cert.root_term == pytest.approx(768.0 * 14.0 * math.exp(-28.0), rel=1e-6)
    assert cert.remainder < cert.root_term


def test_certificate_failure_modes():
    defective = latcat.get("A1^8+A3^8")
    with pytest.raises(morse.CertificateFails):
        morse.noncritical_certificate(latcat.get("Leech"), 14.0)  # no roots at all
    with pytest.raises(morse.CertificateFails):
        morse.noncritical_certificate(latcat.get("E8"), 14.0)  # critical, no witness
    with pytest.raises(morse.CertificateFails):
        morse.noncritical_certificate(defective, 0.1)  # remainder dominates
    off_diagonal = np.zeros((32, 32))
    off_diagonal[0, 1] = off_diagonal[1, 0] = 1.0
    with pytest.raises(morse.CertificateFails):
        morse.noncritical_certificate(defective, 14.0, off_diagonal)
    with pytest.raises(ValueError):
        morse.noncritical_certificate(defective, -2.0)
    with pytest.raises(ValueError):
        morse.noncritical_certificate(defective, 14.0, np.eye(32))
    with pytest.raises(ValueError):
        morse.noncritical_certificate(defective, 14.0, np.eye(8))


def test_large_alpha_classes():
    minima = set()
    for entry in latcat.list_catalog():
        if entry.root_count == 0 or entry.name == "A1^8+A3^8":
            continue
        label = morse.large_alpha_class(entry)
        if label == morse.CLASS_LOCAL_MIN:
            minima.add(entry.name)
        else:
            assert label == morse.CLASS_SADDLE
    assert minima == {"E8", "D16+", "A24", "D24"}
    with pytest.raises(morse.Inapplicable):
        morse.large_alpha_class(latcat.get("Leech"))


def test_isotropic_series():
    partial, tail = morse.isotropic_hessian_series(latcat.get("Rootless32"), ALPHA, 8)
    assert partial == pytest.approx(-0.0002789345944237142, rel=1e-10)
    assert 0 < tail <= 5.4e-7
    assert partial + tail < 0  # sign certified by the partial sum alone
    with pytest.raises(morse.Inapplicable):
        morse.isotropic_hessian_series(latcat.get("E8"), ALPHA)
    with pytest.raises(modforms.MonotonicityViolated):
        morse.isotropic_hessian_series(latcat.get("Rootless32"), ALPHA, m_terms=1)


def test_alpha_sweep():
    reports = morse.alpha_sweep(latcat.get("E8^2"), [3.0, ALPHA, 3.3])
    assert [r.alpha for r in reports] == [3.0, ALPHA, 3.3]
    assert all(len(r.lines) == 3 for r in reports)


def test_spectrum_partial_consistency():
    entry = latcat.get("D16+")
    report = morse.hessian_spectrum(entry, ALPHA)
    for line in report.lines:
        partial = morse.spectrum_partial(entry, ALPHA, line.q_eigenvalue, report.terms)
        assert line.value == pytest.approx(partial, rel=1e-9)


def test_spectrum_report_json():
    report = morse.hessian_spectrum(latcat.get("D16+"), ALPHA)
    payload = report.to_json_dict()
    assert payload["lattice"] == "D16+"
    assert payload["classification"] == morse.CLASS_SADDLE
    assert payload["morse_index"] == 120
    assert [row["lambda"] for row in payload["lines"]] == [8, 56]
    assert payload["lines"][0]["sign"] == -1
    # values are rounded to 12 significant digits for stable serialization
    assert payload["lines"][1]["mu"] == float(f"{_line(report, 56).value:.12g}")


def test_deformation_factor():
    check = morse.deformation_check(
        2 * np.eye(2, dtype=np.int64), 1.0, np.diag([1.0, -1.0])
    )
    assert check.agree
    assert check.measured_ratio == pytest.approx(2.0, abs=1e-5)
    gram = np.array([[2, 1], [1, 2]], dtype=np.int64)
    check = morse.deformation_check(gram, 1.5, np.diag([1.0, -1.0]), m_max=6)
    assert check.agree


def test_classification_spread_at_pi():
    # the same alpha separates minima from saddles across the rooted catalog
    expectations = {
        "A1^24": (morse.CLASS_LOCAL_MIN, 0),
        "A2^12": (morse.CLASS_SADDLE, 264),
        "E8^3": (morse.CLASS_SADDLE, 192),
        "D24": (morse.CLASS_SADDLE, 276),
    }
    for name, (label, index) in expectations.items():
        report = morse.hessian_spectrum(latcat.get(name), ALPHA)
        assert (report.classification, report.morse_index) == (label, index)

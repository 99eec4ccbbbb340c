from fractions import Fraction
import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from scipy.linalg import sqrtm

from hyperbloch import bloch_ball as bb
from hyperbloch.fuzzy_gamma import cached_gammas
from hyperbloch.spin_algebra import SpinLabel

MODELS = [("so3", 1), ("so3", 2), ("so3", 3), ("so4", 1), ("so4", 3), ("so5", 1), ("so5", 2), ("so6", 1), ("so7", 1)]
RADII = np.arange(1, 10) / 10


def unit(rng, n):
    x = rng.normal(size=n)
    return x / np.linalg.norm(x)


def bures_angle(rho, sigma):
    q = sqrtm(rho)
    return math.acos(min(1.0, np.trace(sqrtm(q @ sigma @ q)).real))


@pytest.mark.parametrize("group,twoS", MODELS)
def test_density_and_spectrum(group, twoS, rng):
    g = cached_gammas(group, twoS)
    for r in (0.0, 0.4, 1.0):
        d = bb.density(g, r, unit(rng, g.n))
        assert np.trace(d.rho).real == pytest.approx(1.0)
        assert d.numeric_spectrum().min() > -1e-12
        assert d.spectrum_error() < 1e-12
        assert sum(p * m for _, p, m in d.closed_spectrum) == pytest.approx(1.0)


@pytest.mark.parametrize("group,twoS,h1", [("so3", 3, Fraction(3, 2)), ("so5", 2, 1), ("so4", 3, 1), ("so6", 1, Fraction(1, 2))])
def test_top_energy(group, twoS, h1):
    assert bb.top_energy(SpinLabel.of(group, twoS)) == h1


def test_boundary_empties_lowest_level(rng):
    g = cached_gammas("so5", 2)
    d = bb.density(g, 1.0, unit(rng, 5))
    w = d.numeric_spectrum()
    lowest = d.closed_spectrum[-1]
    assert lowest[1] == 0.0
    assert np.sum(w > 1e-12) == g.dim - lowest[2]


def test_radius_validation(rng):
    g = cached_gammas("so3", 1)
    with pytest.raises(ValueError):
        bb.density_matrix(g, 1.2, [0, 0, 1])
    with pytest.raises(ValueError):
        bb.density(g, 0.5, [0, 0, 2])
    with pytest.raises(ValueError):
        bb.bures_metric(g, 1.0, [0, 0, 1])
    with pytest.raises(ValueError):
        SpinLabel.of("so4", 2)


def test_entropy_qubit_example():
    # eigenvalues 3/4 and 1/4
    ref = -(0.75 * math.log(0.75) + 0.25 * math.log(0.25))
    assert bb.von_neumann_entropy(cached_gammas("so3", 1), 0.5) == pytest.approx(ref, abs=1e-14)
    assert ref == pytest.approx(0.562335, abs=1e-6)


@pytest.mark.parametrize("group,twoS", MODELS)
def test_entropy_routes_and_monotone(group, twoS, rng):
    g = cached_gammas(group, twoS)
    rs = np.linspace(0, 1, 101)
    x = unit(rng, g.n)
    closed = np.array([bb.entropy_closed(g, r) for r in rs])
    numeric = np.array([bb.entropy_numeric(g, r, x) for r in rs])
    np.testing.assert_allclose(closed, numeric, atol=1e-10)
    assert np.all(np.diff(closed) < 0)
    assert closed[0] == pytest.approx(math.log(g.dim), abs=1e-12)


@pytest.mark.parametrize("group,k", [("so3", 1), ("so4", 2), ("so5", 2), ("so6", 3), ("so7", 3)])
def test_minimal_entropy_endpoints(group, k):
    g = cached_gammas(group, 1)
    assert bb.entropy_closed(g, 0.0) == pytest.approx(k * math.log(2), abs=1e-12)
    assert bb.entropy_closed(g, 1.0) == pytest.approx((k - 1) * math.log(2), abs=1e-12)
    for r in (0.2, 0.7):
        assert bb.entropy_closed(g, r) == pytest.approx(bb.minimal_entropy(k, r), abs=1e-13)


def test_entropy_disagreement_raises(monkeypatch):
    g = cached_gammas("so3", 1)
    monkeypatch.setattr(bb, "entropy_numeric", lambda *a, **k: 0.0)
    with pytest.raises(ArithmeticError):
        bb.von_neumann_entropy(g, 0.3)


def test_trace_distance_qubit(rng):
    # the qubit trace distance is half the Euclidean distance of Bloch vectors
    assert bb.trace_distance_coefficient(SpinLabel(3, 1)) == Fraction(1, 2)
    c, spread = bb.fit_trace_distance(cached_gammas("so3", 1), rng, 20)
    assert c == pytest.approx(0.5, abs=1e-12)
    assert spread < 1e-12


@pytest.mark.parametrize("group,twoS", MODELS)
def test_trace_distance_coefficient_matches_fit(group, twoS, rng):
    g = cached_gammas(group, twoS)
    c, spread = bb.fit_trace_distance(g, rng, 20)
    assert spread < 1e-10
    assert c == pytest.approx(float(bb.trace_distance_coefficient(g)), rel=1e-10)


@pytest.mark.parametrize(
    "group,twoS,ratio",
    [("so3", 1, 2), ("so3", 2, 2), ("so5", 2, 2), ("so7", 1, 2), ("so4", 3, Fraction(1, 2)), ("so6", 1, Fraction(1, 2))],
)
def test_alternative_normalisation_ratio(group, twoS, ratio):
    label = SpinLabel.of(group, twoS)
    assert bb.trace_distance_coefficient(label) / bb.trace_distance_coefficient_alternative(label) == ratio


@pytest.mark.parametrize("group,twoS", MODELS)
def test_bures_against_generic_eigensum(group, twoS, rng):
    g = cached_gammas(group, twoS)
    N, h1 = g.dim, float(bb.top_energy(g.label))
    x = unit(rng, g.n)
    drho = g.gammas / (2 * N * h1)
    for r in (0.2, 0.7):
        ref = bb.bures_metric_hubner(bb.density_matrix(g, r, x), drho)
        np.testing.assert_allclose(bb.bures_metric(g, r, x), ref, atol=1e-12)


@pytest.mark.parametrize("group,twoS", MODELS)
def test_bures_is_isotropic(group, twoS, rng):
    g = cached_gammas(group, twoS)
    x = unit(rng, g.n)
    for r in (0.1, 0.5, 0.9):
        f, gg, res = bb.fg_extract(bb.bures_metric(g, r, x), x)
        assert res < 1e-10
        assert f > 0 and f + gg > 0


def test_bures_fg_qubit_example():
    f, gg, _ = bb.fg_extract(bb.bures_metric(cached_gammas("so3", 1), 0.6, [0, 0, 1]), [0, 0, 1])
    assert f == pytest.approx(0.25, abs=1e-14)
    assert gg == pytest.approx(0.140625, abs=1e-14)


@pytest.mark.parametrize("n,twoS", bb.REFERENCE_CELLS)
def test_reference_cells(n, twoS, rng):
    g = cached_gammas(f"so{n}", twoS)
    x = unit(rng, n)
    for r in RADII:
        f, gg, _ = bb.fg_extract(bb.bures_metric(g, r, x), x)
        ref_a, ref_f = bb.reference_fg(n, twoS, r)
        assert f + gg == pytest.approx(ref_a, abs=1e-7)
        assert f == pytest.approx(ref_f, abs=1e-7)


def test_so4_spin_three_halves_cell_uses_top_spin(rng):
    # the B^4, S=3/2 reference forms correspond to normalising by h_1 = S
    g = cached_gammas("so4", 3)
    x = unit(rng, 4)
    for r in RADII:
        f, gg, _ = bb.fg_extract(bb.bures_metric(g, r, x, h1=1.5), x)
        ref_a, ref_f = bb.reference_fg(4, 3, r)
        assert f + gg == pytest.approx(ref_a, abs=1e-12)
        assert f == pytest.approx(ref_f, abs=1e-12)


def test_reference_missing_cell():
    with pytest.raises(KeyError):
        bb.reference_fg(4, 5, 0.5)


@pytest.mark.parametrize("n", [3, 4, 5, 6, 7])
def test_minimal_bures_is_hemisphere(n, rng):
    g = cached_gammas(f"so{n}", 1)
    for r in RADII:
        x = unit(rng, n)
        X = r * x
        ref = 0.25 * (np.eye(n) + np.outer(X, X) / (1 - r * r))
        np.testing.assert_allclose(bb.bures_metric(g, r, x), ref, atol=1e-12)


@pytest.mark.parametrize("n", [3, 4, 5, 6])
def test_bures_distance_minimal_matches_fidelity(n, rng):
    g = cached_gammas(f"so{n}", 1)
    for _ in range(5):
        p, q = bb._random_ball_point(n, rng), bb._random_ball_point(n, rng)
        rp, rq = np.linalg.norm(p), np.linalg.norm(q)
        ref = bures_angle(bb.density_matrix(g, rp, p / rp), bb.density_matrix(g, rq, q / rq))
        assert bb.bures_distance_minimal(p, q) == pytest.approx(ref, abs=1e-10)


def test_bures_distance_examples():
    assert bb.bures_distance_minimal([0, 0, 0], [0, 0, 0]) == 0.0
    # antipodal pure states sit a quarter circle of radius 1/2 apart on each side
    assert bb.bures_distance_minimal([0, 0, 1], [0, 0, -1]) == pytest.approx(math.pi / 2)
    assert bb.bures_distance_minimal([0, 0, 0], [0, 0, 1]) == pytest.approx(math.pi / 4)
    with pytest.raises(ValueError):
        bb.bures_distance_minimal([0, 0, 1.5], [0, 0, 0])


ball = st.lists(st.floats(-0.55, 0.55), min_size=3, max_size=3)


@settings(max_examples=100, deadline=None)
@given(p=ball, q=ball, s=ball)
def test_bures_distance_is_metric(p, q, s):
    d = bb.bures_distance_minimal
    assert d(p, q) == pytest.approx(d(q, p), abs=1e-12)
    assert d(p, s) <= d(p, q) + d(q, s) + 1e-9


def test_flat_and_round_curvature():
    r = np.linspace(0.3, 0.7, 5)
    ric, kr = bb.warped_curvature(r, np.ones(5), np.zeros(5), r, np.ones(5), np.zeros(5), 3)
    np.testing.assert_allclose(ric, 0, atol=1e-14)
    np.testing.assert_allclose(kr, 0, atol=1e-14)
    # unit S^3 as dr^2/(1-r^2) + r^2 dOmega_2
    A = 1 / (1 - r * r)
    ric, kr = bb.warped_curvature(r, A, 2 * r * A * A, r, np.ones(5), np.zeros(5), 2)
    np.testing.assert_allclose(ric, 6, atol=1e-12)
    np.testing.assert_allclose(kr, 12, atol=1e-12)


@pytest.mark.parametrize("n", [3, 4, 5])
def test_minimal_ricci(n):
    d = n - 1
    rep = bb.curvature_at(cached_gammas(f"so{n}", 1), np.r_[0.01, RADII, 0.99])
    np.testing.assert_allclose(rep.ricci, 4 * d * (d + 1), atol=1e-8)
    # constant curvature 4: Kretschmann 2 n (n - 1) 16
    np.testing.assert_allclose(rep.kretschmann, 32 * n * (n - 1), rtol=1e-6)
    assert not rep.singular


@pytest.mark.parametrize("group,twoS", [("so3", 2), ("so4", 3), ("so5", 2)])
def test_metric_jet_matches_finite_differences(group, twoS, rng):
    g = cached_gammas(group, twoS)
    x = unit(rng, g.n)
    h = 1e-4
    B, B1, B2 = bb.bures_metric_jet(g, 0.5, x)
    up, dn = bb.bures_metric(g, 0.5 + h, x), bb.bures_metric(g, 0.5 - h, x)
    np.testing.assert_allclose(B1, (up - dn) / (2 * h), atol=1e-7)
    np.testing.assert_allclose(B2, (up - 2 * B + dn) / h**2, atol=1e-5)


@pytest.mark.parametrize("n,twoS", [(3, 3), (4, 3), (5, 2)])
def test_curvature_methods_agree(n, twoS):
    g = cached_gammas(f"so{n}", twoS)
    exact = bb.curvature_at(g, RADII)
    stencil = bb.curvature_at(g, RADII, method="stencil")
    np.testing.assert_allclose(stencil.ricci, exact.ricci, rtol=1e-6)
    np.testing.assert_allclose(stencil.kretschmann, exact.kretschmann, rtol=1e-5)
    with pytest.raises(ValueError):
        bb.curvature_at(g, RADII, method="spline")


@pytest.mark.parametrize("n,twoS", bb.REFERENCE_CELLS)
def test_no_singularities_in_interior(n, twoS):
    rep = bb.curvature_at(cached_gammas(f"so{n}", twoS), np.linspace(0.05, 0.95, 10))
    assert not rep.singular
    assert np.all(np.isfinite(rep.ricci))


def test_radial_curvature_needs_uniform_samples():
    g = cached_gammas("so3", 1)
    with pytest.raises(ValueError):
        bb.radial_curvature(bb.radial_metric(g, [0.1, 0.2, 0.3, 0.4]))
    with pytest.raises(ValueError):
        bb.radial_curvature(bb.radial_metric(g, [0.1, 0.2, 0.3, 0.4, 0.6]))
    assert bb.has_singularity([1.0, np.inf])
    assert bb.has_singularity([1e9])


@pytest.mark.parametrize("d,area", [(1, 2 * math.pi), (2, 4 * math.pi), (3, 2 * math.pi**2), (4, 8 * math.pi**2 / 3)])
def test_sphere_area(d, area):
    assert bb.sphere_area(d) == pytest.approx(area)


def test_bures_volume_closed_form():
    assert bb.bures_volume_minimal(2) == pytest.approx(math.pi**2 / 8)


@pytest.mark.parametrize("n", [3, 4, 5])
def test_bures_volume_quadrature(n):
    vol = bb.bures_volume_quadrature(cached_gammas(f"so{n}", 1))
    assert vol == pytest.approx(bb.bures_volume_minimal(n - 1), rel=1e-10)
    # hemisphere of radius 1/2: half the area of S^(d+1) scaled by (1/2)^(d+1)
    assert vol == pytest.approx(0.5 * bb.sphere_area(n) / 2**n, rel=1e-10)

from fractions import Fraction
import itertools

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from hyperbloch.fuzzy_gamma import (
    GammaSet,
    bracket_value,
    build_gammas,
    build_so2k1_gammas,
    build_so4_gammas_closed_form,
    cached_gammas,
    casimir_value,
    expected_spectrum,
    measured_spectrum,
    model_size,
    nambu_bracket,
    restrict_to_so2k,
    unitary_invariants,
    verify_fuzzy_sphere,
)
from hyperbloch.spin_algebra import SpinLabel, levi_civita, minimal_gammas, so_generators

from fixtures import SO4_S32_CHIRALITY, SO4_S32_V, SO5_S1_GAMMAS, so4_s32_gammas


def invariants_close(a, b, atol):
    ga, wa = unitary_invariants(a)
    gb, wb = unitary_invariants(b)
    assert np.abs(ga - gb).max() <= atol
    assert wa.keys() == wb.keys()
    assert max(abs(wa[w] - wb[w]) for w in wa) <= atol


def naive_bracket(mats):
    out = 0
    for perm in itertools.permutations(range(len(mats))):
        prod = np.eye(mats[0].shape[0], dtype=complex)
        for i in perm:
            prod = prod @ mats[i]
        out = out + levi_civita(perm) * prod
    return out


@pytest.mark.parametrize("m", [1, 2, 3, 4, 5])
def test_bracket_matches_permutation_sum(m, rng):
    mats = [rng.normal(size=(3, 3)) + 1j * rng.normal(size=(3, 3)) for _ in range(m)]
    np.testing.assert_allclose(nambu_bracket(mats), naive_bracket(mats), atol=1e-10)


def test_bracket_of_commuting_pair_vanishes():
    a = np.diag([1.0, 2.0, 3.0])
    np.testing.assert_allclose(nambu_bracket([a, a @ a]), 0)


def test_so5_fixture_invariants():
    fixture = GammaSet(5, 2, SO5_S1_GAMMAS.astype(complex), so_generators(SO5_S1_GAMMAS.astype(complex)))
    built = build_so2k1_gammas(2, 2)
    assert built.dim == 10
    invariants_close(built, fixture, 1e-12)
    rep = verify_fuzzy_sphere(fixture)
    assert rep.passed()
    assert rep.casimir == pytest.approx(12)
    assert rep.bracket == pytest.approx(-32)


def test_so4_fixture_entrywise():
    g = build_so4_gammas_closed_form(3)
    np.testing.assert_allclose(g.gammas, so4_s32_gammas(), atol=1e-14)
    np.testing.assert_allclose(g.chirality, SO4_S32_CHIRALITY)


def test_so4_fixture_diagonalizer():
    V = SO4_S32_V
    np.testing.assert_allclose(V.conj().T @ V, np.eye(12), atol=1e-14)
    D = V.conj().T @ so4_s32_gammas()[3] @ V
    np.testing.assert_allclose(D, np.diag([2] * 4 + [1] * 2 + [-1] * 2 + [-2] * 4), atol=1e-14)


@pytest.mark.parametrize("twoS", [1, 3, 5])
def test_restriction_matches_closed_form(twoS):
    closed = build_so4_gammas_closed_form(twoS)
    restricted = restrict_to_so2k(build_so2k1_gammas(2, twoS))
    invariants_close(closed, restricted, 1e-10)
    # chirality matrices agree on the signature
    assert np.trace(closed.chirality) == pytest.approx(np.trace(restricted.chirality))


@pytest.mark.parametrize("k", [1, 2, 3])
def test_spin_half_equals_minimal(k):
    g = build_so2k1_gammas(k, 1)
    assert g.dim == 2**k
    invariants_close(g, GammaSet(2 * k + 1, 1, minimal_gammas(k), so_generators(minimal_gammas(k))), 1e-12)


@pytest.mark.parametrize(
    "group,twoS",
    [("so3", 1), ("so3", 4), ("so5", 1), ("so5", 2), ("so5", 3), ("so4", 1), ("so4", 3), ("so6", 1), ("so7", 2)],
)
def test_invariant_suite(group, twoS):
    g = cached_gammas(group, twoS)
    rep = verify_fuzzy_sphere(g)
    assert rep.passed(1e-9), rep.errors()
    assert rep.casimir == pytest.approx(float(casimir_value(g.label)), rel=1e-12)
    assert rep.bracket == pytest.approx(bracket_value(g.label), rel=1e-10)
    assert g.dim == model_size(group, twoS)


@pytest.mark.parametrize(
    "n,twoS,value",
    [(3, 1, 3), (3, 2, 8), (5, 1, 5), (5, 2, 12), (7, 1, 7), (4, 1, 4), (4, 3, 12), (6, 1, 6)],
)
def test_casimir_values(n, twoS, value):
    assert casimir_value(SpinLabel(n, twoS)) == value


@pytest.mark.parametrize(
    "n,twoS,value",
    [(3, 1, 2j), (3, 2, 2j), (5, 1, -24), (5, 2, -32), (4, 1, 24), (4, 3, 40)],
)
def test_bracket_values(n, twoS, value):
    assert bracket_value(SpinLabel(n, twoS)) == pytest.approx(value)


def test_so3_bracket_is_commutator():
    g = build_gammas("so3", 3)
    br = nambu_bracket([g.gammas[0], g.gammas[1]])
    np.testing.assert_allclose(br, 2j * g.gammas[2], atol=1e-12)


def test_so5_spectrum():
    g = build_so2k1_gammas(2, 2)
    assert measured_spectrum(g.gammas[-1]) == {2: 3, 0: 4, -2: 3}
    assert expected_spectrum(g.label) == {2: 3, 0: 4, -2: 3}


@pytest.mark.parametrize("group,twoS", [("so5", 2), ("so4", 3), ("so7", 1)])
def test_hamiltonian_spectrum_is_rotation_invariant(group, twoS, rng):
    g = cached_gammas(group, twoS)
    north = np.linalg.eigvalsh(g.hamiltonian(np.eye(g.n)[-1]))
    x = rng.normal(size=g.n)
    x /= np.linalg.norm(x)
    np.testing.assert_allclose(np.linalg.eigvalsh(g.hamiltonian(x)), north, atol=1e-10)


@settings(max_examples=10, deadline=None)
@given(seed=st.integers(0, 2**32 - 1))
def test_invariants_unchanged_by_unitary(seed):
    rng = np.random.default_rng(seed)
    g = cached_gammas("so5", 2)
    q, _ = np.linalg.qr(rng.normal(size=(10, 10)) + 1j * rng.normal(size=(10, 10)))
    rot = GammaSet(5, 2, q.conj().T @ g.gammas @ q, q.conj().T @ g.generators @ q)
    invariants_close(g, rot, 1e-10)
    assert verify_fuzzy_sphere(rot).passed(1e-9)


def test_construction_errors():
    with pytest.raises(ValueError):
        build_gammas("so4", 2)
    with pytest.raises(ValueError):
        build_gammas("so5", 2, "minimal")
    with pytest.raises(ValueError):
        build_gammas("so6", 1, "closed-form")
    with pytest.raises(ValueError):
        build_gammas("so5", 1, "restricted")
    with pytest.raises(ValueError):
        restrict_to_so2k(build_so2k1_gammas(2, 2))
    with pytest.raises(ValueError):
        build_so2k1_gammas(0, 1)


def test_even_set_needs_chirality():
    g = minimal_gammas(2)[:4]
    with pytest.raises(ValueError):
        GammaSet(4, 1, g, so_generators(g))


def test_cached_is_memoised():
    assert cached_gammas("so5", 1) is cached_gammas("so5", 1)


def test_measured_spectrum_clusters():
    spec = measured_spectrum(np.diag([1.0, 1.0 + 1e-9, -0.5, -0.5, -0.5]))
    assert spec == {1: 2, Fraction(-1, 2): 3}


@pytest.mark.parametrize("twoS", [1, 3, 5, 7, 9, 11])
@pytest.mark.parametrize("construction", ["restricted", "closed-form"])
def test_so4_gamma_spectra(twoS, construction):
    # every Gamma_mu has eigenvalues lam + sgn(lam)/2 with multiplicity 2|lam|+1
    g = build_gammas("so4", twoS, construction)
    expected = {}
    for lam in g.label.levels():
        expected[lam + Fraction(1 if lam > 0 else -1, 2)] = int(2 * abs(lam) + 1)
    for G in g.gammas:
        assert measured_spectrum(G) == expected

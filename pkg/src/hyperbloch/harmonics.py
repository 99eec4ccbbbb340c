"""Monopole harmonics on S^2 and S^3 and their link to spin-coherent frames.

SO(3) harmonics are the complex conjugates of coherent-frame columns.
SO(4) harmonics are built from Wigner rotations ``D^(s)(chi) =
exp(-i chi y . S^(s))`` contracted with Clebsch-Gordan coefficients.
"""

from dataclasses import dataclass, field
from fractions import Fraction
import itertools
import math

import numpy as np
from scipy.linalg import expm

from .charts import AngleChart, sphere_point
from .fuzzy_gamma import cached_gammas
from .geometry import connection_from_frames, quadrature_grid
from .spin_algebra import clebsch_gordan, levi_civita, so4_spin_generators, spin_matrices
from .zeeman_dirac import frame_builder

FD_STEP = 1e-5


def _eps3():
    eps = np.zeros((3, 3, 3))
    for p in itertools.permutations(range(3)):
        eps[p] = levi_civita(p)
    return eps


EPS3 = _eps3()


# SO(3)


def so3_harmonics(twoS, lam, angles):
    """``phi_alpha^(lam)`` at ``angles`` (shape ``(..., 2)``), shape ``(..., 2S+1)``."""
    lam = Fraction(lam)
    if abs(lam) > Fraction(twoS, 2) or (Fraction(twoS, 2) - lam).denominator != 1:
        raise ValueError(f"level {lam} not present for 2S={twoS}")
    fb = frame_builder(cached_gammas("so3", twoS))
    a = np.asarray(angles, dtype=float)
    psi, _ = fb.frames(a.reshape(-1, 2), derivatives=False)
    col = psi[:, :, fb.level_slice(lam)][..., 0]
    return col.conj().reshape(a.shape[:-1] + (twoS + 1,))


def wigner_small_d(twoJ, beta):
    """Wigner ``d^J_{m' m}(beta)`` in descending ``m`` order (explicit sum)."""
    J = Fraction(twoJ, 2)
    ms = [J - i for i in range(twoJ + 1)]
    out = np.zeros((twoJ + 1, twoJ + 1))
    c, s = math.cos(beta / 2), math.sin(beta / 2)
    f = math.factorial
    for a, mp in enumerate(ms):
        for b, m in enumerate(ms):
            pref = math.sqrt(f(int(J + mp)) * f(int(J - mp)) * f(int(J + m)) * f(int(J - m)))
            total = 0.0
            for k in range(0, twoJ + 1):
                n1, n2, n3 = int(J + m) - k, int(J - mp) - k, int(mp - m) + k
                if n1 < 0 or n2 < 0 or n3 < 0:
                    continue
                total += (
                    (-1) ** (int(mp - m) + k)
                    * c ** (int(2 * J + m - mp) - 2 * k)
                    * s ** (int(mp - m) + 2 * k)
                    / (f(n1) * f(k) * f(n2) * f(n3))
                )
            out[a, b] = pref * total
    return out


def harmonic_connection_so3(twoS, lam, chart, h=FD_STEP):
    """``A^(lam) = -i sum_alpha phi_alpha d phi_alpha^*`` by central differences, shape ``(2,)``."""
    a = chart.array
    phi = so3_harmonics(twoS, lam, a)
    shift = h * np.eye(2)
    dphi = (so3_harmonics(twoS, lam, a + shift) - so3_harmonics(twoS, lam, a - shift)) / (2 * h)
    return -1j * np.einsum("a,ta->t", phi, dphi.conj())


def so3_orthonormality(twoS, lam, n_polar=48, n_azimuth=96, lam2=None):
    """``int phi_alpha^(lam)* phi_beta^(lam2) dOmega_2`` as a matrix."""
    ang, w = quadrature_grid(2, n_polar, n_azimuth)
    w = w * np.sin(ang[:, 0])
    p1 = so3_harmonics(twoS, lam, ang)
    p2 = p1 if lam2 is None else so3_harmonics(twoS, lam2, ang)
    return np.einsum("p,pa,pb->ab", w, p1.conj(), p2)


def so3_position_elements(twoS, lam, n_polar=48, n_azimuth=96):
    """``int phi_alpha^* x_i phi_beta dOmega_2`` stacked over ``i``."""
    ang, w = quadrature_grid(2, n_polar, n_azimuth)
    w = w * np.sin(ang[:, 0])
    phi = so3_harmonics(twoS, lam, ang)
    x = sphere_point(ang)
    return np.einsum("p,pi,pa,pb->iab", w, x, phi.conj(), phi)


def so3_position_coefficient(twoS, lam):
    """``4 pi lam / (S (S+1) (2S+1))``."""
    S = twoS / 2
    return 4 * np.pi * float(lam) / (S * (S + 1) * (2 * S + 1))


# SO(4)


def wigner_rotation(twoS, angles):
    """``D^(s)(chi) = exp(-i chi y . S^(s))`` for chart angles ``(chi, theta, phi)``.

    Batched over leading axes of ``angles``; evaluated through the spectral
    decomposition of ``y . S``, whose eigenvalues are ``m``.
    """
    a = np.atleast_2d(np.asarray(angles, dtype=float))
    chi = a[:, 0]
    y = sphere_point(a[:, 1:])
    spins = np.array(spin_matrices(twoS))
    gen = np.einsum("pi,iab->pab", y, spins)
    w, v = np.linalg.eigh(gen)
    phase = np.exp(-1j * chi[:, None] * w)
    out = np.einsum("pab,pb,pcb->pac", v, phase, v.conj())
    return out.reshape(np.shape(angles)[:-1] + (twoS + 1, twoS + 1))


def cg_matrix(twoL, twoR, twoJ):
    """Rows ``C^{J, A}_{s_L m_L; s_R m_R}`` for ``A = J..-J``; columns ``(m_L, m_R)`` descending."""
    sL, sR, J = Fraction(twoL, 2), Fraction(twoR, 2), Fraction(twoJ, 2)
    if not (abs(sL - sR) <= J <= sL + sR) or (sL + sR - J).denominator != 1:
        raise ValueError(f"J={J} outside the coupling range of ({sL}, {sR})")
    out = np.zeros((twoJ + 1, (twoL + 1) * (twoR + 1)))
    for A in range(twoJ + 1):
        M = J - A
        for iL in range(twoL + 1):
            for iR in range(twoR + 1):
                out[A, iL * (twoR + 1) + iR] = clebsch_gordan(sL, sL - iL, sR, sR - iR, J, M)
    return out


def so4_nonlinear_realization(twoL, twoR, angles):
    """``D^(s_L)(chi) (x) D^(s_R)(-chi)``."""
    a = np.asarray(angles, dtype=float)
    DL = wigner_rotation(twoL, a)
    flip = a.copy()
    flip[..., 0] = -flip[..., 0]
    DR = wigner_rotation(twoR, flip)
    out = np.einsum("...ab,...cd->...acbd", DL, DR)
    n = (twoL + 1) * (twoR + 1)
    return out.reshape(a.shape[:-1] + (n, n))


def so4_realization_by_exponential(twoL, twoR, chart):
    """``exp(-i chi sum_i y_i Sigma_{i4})`` by dense ``expm`` (cross-check)."""
    a = chart.array
    y = sphere_point(a[1:])
    gens = so4_spin_generators(twoL, twoR)
    gen = sum(y[i] * gens[i, 3] for i in range(3))
    return expm(-1j * a[0] * gen)


def so4_harmonics(twoL, twoR, twoJ, angles):
    """``(phi_{m_L m_R})_A`` with shape ``(..., (2s_L+1)(2s_R+1), 2J+1)``.

    Row index is ``(m_L, m_R)`` descending; column index is ``A = J..-J``.
    """
    O = cg_matrix(twoL, twoR, twoJ)
    psi = so4_nonlinear_realization(twoL, twoR, angles)
    return np.einsum("Ab,...bc->...cA", O, psi)


def so4_normalization(twoL, twoR, twoJ):
    """``2 pi^2 (2J+1) / ((2 s_L+1)(2 s_R+1))``."""
    return 2 * np.pi**2 * (twoJ + 1) / ((twoL + 1) * (twoR + 1))


def so4_orthonormality(twoL, twoR, twoJ, n_polar=48, n_azimuth=96):
    """``int phi_alpha^dag phi_beta dOmega_3`` as a matrix over ``(m_L, m_R)``."""
    ang, w = quadrature_grid(3, n_polar, n_azimuth)
    w = w * np.sin(ang[:, 0]) ** 2 * np.sin(ang[:, 1])
    phi = so4_harmonics(twoL, twoR, twoJ, ang)
    return np.einsum("p,paA,pbA->ab", w, phi.conj(), phi)


def so4_gauge_field(twoJ, x):
    """Spin-``J`` monopole field ``A_mu`` on R^4 minus the negative axis, shape ``(4, D, D)``.

    Uses the degree ``-1`` homogeneous extension
    ``A_i = -eps_ijk x_j S_k / (|x| (|x| + x_4))``, ``A_4 = 0``.
    """
    x = np.asarray(x, dtype=float)
    rad = np.linalg.norm(x)
    spins = np.array(spin_matrices(twoJ))
    coeff = -np.einsum("ijk,j->ik", EPS3, x[:3]) / (rad * (rad + x[3]))
    out = np.zeros((4, twoJ + 1, twoJ + 1), dtype=np.complex128)
    out[:3] = np.einsum("ik,kab->iab", coeff, spins)
    return out


def so4_field_strength(twoJ, x, h=FD_STEP):
    """``F_{mu nu} = d_mu A_nu - d_nu A_mu + i [A_mu, A_nu]`` in R^4."""
    A = so4_gauge_field(twoJ, x)
    dA = np.array(
        [(so4_gauge_field(twoJ, x + h * e) - so4_gauge_field(twoJ, x - h * e)) / (2 * h) for e in np.eye(4)]
    )
    # dA[mu, nu] = d_mu A_nu
    comm = np.einsum("mab,nbc->mnac", A, A)
    return dA - np.swapaxes(dA, 0, 1) + 1j * (comm - np.swapaxes(comm, 0, 1))


def _plane_rotation(x, mu, nu, t):
    """Rotate ``x`` along the flow of ``x_mu d_nu - x_nu d_mu`` by ``t``."""
    y = np.array(x, dtype=float)
    c, s = math.cos(t), math.sin(t)
    y[nu] = x[nu] * c + x[mu] * s
    y[mu] = x[mu] * c - x[nu] * s
    return y


def _covariant_angular(func, twoJ, x, mu, nu, h):
    """``L_{mu nu} f`` at unit ``x`` for a field ``f`` with leading index ``A``."""
    deriv = (func(_plane_rotation(x, mu, nu, h)) - func(_plane_rotation(x, mu, nu, -h))) / (2 * h)
    A = so4_gauge_field(twoJ, x)
    F = so4_field_strength(twoJ, x)
    mix = x[mu] * A[nu] - x[nu] * A[mu] + F[mu, nu]
    return -1j * deriv + np.tensordot(mix, func(x), axes=(1, 0))


def so4_harmonic_on_point(twoL, twoR, twoJ, x):
    """Harmonics at a unit vector in R^4, shape ``(2J+1, (2s_L+1)(2s_R+1))``."""
    x = np.asarray(x, dtype=float) / np.linalg.norm(x)
    chart = AngleChart.from_point(x)
    return so4_harmonics(twoL, twoR, twoJ, chart.array).T


def so4_casimir_action(twoL, twoR, twoJ, x, h=1e-4):
    """``sum_{mu > nu} L_{mu nu}^2 phi`` at unit ``x`` by nested central differences."""

    def phi(y):
        return so4_harmonic_on_point(twoL, twoR, twoJ, y)

    total = 0.0
    for mu in range(4):
        for nu in range(mu):

            def inner(y, mu=mu, nu=nu):
                y = y / np.linalg.norm(y)
                return _covariant_angular(phi, twoJ, y, mu, nu, h)

            total = total + _covariant_angular(inner, twoJ, x, mu, nu, h)
    return total


def so4_casimir_value(twoL, twoR):
    """``2 (s_L (s_L+1) + s_R (s_R+1))``."""
    sL, sR = twoL / 2, twoR / 2
    return 2 * (sL * (sL + 1) + sR * (sR + 1))


def harmonic_connection_so4(twoL, twoR, twoJ, chart, h=FD_STEP):
    """``A_t = -i sum_beta phi_beta d_t phi_beta^*`` over the chart angles, shape ``(3, D, D)``."""
    a = chart.array
    phi = so4_harmonics(twoL, twoR, twoJ, a)
    shift = h * np.eye(3)
    dphi = (so4_harmonics(twoL, twoR, twoJ, a + shift) - so4_harmonics(twoL, twoR, twoJ, a - shift)) / (2 * h)
    return -1j * np.einsum("bA,tbB->tAB", phi, dphi.conj())


def so4_monopole_connection(twoJ, chart):
    """``-(1/(1+x_4)) eps_ijk x_j S_k dx_i`` pulled back to the chart angles."""
    x = chart.point()
    dx = chart.tangents()
    spins = np.array(spin_matrices(twoJ))
    coeff = np.einsum("ijk,j,ti->tk", EPS3, x[:3], dx[:, :3])
    return -np.einsum("tk,kab->tab", coeff, spins) / (1 + x[3])


def so4_bispin(twoS, lam):
    """``(2 s_L, 2 s_R)`` of the harmonics that build level ``lam`` of the SO(4) model."""
    sgn = 1 if lam > 0 else -1
    S = Fraction(twoS, 2)
    sL = S / 2 + Fraction(sgn, 4)
    sR = S / 2 - Fraction(sgn, 4)
    return int(2 * sL), int(2 * sR)


# correspondence


def chiral_multiplet(g, lam):
    """Isometry onto the spin-``|lam|`` stabiliser multiplet of chirality ``sgn(lam)``.

    Columns run over ``m = |lam|..-|lam|`` with Condon-Shortley phases, so the
    stabiliser generators ``Sigma_23, Sigma_31, Sigma_12`` act as standard spin
    matrices.
    """
    if g.n != 4:
        raise ValueError("chiral multiplets are defined for SO(4)")
    lam = Fraction(lam)
    J = abs(lam)
    gens = g.generators
    spins = [gens[1, 2], gens[2, 0], gens[0, 1]]
    w, v = np.linalg.eigh(g.chirality)
    sub = v[:, w > 0] if lam > 0 else v[:, w < 0]
    cas = sub.conj().T @ sum(s_ @ s_ for s_ in spins) @ sub
    cw, cv = np.linalg.eigh((cas + cas.conj().T) / 2)
    sub = sub @ cv[:, np.abs(cw - float(J * (J + 1))) < 1e-8]
    sz = sub.conj().T @ spins[2] @ sub
    zw, zv = np.linalg.eigh((sz + sz.conj().T) / 2)
    cols = sub @ zv[:, ::-1]
    if cols.shape[1] != int(2 * J + 1):
        raise ArithmeticError(f"expected a spin-{J} multiplet, found {cols.shape[1]} states")
    lower = spins[0] - 1j * spins[1]
    out = [cols[:, 0] * (abs(cols[np.argmax(np.abs(cols[:, 0])), 0]) / cols[np.argmax(np.abs(cols[:, 0])), 0])]
    for i in range(1, cols.shape[1]):
        c = cols[:, i]
        amp = np.vdot(c, lower @ out[-1])
        out.append(c * (amp / abs(amp)))
    return np.array(out).T


@dataclass
class CorrespondenceReport:
    group: str
    twoS: int
    lam: Fraction
    harmonic_count: int
    component_count: int
    level_degeneracy: int
    rows_in_level: int
    frame_error: float
    connection_error: float
    notes: list = field(default_factory=list)

    def passed(self, tol=1e-8):
        return (
            self.frame_error < tol
            and self.connection_error < tol
            and self.component_count == self.level_degeneracy
            and self.harmonic_count == self.rows_in_level
        )


def _random_charts(d, rng, count):
    return [AngleChart.random(d, rng, margin=0.2) for _ in range(count)]


def coherent_landau_correspondence(group, twoS, lam, samples=10, seed=0):
    """Compare coherent-frame blocks with the corresponding monopole harmonics.

    For SO(3) the level-``lam`` column must equal the conjugated harmonics
    entrywise. For SO(4) the block rows must equal the conjugated harmonics up
    to one constant isometry (fitted on the first half of the sample charts
    and tested on the second). In both cases the two connections are compared.
    """
    lam = Fraction(lam)
    rng = np.random.default_rng(seed)
    g = cached_gammas(group, twoS)
    fb = frame_builder(g)
    sl = fb.level_slice(lam)
    width = sl.stop - sl.start
    charts = _random_charts(g.n - 1, rng, samples)
    frames = [fb.frames(c.array) for c in charts]
    frame_conn = [connection_from_frames(p[..., sl], dp[..., sl])[0] for p, dp in frames]
    if g.n == 3:
        frame_err = max(
            float(np.abs(so3_harmonics(twoS, lam, c.array) - p[0, :, sl][:, 0].conj()).max())
            for c, (p, _) in zip(charts, frames)
        )
        conn_err = max(
            float(np.abs(harmonic_connection_so3(twoS, lam, c) - fc[:, 0, 0]).max())
            for c, fc in zip(charts, frame_conn)
        )
        return CorrespondenceReport(
            group, twoS, lam, twoS + 1, 1, width, g.dim, frame_err, conn_err
        )
    if g.n == 4:
        return _so4_correspondence(g, lam, rng, samples)
    raise ValueError("correspondence is implemented for SO(3) and SO(4)")


def _fit_isometry(targets, sources, n_fit):
    """Constant ``U`` with ``targets ~ U sources``; residual on the held-out samples."""
    U = np.hstack(targets[:n_fit]) @ np.linalg.pinv(np.hstack(sources[:n_fit]))
    err = max(float(np.abs(U @ s_ - t).max()) for t, s_ in zip(targets[n_fit:], sources[n_fit:]))
    return U, err


def _so4_correspondence(g, lam, rng, samples):
    """SO(4) version of :func:`coherent_landau_correspondence`.

    Each chirality block of ``exp(i chi y . Sigma_{i4})``, restricted to the
    spin-``|lam|`` stabiliser multiplet, equals conjugated harmonics of bispin
    ``(s_L, s_R)`` or ``(s_R, s_L)``. The coherent block of level ``lam``
    mixes the two with equal weight, so its connection is the average of the
    two harmonic connections; the chirality-odd parts cancel and leave the
    SU(2) monopole field.
    """
    fb = frame_builder(g)
    sl = fb.level_slice(lam)
    width = sl.stop - sl.start
    twoJ = int(2 * abs(lam))
    bis = {+1: so4_bispin(g.twoS, abs(lam)), -1: so4_bispin(g.twoS, -abs(lam))}
    Q = {c: chiral_multiplet(g, c * abs(lam)) for c in (+1, -1)}
    own = 1 if lam > 0 else -1
    rows = (bis[own][0] + 1) * (bis[own][1] + 1)
    n_fit = -(-2 * rows // (twoJ + 1)) + 2
    charts = _random_charts(3, rng, n_fit + samples)
    chiral = {c: [] for c in (+1, -1)}
    harm = {c: [] for c in (+1, -1)}
    coherent, err_conn = [], 0.0
    for ch in charts:
        psi, dpsi = fb.frames(ch.array)
        rot = psi[0] @ fb.W.conj().T
        coherent.append(psi[0][:, sl])
        a_wz = connection_from_frames(psi[..., sl], dpsi[..., sl])[0]
        a_h = {}
        for c in (+1, -1):
            tl, tr = bis[c]
            chiral[c].append(rot @ Q[c])
            harm[c].append(so4_harmonics(tl, tr, twoJ, ch.array).conj())
            a_h[c] = harmonic_connection_so4(tl, tr, twoJ, ch)
        avg = 0.5 * (a_h[+1] + a_h[-1])
        err_conn = max(
            err_conn,
            float(np.abs(avg - a_wz).max()),
            float(np.abs(so4_monopole_connection(twoJ, ch) - a_wz).max()),
        )
    U, err_chiral = _fit_isometry(chiral[own], harm[own], n_fit)
    iso_err = float(np.abs(U.conj().T @ U - np.eye(U.shape[1])).max())
    both = [np.vstack([hp, hm]) for hp, hm in zip(harm[+1], harm[-1])]
    _, err_coh = _fit_isometry(coherent, both, n_fit)
    rep = CorrespondenceReport(
        "so4",
        g.twoS,
        Fraction(lam),
        rows,
        twoJ + 1,
        width,
        int(np.linalg.matrix_rank(U)),
        max(err_chiral, iso_err, err_coh),
        err_conn,
    )
    rep.notes.append(f"bispin ({Fraction(bis[own][0], 2)}, {Fraction(bis[own][1], 2)})")
    return rep


def convergence_ratios(errors):
    """Successive error ratios ``e_i / e_{i+1}``."""
    e = np.asarray(errors, dtype=float)
    return e[:-1] / e[1:]

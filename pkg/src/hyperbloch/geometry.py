"""Quantum geometric tensor, Wilczek-Zee connections and Chern numbers of
the coherent levels."""

from fractions import Fraction
import itertools
import math

import numpy as np

from .charts import orientation_sign, round_metric, sphere_point, sphere_tangents
from .spin_algebra import (
    SIGMA,
    SpinLabel,
    dim_odd,
    levi_civita,
    minimal_gammas,
    so4_spin_generators,
    so_generators,
    spin_matrices,
    thooft_tensor,
)
from .zeeman_dirac import frame_builder

FD_STEP = 1e-5


def connection_from_frames(blk, dblk):
    """``A_t = -i Psi^dag d_t Psi`` for batched blocks, shape ``(P, d, w, w)``."""
    return -1j * np.einsum("pji,ptjk->ptik", blk.conj(), dblk)


def qgt_from_frames(blk, dblk):
    """``chi_{mu nu} = d Psi^dag d Psi - d Psi^dag Psi Psi^dag d Psi``, shape ``(P, d, d, w, w)``."""
    A = connection_from_frames(blk, dblk)
    T = np.einsum("psji,ptjk->pstik", dblk.conj(), dblk)
    return T - np.einsum("psij,ptjk->pstik", A, A)


def _fd_frames(g, chart, lam, h):
    fb = frame_builder(g)
    sl = fb.level_slice(lam)
    a = chart.array
    shifts = np.concatenate([a + h * np.eye(len(a)), a - h * np.eye(len(a))])
    psi, _ = fb.frames(shifts, derivatives=False)
    d = len(a)
    dblk = (psi[:d, :, sl] - psi[d:, :, sl]) / (2 * h)
    centre, _ = fb.frames(a, derivatives=False)
    return centre[:, :, sl], dblk[None]


def qgt(frame, lam, mode="analytic", h=FD_STEP):
    """Non-Abelian quantum geometric tensor of level ``lam``, shape ``(d, d, w, w)``.

    ``mode="analytic"`` uses the exact frame derivatives; ``"finite-difference"``
    recomputes frames at ``+-h`` along each angle.
    """
    if mode == "analytic":
        blk, dblk = frame.block(lam)[None], frame.dblock(lam)[None]
    elif mode == "finite-difference":
        blk, dblk = _fd_frames(frame.gammaset, frame.chart, lam, h)
    else:
        raise ValueError(f"unknown mode {mode!r}")
    return qgt_from_frames(blk, dblk)[0]


def wilczek_zee(frame, lam):
    """Connection components ``A_t`` (one ``w x w`` matrix per chart angle)."""
    return connection_from_frames(frame.block(lam)[None], frame.dblock(lam)[None])[0]


def quantum_metric(chi):
    """``g_{mu nu} = Re tr chi_{mu nu}``."""
    return np.trace(chi, axis1=-2, axis2=-1).real


def berry_curvature(chi):
    """``F_{mu nu} = -i (chi_{mu nu} - chi_{nu mu})``."""
    return -1j * (chi - np.swapaxes(chi, -3, -4))


def metric_from_qgt(chi, chart):
    """Fit ``g = c g_round``; returns ``(g, c, relative residual)``."""
    g = quantum_metric(chi)
    g0 = np.diag(round_metric(chart.array))
    c = float(np.sum(g * g0) / np.sum(g0 * g0))
    res = float(np.linalg.norm(g - c * g0) / max(np.linalg.norm(c * g0), 1e-300))
    return g, c, res


def metric_coefficient_expected(g, lam):
    """Closed-form metric coefficient when one is known, else ``None``.

    SO(3) levels: ``(S(S+1) - lam^2)/2``; minimal sets: ``2^(k-3)``.
    """
    S = Fraction(g.twoS, 2)
    if g.n == 3:
        return (S * (S + 1) - Fraction(lam) ** 2) / 2
    if g.twoS == 1:
        return Fraction(2) ** (g.k - 3)
    return None


def field_strength(frame, lam, route="qgt", h=1e-4):
    """Non-Abelian field strength ``F_{mu nu}``, shape ``(d, d, w, w)``.

    ``route="qgt"`` takes the antisymmetric part of the geometric tensor.
    ``route="connection"`` differentiates the connection by central
    differences and adds ``i [A_mu, A_nu]``.
    """
    if route == "qgt":
        return berry_curvature(qgt(frame, lam))
    if route != "connection":
        raise ValueError(f"unknown route {route!r}")
    g, chart = frame.gammaset, frame.chart
    fb = frame_builder(g)
    sl = fb.level_slice(lam)
    a = chart.array
    d = len(a)
    pts = np.concatenate([a + h * np.eye(d), a - h * np.eye(d)])
    psi, dpsi = fb.frames(pts)
    A = connection_from_frames(psi[..., sl], dpsi[..., sl])
    dA = (A[:d] - A[d:]) / (2 * h)  # dA[s, t] = d_s A_t
    A0 = wilczek_zee(frame, lam)
    curl = dA - np.swapaxes(dA, 0, 1)
    comm = np.einsum("sij,tjk->stik", A0, A0)
    return curl + 1j * (comm - np.swapaxes(comm, 0, 1))


def wz_generator_form(frame, lam):
    """``-(1/(1 + x_{d+1})) sum_{mu nu} Sigma^[lam]_{mu nu} x_nu dx_mu``.

    ``Sigma^[lam]`` is the level-``lam`` block of the stabiliser generators in
    the frame's working basis.
    """
    g = frame.gammaset
    fb = frame_builder(g)
    sl = fb.level_slice(lam)
    d = g.n - 1
    W = fb.W[:, sl]
    blockgen = W.conj().T @ g.generators[:d, :d] @ W
    x = frame.chart.point()
    dx = frame.chart.tangents()
    coeff = np.einsum("tm,n->tmn", dx[:, :d], x[:d])
    return -np.einsum("tmn,mnij->tij", coeff, blockgen) / (1 + x[d])


def wz_explicit(frame, lam):
    """Connection from explicit spin-matrix formulas.

    Available for SO(3) (all spins), SO(5) (all spins via 't Hooft symbols)
    and SO(4) (standard spin matrices of spin ``|lam|``). Returns ``None`` for
    other groups.
    """
    g = frame.gammaset
    lam = Fraction(lam)
    x = frame.chart.point()
    dx = frame.chart.tangents()
    S = Fraction(g.twoS, 2)
    if g.n == 3:
        # A = -lam/(1+x3) eps_ij3 x_j dx_i
        form = (x[1] * dx[:, 0] - x[0] * dx[:, 1]) * (-float(lam) / (1 + x[2]))
        return form[:, None, None].astype(np.complex128)
    if g.n == 5:
        twoL = int(S + lam)
        twoR = int(S - lam)
        blockgen = so4_spin_generators(twoL, twoR)
        coeff = np.einsum("tm,n->tmn", dx[:, :4], x[:4])
        return -np.einsum("tmn,mnij->tij", coeff, blockgen) / (1 + x[4])
    if g.n == 4:
        spins = spin_matrices(int(2 * abs(lam)))
        eps = np.zeros((3, 3, 3))
        for i, j, k in itertools.permutations(range(3)):
            eps[i, j, k] = levi_civita((i, j, k))
        coeff = np.einsum("ijk,j,ti->tk", eps, x[:3], dx[:, :3])
        return -np.einsum("tk,kab->tab", coeff, np.array(spins)) / (1 + x[3])
    return None


def wz_minimal_thooft(chart, sign):
    """Minimal SO(5) connection ``-(1/(2(1+x5))) eta^(+-)i_{mu nu} sigma_i x_nu dx_mu``."""
    x = sphere_point(chart.array)
    dx = sphere_tangents(chart.array)
    eta = thooft_tensor(sign)
    coeff = np.einsum("imn,tm,n->ti", eta, dx[:, :4], x[:4])
    return -np.einsum("ti,iab->tab", coeff, SIGMA) / (2 * (1 + x[4]))


def wz_minimal_even(g, chart):
    """Minimal SO(2k) connection ``-(1/(1+x_2k)) sigma'_ij x_j dx_i``.

    ``sigma'`` are the SO(2k-1) generators built from the recursion.
    """
    d = g.n - 1
    sig = so_generators(minimal_gammas(g.k - 1))
    x = sphere_point(chart.array)
    dx = sphere_tangents(chart.array)
    coeff = np.einsum("ti,j->tij", dx[:, :d], x[:d])
    return -np.einsum("tij,ijab->tab", coeff, sig) / (1 + x[d])


# Chern numbers


def _sgn(lam):
    return (lam > 0) - (lam < 0)


def chern_number(k, twoS, lam):
    """Top Chern number ``ch_k`` of level ``lam`` of the SO(2k+1) model (exact)."""
    S = Fraction(twoS, 2)
    lam = Fraction(lam)
    if lam == 0:
        return Fraction(0)
    return _sgn(lam) * dim_odd(k, S - Fraction(1, 2), abs(lam) - Fraction(1, 2))


def second_chern_so5(twoS, lam):
    """``ch_2 = (2/3)(S+1) lam (S+1+lam)(S+1-lam)`` for SO(5)."""
    S = Fraction(twoS, 2)
    lam = Fraction(lam)
    return Fraction(2, 3) * (S + 1) * lam * (S + 1 + lam) * (S + 1 - lam)


def second_chern_class_so5(twoS, lam):
    """``c~_2 = (1/3)(S(S+2) + lam^2)(S+1+lam)(S+1-lam)`` for SO(5)."""
    S = Fraction(twoS, 2)
    lam = Fraction(lam)
    return Fraction(1, 3) * (S * (S + 2) + lam**2) * (S + 1 + lam) * (S + 1 - lam)


def winding_number(k, twoS, sign=+1):
    """Winding ``nu^(+-) = +-D_SO(2k+1)(S - 1/2, 0)`` of the SO(2k) model."""
    S = Fraction(twoS, 2)
    return (1 if sign > 0 else -1) * dim_odd(k, S - Fraction(1, 2), 0)


def chern_formula(group, twoS, lam, kind="ch"):
    """Exact topological numbers.

    ``kind``: ``"ch"`` (top Chern number of an SO(2k+1) level),
    ``"c2"`` (SO(5) second Chern class), ``"winding"`` (SO(2k) model, sign of
    ``lam``).
    """
    label = SpinLabel.of(group, twoS)
    if kind == "ch":
        if not label.odd:
            raise ValueError("Chern numbers are defined for odd-group levels; use kind='winding'")
        return chern_number(label.k, twoS, lam)
    if kind == "c2":
        if label.n != 5:
            raise ValueError("the second Chern class formula is for SO(5)")
        return second_chern_class_so5(twoS, lam)
    if kind == "winding":
        if label.odd:
            raise ValueError("winding numbers are defined for even groups")
        return winding_number(label.k, twoS, _sgn(Fraction(lam)))
    raise ValueError(f"unknown kind {kind!r}")


def _pairings(m):
    """Ordered sequences of ordered pairs covering ``range(m)`` with their signs."""
    out = []
    for perm in itertools.permutations(range(m)):
        if all(perm[2 * i] < perm[2 * i + 1] for i in range(m // 2)):
            out.append((levi_civita(perm), [(perm[2 * i], perm[2 * i + 1]) for i in range(m // 2)]))
    return out


def top_form_density(F):
    """Coefficient of ``tr F^k`` on the coordinate volume, batched over ``P``.

    ``F`` has shape ``(P, d, d, w, w)`` with ``d = 2k``.
    """
    d = F.shape[1]
    total = np.zeros(F.shape[0], dtype=np.complex128)
    for sign, pairs in _pairings(d):
        mat = F[:, pairs[0][0], pairs[0][1]]
        for a, b in pairs[1:]:
            mat = mat @ F[:, a, b]
        total += sign * np.trace(mat, axis1=-2, axis2=-1)
    return total


def quadrature_grid(d, n_polar, n_azimuth):
    """Product grid on S^d: Gauss-Legendre in polar angles, uniform in azimuth.

    Returns ``(angles (P, d), weights (P,))``.
    """
    x, w = np.polynomial.legendre.leggauss(n_polar)
    polar = (x + 1) * np.pi / 2
    wpolar = w * np.pi / 2
    az = 2 * np.pi * np.arange(n_azimuth) / n_azimuth
    waz = np.full(n_azimuth, 2 * np.pi / n_azimuth)
    axes = [polar] * (d - 1) + [az]
    waxes = [wpolar] * (d - 1) + [waz]
    grids = np.meshgrid(*axes, indexing="ij")
    wgrids = np.meshgrid(*waxes, indexing="ij")
    angles = np.stack([gr.ravel() for gr in grids], axis=-1)
    weights = np.prod(np.stack([wg.ravel() for wg in wgrids], axis=-1), axis=-1)
    return angles, weights


def chern_numeric(g, lam, n_polar=16, n_azimuth=None, chunk=4096):
    """Top Chern number of level ``lam`` of an odd-group model by quadrature.

    ``ch_k = (1/(k! (2 pi)^k)) int tr F^k`` with the outward orientation.
    """
    if not g.odd:
        raise ValueError("Chern numbers are computed for odd groups")
    k = g.k
    d = 2 * k
    if n_azimuth is None:
        n_azimuth = 2 * n_polar
    fb = frame_builder(g)
    sl = fb.level_slice(lam)
    angles, weights = quadrature_grid(d, n_polar, n_azimuth)
    total = 0.0 + 0.0j
    for start in range(0, len(angles), chunk):
        a = angles[start : start + chunk]
        psi, dpsi = fb.frames(a)
        chi = qgt_from_frames(psi[..., sl], dpsi[..., sl])
        F = berry_curvature(chi)
        dens = top_form_density(F)
        total += np.sum(dens * weights[start : start + chunk])
    val = total * orientation_sign(d) / (math.factorial(k) * (2 * np.pi) ** k)
    return float(val.real)


def gauge_transform_qgt(chi, U):
    """``U^dag chi U`` applied to every component."""
    return np.einsum("ji,stjk,kl->stil", U.conj(), chi, U)

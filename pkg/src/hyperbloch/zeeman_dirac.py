"""Zeeman-Dirac Hamiltonians ``H = x . Gamma / 2`` and their coherent frames.

The frame ``Psi(x)`` is an ordered product of one-angle rotations
``exp(i alpha Sigma_ab)`` such that ``Psi^dag H Psi`` is the diagonal form at
the north pole. Rotations use the spectral decomposition of the Hermitian
generators, which makes them exact to rounding and cheap to batch.
"""

from dataclasses import dataclass
from fractions import Fraction

import numpy as np
from scipy.linalg import expm

from .charts import AngleChart, sphere_point
from .fuzzy_gamma import CLUSTER_TOL, GammaSet

HALF = Fraction(1, 2)


def rotation_chain(d):
    """Factors ``(angle position, a, b)`` of ``Psi = prod exp(i angle Sigma_ab)``.

    Positions index the chart angles ``(theta_d, ..., theta, phi)``; ``a, b``
    are 0-based vector indices.
    """
    if d < 2:
        raise ValueError("need a sphere of dimension at least 2")
    pos_phi, pos_th = d - 1, d - 2
    if d == 2:
        return [(pos_phi, 1, 0), (pos_th, 0, 2), (pos_phi, 0, 1)]
    outer = [(pos_phi, 1, 0), (pos_th, 0, 2)]
    for j in range(3, d):
        outer.append((d - j, j - 1, j))
    top = [(0, d - 1, d)]
    inner = [(p, b, a) for (p, a, b) in reversed(outer)]
    return outer + top + inner


def energy(label, lam):
    """Eigenvalue of ``H`` on level ``lam``."""
    lam = Fraction(lam)
    if label.odd:
        return lam
    return (lam + (HALF if lam > 0 else -HALF)) / 2


def bloch_coefficient(label, lam):
    """``c`` in ``Psi^(lam)dag Gamma_a Psi^(lam) = c x_a``."""
    return 2 * energy(label, lam)


def _cluster(values, tol=CLUSTER_TOL):
    """Group indices of ``values`` (assumed sorted descending) into clusters."""
    groups = []
    for i, v in enumerate(values):
        if groups and abs(values[groups[-1][-1]] - v) < tol:
            groups[-1].append(i)
        else:
            groups.append([i])
    return groups


def _refine(basis, ops):
    """Split ``basis`` into joint eigenvectors of commuting ``ops`` (descending)."""
    if not ops:
        return [basis]
    op = basis.conj().T @ ops[0] @ basis
    w, v = np.linalg.eigh((op + op.conj().T) / 2)
    w, v = w[::-1], v[:, ::-1]
    out = []
    for grp in _cluster(w):
        out.extend(_refine(basis @ v[:, grp], ops[1:]))
    return out


def _leading(vec):
    """Index of the first component of (near) maximal magnitude."""
    mags = np.abs(vec)
    return int(np.flatnonzero(mags >= mags.max() * (1 - 1e-9))[0])


def _phase_fix_largest(vec):
    i = _leading(vec)
    return vec * (abs(vec[i]) / vec[i])


def so2k_diagonalizer(g):
    """Unitary ``V`` with ``V^dag Gamma_2k V`` diagonal and descending.

    Inside each positive eigenspace the basis diagonalises the Cartan
    generators of the SO(2k-1) stabiliser. For SO(4) the vectors are ordered
    by descending weight with Condon-Shortley phases, so the stabiliser
    generators become standard spin matrices; otherwise they are ordered by
    the position of their largest component, which is made real positive. Negative eigenspaces are ``-G`` times the
    positive ones, ``G`` being the chirality.

    Returns ``(V, levels)`` where ``levels`` lists ``(lam, slice)``.
    """
    if g.odd:
        raise ValueError("only even groups need a separate diagonaliser")
    k = g.k
    top = g.gammas[-1]
    w, U = np.linalg.eigh(top)
    w, U = w[::-1], U[:, ::-1]
    gens = g.generators
    cartan = [gens[2 * j, 2 * j + 1] for j in range(k - 2, -1, -1)]
    pos_blocks = []
    for grp in _cluster(w):
        val = float(np.mean(w[grp]))
        if val < 0:
            continue
        pieces = _refine(U[:, grp], cartan)
        cols = np.hstack([_canonical_piece(p) for p in pieces])
        if k == 2:
            cols = _condon_shortley(cols, gens)
        else:
            cols = cols[:, np.argsort([_leading(c) for c in cols.T], kind="stable")]
        pos_blocks.append((val, cols))
    G = g.chirality
    columns = [c for _, c in pos_blocks] + [-G @ c for _, c in reversed(pos_blocks)]
    V = np.hstack(columns)
    levels = []
    start = 0
    for val, c in pos_blocks:
        lam = Fraction(val).limit_denominator(4) - HALF
        levels.append((lam, slice(start, start + c.shape[1])))
        start += c.shape[1]
    for val, c in reversed(pos_blocks):
        lam = -(Fraction(val).limit_denominator(4) - HALF)
        levels.append((lam, slice(start, start + c.shape[1])))
        start += c.shape[1]
    return V, levels


def _canonical_piece(piece):
    if piece.shape[1] == 1:
        return _phase_fix_largest(piece[:, 0])[:, None]
    cols = [_phase_fix_largest(c) for c in piece.T]
    cols.sort(key=_leading)
    return np.array(cols).T


def _condon_shortley(cols, gens):
    """Fix relative phases so that ``<m-1| S_- |m>`` is real and positive."""
    lower = gens[1, 2] - 1j * gens[2, 0]
    out = [cols[:, 0]]
    for i in range(1, cols.shape[1]):
        v = cols[:, i]
        amp = np.vdot(v, lower @ out[-1])
        out.append(v * (amp / abs(amp)) if abs(amp) > 1e-12 else v)
    return np.array(out).T


def level_basis(g):
    """``(W, levels)``: working basis in which ``H`` at the north pole is diagonal.

    For odd groups built here ``W`` is the identity.
    """
    if not g.odd:
        return so2k_diagonalizer(g)
    top = g.gammas[-1]
    diag = np.diag(top).real
    if np.allclose(top, np.diag(diag)) and np.all(np.diff(diag) <= CLUSTER_TOL):
        W = np.eye(g.dim, dtype=np.complex128)
        vals = diag
    else:
        vals, W = np.linalg.eigh(top)
        vals, W = vals[::-1], W[:, ::-1]
    levels = []
    for grp in _cluster(vals):
        lam = Fraction(float(np.mean(vals[grp])) / 2).limit_denominator(4)
        levels.append((lam, slice(grp[0], grp[-1] + 1)))
    return W, levels


class FrameBuilder:
    """Precomputed rotation factors for batched frames and their derivatives."""

    def __init__(self, g: GammaSet):
        self.g = g
        self.d = g.n - 1
        self.chain = rotation_chain(self.d)
        self.W, self.levels = level_basis(g)
        self._eig = {}
        for _, a, b in self.chain:
            if (a, b) not in self._eig:
                w, v = np.linalg.eigh(g.generators[a, b])
                self._eig[(a, b)] = (w, v)

    def level_slice(self, lam):
        lam = Fraction(lam)
        for l, s in self.levels:
            if l == lam:
                return s
        raise KeyError(f"no level {lam}; available {[str(l) for l, _ in self.levels]}")

    def factors(self, angles):
        """Rotation factors ``U_j`` with shape ``(m, P, D, D)``."""
        a = np.atleast_2d(angles)
        out = []
        for pos, i, j in self.chain:
            w, v = self._eig[(i, j)]
            phase = np.exp(1j * a[:, pos, None] * w[None, :])
            out.append((v[None] * phase[:, None, :]) @ v.conj().T)
        return np.array(out)

    def frames(self, angles, derivatives=True):
        """``(Psi W, d(Psi W)/d angle)`` for a batch of angle vectors.

        Shapes ``(P, D, D)`` and ``(P, d, D, D)``.
        """
        a = np.atleast_2d(np.asarray(angles, dtype=float))
        U = self.factors(a)
        m = len(self.chain)
        P, D = a.shape[0], self.g.dim
        eye = np.broadcast_to(np.eye(D, dtype=np.complex128), (P, D, D))
        left = [eye]
        for j in range(m):
            left.append(left[-1] @ U[j])
        psi = left[-1] @ self.W
        if not derivatives:
            return psi, None
        right = [None] * (m + 1)
        right[m] = np.broadcast_to(self.W, (P, D, D))
        for j in range(m - 1, -1, -1):
            right[j] = U[j] @ right[j + 1]
        dpsi = np.zeros((P, self.d, D, D), dtype=np.complex128)
        for j, (pos, i, k) in enumerate(self.chain):
            dpsi[:, pos] += left[j] @ (1j * self.g.generators[i, k]) @ right[j]
        return psi, dpsi


@dataclass
class CoherentFrame:
    """Frame ``Psi`` at one chart point with its angle derivatives.

    Columns of ``psi`` are grouped into levels; ``psi[:, levels[lam]]`` is the
    coherent block ``Psi^(lam)``.
    """

    gammaset: GammaSet
    chart: AngleChart
    psi: np.ndarray
    dpsi: np.ndarray
    levels: list

    def level_slice(self, lam):
        lam = Fraction(lam)
        for l, s in self.levels:
            if l == lam:
                return s
        raise KeyError(f"no level {lam}")

    @property
    def lambdas(self):
        return [l for l, _ in self.levels]

    def block(self, lam):
        return self.psi[:, self.level_slice(lam)]

    def dblock(self, lam):
        return self.dpsi[:, :, self.level_slice(lam)]

    def energies(self):
        return {lam: energy(self.gammaset.label, lam) for lam in self.lambdas}


def frame_builder(g):
    """:class:`FrameBuilder` for ``g``, cached on the gamma set."""
    fb = g.meta.get("_frame_builder")
    if fb is None:
        fb = FrameBuilder(g)
        g.meta["_frame_builder"] = fb
    return fb


def nonlinear_realization(g, chart):
    """Coherent frame of ``g`` at ``chart`` (a chart on ``S^(n-1)``)."""
    if not isinstance(chart, AngleChart):
        chart = AngleChart(tuple(chart))
    if chart.d != g.n - 1:
        raise ValueError(f"SO({g.n}) frames need charts on S^{g.n - 1}, got S^{chart.d}")
    fb = frame_builder(g)
    psi, dpsi = fb.frames(chart.array)
    return CoherentFrame(g, chart, psi[0], dpsi[0], fb.levels)


def coherent_block(frame, lam):
    """Columns of the frame spanning level ``lam``."""
    return frame.block(lam)


def frame_by_exponential(g, chart):
    """``exp(i theta_d sum_mu y_mu Sigma_{mu, d+1}) W`` via dense ``expm``.

    Independent of the factorised product; used as a cross-check.
    """
    a = chart.array
    d = chart.d
    x = sphere_point(a)
    s = np.linalg.norm(x[:d])
    y = x[:d] / s if s > 0 else np.eye(d)[0]
    gen = sum(y[m] * g.generators[m, d] for m in range(d))
    W, _ = level_basis(g)
    return expm(1j * a[0] * gen) @ W


def diagonal_hamiltonian(g):
    """``diag`` of the north-pole Hamiltonian in the working basis."""
    _, levels = level_basis(g)
    vals = np.zeros(g.dim)
    for lam, s in levels:
        vals[s] = float(energy(g.label, lam))
    return vals


def diagonalization_error(frame):
    """``max |Psi^dag H Psi - diag(E)|``."""
    g = frame.gammaset
    H = g.hamiltonian(frame.chart.point())
    rot = frame.psi.conj().T @ H @ frame.psi
    return float(np.abs(rot - np.diag(diagonal_hamiltonian(g))).max())


def bloch_expectation(frame, lam):
    """``Psi^(lam)dag Gamma_a Psi^(lam)`` stacked over ``a``."""
    blk = frame.block(lam)
    return np.einsum("ik,aij,jl->akl", blk.conj(), frame.gammaset.gammas, blk)

"""Large-spin gamma matrices for fuzzy hyperspheres.

Odd groups SO(2k+1) use the symmetric-Fock (Schwinger boson) construction:
each minimal gamma matrix is promoted to a one-body operator on ``2S``
bosons in ``2^k`` modes and then projected onto the irreducible component
with the top quadratic Casimir ``k S (S + k)``. Even groups SO(2k) are
obtained by keeping the ``lambda = +-1/2`` eigenspaces of the last odd
gamma.
"""

from dataclasses import dataclass, field
from fractions import Fraction
import functools
import itertools
import math

import numpy as np
import scipy.sparse as sp

from . import kernels
from .spin_algebra import (
    SpinLabel,
    irrep_dim,
    levi_civita,
    minimal_gammas,
    model_dim,
    so4_spin_generators,
    so_generators,
)

CLUSTER_TOL = 1e-6


@dataclass
class GammaSet:
    """Gamma matrices, rotation generators and (for even groups) chirality.

    ``gammas`` has shape ``(n, D, D)`` and ``generators`` shape
    ``(n, n, D, D)`` with ``generators[a, b] = -generators[b, a]``.
    """

    n: int
    twoS: int
    gammas: np.ndarray
    generators: np.ndarray
    chirality: np.ndarray = None
    construction: str = "oscillator"
    meta: dict = field(default_factory=dict)

    def __post_init__(self):
        self.label = SpinLabel(self.n, self.twoS)
        if self.gammas.shape[0] != self.n:
            raise ValueError("need one gamma matrix per vector index")
        if self.n % 2 == 0 and self.chirality is None:
            raise ValueError("even groups need a chirality matrix")

    @property
    def k(self):
        return self.n // 2

    @property
    def dim(self):
        return self.gammas.shape[-1]

    @property
    def odd(self):
        return self.n % 2 == 1

    @property
    def S(self):
        return Fraction(self.twoS, 2)

    @property
    def diagonal_gamma(self):
        """The gamma matrix whose eigenbasis labels the coherent blocks."""
        return self.gammas[-1]

    def hamiltonian(self, x):
        """``H = sum_a x_a Gamma_a / 2``."""
        return np.tensordot(np.asarray(x, dtype=float), self.gammas, axes=1) / 2


def _sparse(occ, mat):
    rows, cols, vals = kernels.one_body_coo(occ, mat)
    dim = occ.shape[0]
    return sp.csr_matrix((vals, (rows, cols)), shape=(dim, dim))


def _leading_index(vec):
    mags = np.abs(vec)
    return int(np.flatnonzero(mags >= mags.max() * (1 - 1e-9))[0])


def _fix_phase(vec):
    i = _leading_index(vec)
    return vec * (abs(vec[i]) / vec[i])


def build_so2k1_gammas(k, twoS):
    """SO(2k+1) gamma matrices for spin ``twoS/2``; ``twoS=1`` gives the minimal set.

    The last gamma is diagonal with entries ``2 lambda`` in descending order.
    """
    if k < 1 or twoS < 1:
        raise ValueError("k and twoS must be positive")
    n = 2 * k + 1
    S = Fraction(twoS, 2)
    gam = minimal_gammas(k)
    sig = so_generators(gam)
    modes = 2**k
    occ = kernels.occupation_basis(modes, twoS)
    big_g = [_sparse(occ, g) for g in gam]
    big_sig = {(a, b): _sparse(occ, sig[a, b]) for a in range(n) for b in range(a + 1, n)}

    lam2 = np.rint(big_g[-1].diagonal().real).astype(int)
    # Cartan weights of SO(2k): Sigma_{12}, Sigma_{34}, ... are diagonal
    cartan = [np.rint(2 * big_sig[(2 * m, 2 * m + 1)].diagonal().real).astype(int) for m in range(k)]
    order = sorted(range(len(occ)), key=lambda i: -lam2[i])
    casimir = sum((s @ s) for s in big_sig.values()).tocsr()
    target = k * S * (S + k)

    columns = []
    for lam_val, members in itertools.groupby(order, key=lambda i: lam2[i]):
        members = list(members)
        sectors = {}
        for i in members:
            sectors.setdefault(tuple(c[i] for c in cartan), []).append(i)
        picked = []
        for idx in sectors.values():
            block = casimir[idx][:, idx].toarray()
            w, v = np.linalg.eigh(block)
            keep = np.abs(w - float(target)) < CLUSTER_TOL
            for col in v[:, keep].T:
                vec = np.zeros(len(occ), dtype=np.complex128)
                vec[idx] = col
                picked.append(_fix_phase(vec))
        picked.sort(key=_leading_index)
        columns.extend(picked)
    P = np.array(columns).T
    expected = irrep_dim(n, twoS)
    if P.shape[1] != expected:
        raise RuntimeError(f"projection kept {P.shape[1]} states, expected {expected}")
    Pc = P.conj().T
    gammas = np.array([Pc @ (g @ P) for g in big_g])
    gens = np.zeros((n, n, expected, expected), dtype=np.complex128)
    for (a, b), s in big_sig.items():
        gens[a, b] = Pc @ (s @ P)
        gens[b, a] = -gens[a, b]
    # the last gamma is diagonal by construction; remove round-off
    gammas[-1] = np.diag(np.diag(gammas[-1]).real)
    return GammaSet(
        n,
        twoS,
        gammas,
        gens,
        construction="oscillator",
        meta={"fock_dim": len(occ), "backend": kernels.BACKEND},
    )


def restrict_to_so2k(parent):
    """SO(2k) set from an SO(2k+1) set with odd ``twoS``.

    Keeps the eigenspaces of the last parent gamma with eigenvalues ``+1``
    and ``-1`` and projects the first ``2k`` gammas and their generators.
    """
    if not parent.odd:
        raise ValueError("parent must be an odd-group set")
    if parent.twoS % 2 == 0:
        raise ValueError(f"SO({parent.n - 1}) requires odd twoS, got {parent.twoS}")
    last = parent.gammas[-1]
    if np.allclose(last, np.diag(np.diag(last))):
        vals = np.diag(last).real
        plus = np.flatnonzero(np.abs(vals - 1) < CLUSTER_TOL)
        minus = np.flatnonzero(np.abs(vals + 1) < CLUSTER_TOL)
        basis = np.eye(parent.dim)[:, np.concatenate([plus, minus])]
        n_plus = len(plus)
    else:
        w, v = np.linalg.eigh(last)
        plus = v[:, np.abs(w - 1) < CLUSTER_TOL]
        minus = v[:, np.abs(w + 1) < CLUSTER_TOL]
        basis = np.hstack([plus, minus])
        n_plus = plus.shape[1]
    m = parent.n - 1
    bc = basis.conj().T
    gammas = bc @ parent.gammas[:m] @ basis
    gens = bc @ parent.generators[:m, :m] @ basis
    dim = basis.shape[1]
    chir = np.diag(np.concatenate([np.ones(n_plus), -np.ones(dim - n_plus)])).astype(np.complex128)
    return GammaSet(
        m,
        parent.twoS,
        gammas,
        gens,
        chirality=chir,
        construction="restricted",
        meta={"parent": parent.construction},
    )


def _so4_offdiag_blocks(twoS):
    """The four ``Y^(+,-)`` blocks mapping the lower chirality block to the upper."""
    S = Fraction(twoS, 2)
    a = (2 * S + 3) / 4
    b = (2 * S + 1) / 4
    big = [b - i for i in range(int(2 * b) + 1)]  # spin (2S+1)/4
    small = [(2 * S - 1) / 4 - i for i in range(int((2 * S - 1) / 2) + 1)]  # spin (2S-1)/4
    rows = [(mL, mR) for mL in big for mR in small]
    cols = [(mL, mR) for mL in small for mR in big]
    ridx = {r: i for i, r in enumerate(rows)}
    Y = np.zeros((4, len(rows), len(cols)), dtype=np.complex128)
    pref = 1.0 / float(2 * S + 3)
    h = Fraction(1, 2)
    for c, (mL, mR) in enumerate(cols):
        up_up = ridx.get((mL + h, mR + h))
        dn_dn = ridx.get((mL - h, mR - h))
        up_dn = ridx.get((mL + h, mR - h))
        dn_up = ridx.get((mL - h, mR + h))
        for mu in range(1, 5):
            ph = (-1j) ** mu
            sgn = (-1) ** mu
            if mu <= 2:
                if up_up is not None:
                    Y[mu - 1, up_up, c] += pref * ph * math.sqrt((a + mL) * (b - mR))
                if dn_dn is not None:
                    Y[mu - 1, dn_dn, c] -= pref * ph * sgn * math.sqrt((a - mL) * (b + mR))
            else:
                if up_dn is not None:
                    Y[mu - 1, up_dn, c] -= pref * ph * math.sqrt((a + mL) * (b + mR))
                if dn_up is not None:
                    Y[mu - 1, dn_up, c] -= pref * ph * sgn * math.sqrt((a - mL) * (b - mR))
    return Y


def build_so4_gammas_closed_form(twoS):
    """SO(4) gamma matrices from the explicit ``(s_L, s_R)`` matrix elements.

    Upper block: ``(s_L, s_R) = ((2S+1)/4, (2S-1)/4)``; lower block swapped.
    Within each block the basis is ``(m_L, m_R)`` descending lexicographically.
    """
    if twoS % 2 == 0:
        raise ValueError(f"SO(4) requires odd twoS, got {twoS}")
    Y = _so4_offdiag_blocks(twoS)
    up, lo = Y.shape[1], Y.shape[2]
    scale = -(twoS + 3)
    gammas = np.zeros((4, up + lo, up + lo), dtype=np.complex128)
    for mu in range(4):
        gammas[mu, :up, up:] = scale * Y[mu]
        gammas[mu, up:, :up] = scale * Y[mu].conj().T
    t_big = (twoS + 1) // 2  # 2 s for s = (2S+1)/4
    t_small = (twoS - 1) // 2
    gens = np.zeros((4, 4, up + lo, up + lo), dtype=np.complex128)
    gens[:, :, :up, :up] = so4_spin_generators(t_big, t_small)
    gens[:, :, up:, up:] = so4_spin_generators(t_small, t_big)
    chir = np.diag(np.concatenate([np.ones(up), -np.ones(lo)])).astype(np.complex128)
    return GammaSet(4, twoS, gammas, gens, chirality=chir, construction="closed-form")


def build_gammas(group, twoS, construction="auto"):
    """Gamma set for ``SO(n)`` at spin ``twoS/2``.

    ``construction`` is ``"auto"``, ``"oscillator"``, ``"restricted"``,
    ``"closed-form"`` (SO(4) only) or ``"minimal"`` (``twoS = 1``).
    """
    label = SpinLabel.of(group, twoS)
    n, k = label.n, label.k
    if construction == "minimal" and twoS != 1:
        raise ValueError("the minimal construction has twoS = 1")
    if label.odd:
        if construction not in ("auto", "oscillator", "minimal"):
            raise ValueError(f"construction {construction!r} not available for SO({n})")
        g = build_so2k1_gammas(k, twoS)
        if construction == "minimal":
            g.construction = "minimal"
        return g
    if construction == "closed-form":
        if n != 4:
            raise ValueError("closed-form matrices exist for SO(4) only")
        return build_so4_gammas_closed_form(twoS)
    if construction not in ("auto", "restricted", "minimal"):
        raise ValueError(f"construction {construction!r} not available for SO({n})")
    g = restrict_to_so2k(build_so2k1_gammas(k, twoS))
    if construction == "minimal":
        g.construction = "minimal"
    return g


@functools.lru_cache(maxsize=32)
def cached_gammas(group, twoS, construction="auto"):
    """Memoised :func:`build_gammas`; callers must not mutate the matrices."""
    return build_gammas(group, twoS, construction)


def nambu_bracket(mats):
    """Fully antisymmetrised product ``sum_perm sgn(perm) M_p1 ... M_pm``.

    Expands along the first factor over subsets, which costs ``m 2^(m-1)``
    matrix products instead of ``m!``.
    """
    mats = [np.asarray(m) for m in mats]
    m = len(mats)
    dim = mats[0].shape[0]
    table = {0: np.eye(dim, dtype=np.result_type(*mats, np.complex128))}
    for size in range(1, m + 1):
        for combo in itertools.combinations(range(m), size):
            mask = sum(1 << i for i in combo)
            acc = np.zeros_like(table[0])
            for pos, i in enumerate(combo):
                term = mats[i] @ table[mask & ~(1 << i)]
                acc = acc + term if pos % 2 == 0 else acc - term
            table[mask] = acc
    return table[(1 << m) - 1]


def _double_factorial_ratio(k, S):
    """``(2S + 2k - 2)!! / (2S)!!`` as a product of ``k - 1`` even steps."""
    val = Fraction(1)
    for j in range(1, k):
        val *= 2 * S + 2 * j
    return val


def casimir_value(label):
    """Expected scalar value of ``sum_a Gamma_a Gamma_a``."""
    S, k = label.S, label.k
    if label.odd:
        return 4 * S * (S + k)
    return Fraction(1, 2) * (2 * S + 1) * (2 * S + 2 * k - 1)


def bracket_value(label):
    """Expected coefficient of the top Nambu bracket (complex)."""
    S, k = label.S, label.k
    dfact = math.prod(range(2, 2 * k + 1, 2))
    mag = float(dfact * _double_factorial_ratio(k, S))
    phase = 1j**k
    return phase * mag if label.odd else -phase * mag


def generator_casimir_value(label):
    """Expected ``sum_{a<b} Sigma_ab^2``."""
    S, k = label.S, label.k
    if label.odd:
        return k * S * (S + k)
    return (k - 1) * S * (S + k) + Fraction(1, 4)


def expected_spectrum(label):
    """``{eigenvalue: multiplicity}`` of each gamma matrix."""
    spec = {}
    for lam in label.levels():
        deg = irrep_dim(label.n - 1, label.twoS, lam if label.odd else abs(lam))
        val = 2 * lam if label.odd else lam + (Fraction(1, 2) if lam > 0 else Fraction(-1, 2))
        spec[val] = spec.get(val, 0) + deg
    return spec


def measured_spectrum(mat, tol=CLUSTER_TOL):
    """Cluster Hermitian eigenvalues into ``{rounded value: multiplicity}``."""
    w = np.linalg.eigvalsh(mat)
    out = {}
    start = 0
    for i in range(1, len(w) + 1):
        if i == len(w) or w[i] - w[i - 1] > tol:
            val = float(np.mean(w[start:i]))
            frac = Fraction(val).limit_denominator(8)
            out[frac if abs(float(frac) - val) < 1e-8 else val] = i - start
            start = i
    return out


@dataclass
class NambuReport:
    """Measured versus expected algebraic invariants of a gamma set."""

    label: SpinLabel
    casimir: float
    casimir_expected: float
    casimir_residual: float
    bracket: complex
    bracket_expected: complex
    bracket_residual: float
    generator_casimir: float
    generator_casimir_expected: float
    covariance_residual: float
    chirality_residual: float
    spectrum: dict
    spectrum_expected: dict

    def errors(self):
        rel = lambda a, b: abs(a - b) / max(abs(b), 1e-300)
        return {
            "casimir": max(rel(self.casimir, self.casimir_expected), self.casimir_residual),
            "bracket": max(rel(self.bracket, self.bracket_expected), self.bracket_residual),
            "generator_casimir": rel(self.generator_casimir, self.generator_casimir_expected),
            "covariance": self.covariance_residual,
            "chirality": self.chirality_residual,
        }

    def passed(self, tol=1e-8):
        return all(v <= tol for v in self.errors().values()) and self.spectrum == self.spectrum_expected


def verify_fuzzy_sphere(g):
    """Check the Casimir, Nambu bracket and covariance identities of ``g``."""
    label = g.label
    n, k, D = g.n, g.k, g.dim
    eye = np.eye(D)
    gams = list(g.gammas)

    cas = sum(a @ a for a in gams)
    c = np.trace(cas).real / D
    cas_res = np.linalg.norm(cas - c * eye) / (abs(c) * np.sqrt(D))

    if g.odd:
        combos = [(combo, [gams[i] for i in combo]) for combo in itertools.combinations(range(n), 2 * k)]
    else:
        combos = [
            (combo, [gams[i] for i in combo] + [g.chirality])
            for combo in itertools.combinations(range(n), 2 * k - 1)
        ]
    num = 0.0
    den = 0.0
    pairs = []
    for combo, mats in combos:
        (e,) = set(range(n)) - set(combo)
        ref = levi_civita(list(combo) + [e]) * gams[e]
        br = nambu_bracket(mats)
        num += np.vdot(ref, br)
        den += np.vdot(ref, ref).real
        pairs.append((br, ref))
    coef = num / den
    br_res = max(np.linalg.norm(br - coef * ref) / np.linalg.norm(coef * ref) for br, ref in pairs)

    gens = g.generators
    gen_cas = sum(gens[a, b] @ gens[a, b] for a in range(n) for b in range(a + 1, n))
    gc = np.trace(gen_cas).real / D

    cov = 0.0
    scale = max(np.abs(gams).max(), 1.0)
    for a in range(n):
        for b in range(n):
            for cidx in range(n):
                lhs = gens[a, b] @ gams[cidx] - gams[cidx] @ gens[a, b]
                rhs = 1j * ((a == cidx) * gams[b] - (b == cidx) * gams[a])
                cov = max(cov, np.abs(lhs - rhs).max() / scale)

    chir = 0.0
    if not g.odd:
        G = g.chirality
        chir = max(np.abs(G @ a + a @ G).max() for a in gams)
        chir = max(chir, np.abs(G @ G - eye).max())

    spectrum = measured_spectrum(gams[-1])
    return NambuReport(
        label=label,
        casimir=c,
        casimir_expected=float(casimir_value(label)),
        casimir_residual=cas_res,
        bracket=complex(coef),
        bracket_expected=bracket_value(label),
        bracket_residual=br_res,
        generator_casimir=gc,
        generator_casimir_expected=float(generator_casimir_value(label)),
        covariance_residual=cov,
        chirality_residual=chir,
        spectrum=spectrum,
        spectrum_expected=expected_spectrum(label),
    )


def unitary_invariants(g, max_order=4):
    """Basis-independent fingerprints: ``tr(Gamma_a Gamma_b)`` and word traces."""
    gams = g.gammas
    gram = np.einsum("aij,bji->ab", gams, gams)
    words = {}
    for order in range(1, max_order + 1):
        for word in itertools.product(range(g.n), repeat=order):
            if word[0] != min(word):
                continue
            mat = np.eye(g.dim, dtype=np.complex128)
            for i in word:
                mat = mat @ gams[i]
            words[word] = np.trace(mat)
    return gram, words


def model_size(group, twoS):
    """Matrix size of the gamma set without building it."""
    return model_dim(SpinLabel.of(group, twoS))

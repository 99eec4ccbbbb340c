"""Spin matrices, minimal gamma matrices, rotation generators and
exact representation-theory bookkeeping for SO(n).

Spin magnitudes are carried as ``twoS = 2S`` integers. Half-integer labels
such as ``lambda`` are :class:`fractions.Fraction` instances.
"""

from dataclasses import dataclass
from fractions import Fraction
import math

import numpy as np

SIGMA = np.array(
    [
        [[0, 1], [1, 0]],
        [[0, -1j], [1j, 0]],
        [[1, 0], [0, -1]],
    ],
    dtype=np.complex128,
)


def half(x):
    """Convert ``x`` into an exact half-integer ``Fraction``.

    Raises ``ValueError`` if ``2x`` is not an integer.
    """
    f = Fraction(x).limit_denominator(2) if isinstance(x, float) else Fraction(x)
    if (2 * f).denominator != 1 or (isinstance(x, float) and abs(float(f) - x) > 1e-12):
        raise ValueError(f"{x!r} is not a half-integer")
    return f


def parse_group(group):
    """Return ``n`` for a group label such as ``"so5"``, ``"SO(5)"`` or ``5``."""
    if isinstance(group, (int, np.integer)):
        n = int(group)
    else:
        text = str(group).strip().lower().replace("(", "").replace(")", "")
        if text.startswith("so"):
            text = text[2:]
        try:
            n = int(text)
        except ValueError:
            raise ValueError(f"unknown group label {group!r}") from None
    if n < 3:
        raise ValueError(f"SO({n}) is not supported; n must be at least 3")
    return n


def rank(n):
    """``k`` such that ``n = 2k + 1`` or ``n = 2k``."""
    return n // 2


@dataclass(frozen=True)
class SpinLabel:
    """SO(n) group together with a spin magnitude ``S = twoS / 2``.

    Even orthogonal groups only admit half-odd spins.
    """

    n: int
    twoS: int

    def __post_init__(self):
        if self.n < 3:
            raise ValueError("n must be at least 3")
        if self.twoS < 1:
            raise ValueError("twoS must be a positive integer")
        if self.n % 2 == 0 and self.twoS % 2 == 0:
            raise ValueError(f"SO({self.n}) requires odd twoS, got {self.twoS}")

    @classmethod
    def of(cls, group, twoS):
        return cls(parse_group(group), int(twoS))

    @property
    def k(self):
        return rank(self.n)

    @property
    def odd(self):
        return self.n % 2 == 1

    @property
    def S(self):
        return Fraction(self.twoS, 2)

    def levels(self):
        """Allowed ``lambda`` values in descending order."""
        S = self.S
        if self.odd:
            return [S - j for j in range(self.twoS + 1)]
        pos = [S - j for j in range((self.twoS + 1) // 2)]
        return pos + [-lam for lam in reversed(pos)]

    def __str__(self):
        return f"SO({self.n}), 2S={self.twoS}"


def spin_matrices(twoS):
    """``(S_x, S_y, S_z)`` for spin ``twoS / 2`` in the descending ``m`` basis."""
    if twoS < 0:
        raise ValueError("twoS must be non-negative")
    S = twoS / 2.0
    m = S - np.arange(twoS + 1)
    # <m+1| S_+ |m> sits one row above the diagonal in descending order
    plus = np.diag(np.sqrt((S - m[1:]) * (S + m[1:] + 1)), k=1).astype(np.complex128)
    minus = plus.conj().T
    sx = (plus + minus) / 2
    sy = (plus - minus) / 2j
    sz = np.diag(m).astype(np.complex128)
    return sx, sy, sz


def minimal_gammas(k):
    """The ``2k + 1`` Hermitian ``2^k``-dimensional SO(2k+1) gamma matrices.

    Built recursively from Pauli matrices; the last one is
    ``diag(1, ..., -1, ...)``.
    """
    if k < 1:
        raise ValueError("k must be at least 1")
    gam = list(SIGMA)
    for _ in range(1, k):
        dim = gam[0].shape[0]
        eye = np.eye(dim, dtype=np.complex128)
        zero = np.zeros_like(eye)
        new = []
        for g in gam + [None]:
            lower = eye if g is None else -1j * g
            upper = eye if g is None else 1j * g
            new.append(np.block([[zero, upper], [lower, zero]]))
        new.append(np.block([[eye, zero], [zero, -eye]]))
        gam = new
    return np.array(gam)


def so_generators(gammas):
    """``Sigma[a, b] = -(i/4) [Gamma_a, Gamma_b]`` as an ``(n, n, D, D)`` array."""
    g = np.asarray(gammas)
    prod = np.einsum("aij,bjk->abik", g, g)
    return -0.25j * (prod - prod.transpose(1, 0, 2, 3))


def levi_civita(indices):
    """Sign of the permutation ``indices`` (0 if any index repeats)."""
    idx = list(indices)
    if len(set(idx)) != len(idx):
        return 0
    sign = 1
    for i in range(len(idx)):
        for j in range(i + 1, len(idx)):
            if idx[i] > idx[j]:
                sign = -sign
    return sign


def thooft_tensor(sign=+1):
    """'t Hooft symbols ``eta[i, mu, nu]`` (0-based, ``i < 3``, ``mu, nu < 4``).

    ``sign=+1`` gives the self-dual set, ``-1`` the anti-self-dual set.
    """
    s = 1 if sign > 0 else -1
    eta = np.zeros((3, 4, 4))
    for i in range(3):
        for mu in range(4):
            for nu in range(4):
                val = levi_civita((mu, nu, i, 3))
                if mu == i and nu == 3:
                    val += s
                if nu == i and mu == 3:
                    val -= s
                eta[i, mu, nu] = val
    return eta


def so4_spin_generators(twoL, twoR):
    """SO(4) generators of the ``(s_L, s_R)`` representation, ``(4, 4, D, D)``.

    The basis is ``|m_L> (x) |m_R>`` with both labels descending.
    """
    left = spin_matrices(twoL)
    right = spin_matrices(twoR)
    eye_l = np.eye(twoL + 1)
    eye_r = np.eye(twoR + 1)
    etap = thooft_tensor(+1)
    etam = thooft_tensor(-1)
    dim = (twoL + 1) * (twoR + 1)
    out = np.zeros((4, 4, dim, dim), dtype=np.complex128)
    for i in range(3):
        sl = np.kron(left[i], eye_r)
        sr = np.kron(eye_l, right[i])
        out += etap[i][:, :, None, None] * sl + etam[i][:, :, None, None] * sr
    return out


def _fact(n):
    return math.factorial(int(n))


def clebsch_gordan(j1, m1, j2, m2, J, M):
    """``<j1 m1; j2 m2 | J M>`` in the Condon-Shortley convention.

    Evaluated by the Racah sum in exact rational arithmetic; only the final
    square root is taken in floating point.
    """
    j1, m1, j2, m2, J, M = (half(v) for v in (j1, m1, j2, m2, J, M))
    if M != m1 + m2:
        return 0.0
    if not (abs(j1 - j2) <= J <= j1 + j2) or (j1 + j2 + J).denominator != 1:
        return 0.0
    for j, m in ((j1, m1), (j2, m2), (J, M)):
        if abs(m) > j or (j - m).denominator != 1:
            return 0.0
    pref = Fraction(
        (2 * J + 1) * _fact(J + j1 - j2) * _fact(J - j1 + j2) * _fact(j1 + j2 - J),
        _fact(j1 + j2 + J + 1),
    )
    pref *= (
        _fact(J + M) * _fact(J - M) * _fact(j1 - m1) * _fact(j1 + m1) * _fact(j2 - m2) * _fact(j2 + m2)
    )
    total = Fraction(0)
    kmin = max(0, int(j2 - J - m1), int(j1 - J + m2))
    kmax = min(int(j1 + j2 - J), int(j1 - m1), int(j2 + m2))
    for t in range(kmin, kmax + 1):
        den = (
            _fact(t)
            * _fact(j1 + j2 - J - t)
            * _fact(j1 - m1 - t)
            * _fact(j2 + m2 - t)
            * _fact(J - j2 + m1 + t)
            * _fact(J - j1 - m2 + t)
        )
        total += Fraction((-1) ** t, den)
    if total == 0:
        return 0.0
    sign = 1.0 if total > 0 else -1.0
    return sign * math.sqrt(pref * total * total)


def dim_odd(k, S, lam):
    """Dimension formula for the SO(2k+1) irrep ``[S, ..., S, lam]`` as a Fraction."""
    S, lam = Fraction(S), Fraction(lam)
    val = (2 * lam + 1) / (2 * S + 1)
    for j in range(1, k):
        val *= (S - lam + k - j) / Fraction(k - j)
        val *= (S + lam + k - j + 1) / (2 * S + k - j + 1)
    for l in range(1, k + 1):
        for i in range(1, l + 1):
            val *= (2 * S + l + i - 1) / Fraction(l + i - 1)
    return val


def dim_even(k, S, lam):
    """Dimension formula for the SO(2k) irrep ``[S, ..., S, lam]`` as a Fraction."""
    S, lam = Fraction(S), Fraction(lam)
    val = Fraction(1)
    for j in range(1, k):
        val *= ((S + j) ** 2 - lam**2) / Fraction(j * j)
    for l in range(1, k - 1):
        for i in range(1, k - l):
            val *= (2 * S + 2 * l + i) / Fraction(2 * l + i)
    return val


def irrep_dim(group, twoS, lam=None):
    """Integer dimension of the SO(n) irrep labelled by ``(S, lam)``.

    For odd ``n`` the default ``lam = S`` gives the fuzzy-sphere matrix size.
    Labels whose formula is not a positive integer raise ``ValueError``.
    """
    n = parse_group(group) if not isinstance(group, int) else group
    S = Fraction(twoS, 2)
    if lam is None:
        if n % 2 == 0:
            raise ValueError("even groups need an explicit lam")
        lam = S
    lam = half(lam)
    if (S - lam).denominator != 1 or abs(lam) > S:
        raise ValueError(f"lam={lam} is not a valid weight for S={S}")
    k = n // 2
    if n % 2 == 1:
        if lam < 0:
            raise ValueError("odd groups need lam >= 0")
        val = dim_odd(k, S, lam)
    else:
        val = dim_even(k, S, lam)
    if val.denominator != 1 or val <= 0:
        raise ValueError(f"SO({n}) label S={S}, lam={lam} gives non-integer dimension {val}")
    return int(val)


def level_degeneracy(label, lam):
    """Number of states at level ``lam`` of the model ``label``.

    Odd groups: ``D_SO(2k)(lam)``; even groups: ``D_SO(2k-1)(|lam|)``.
    """
    lam = half(lam)
    if label.odd:
        return irrep_dim(label.n - 1, label.twoS, lam)
    return irrep_dim(label.n - 1, label.twoS, abs(lam))


def model_dim(label):
    """Matrix size of the gamma matrices for ``label``."""
    if label.odd:
        return irrep_dim(label.n, label.twoS)
    return 2 * irrep_dim(label.n, label.twoS, Fraction(1, 2))

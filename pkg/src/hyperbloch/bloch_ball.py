"""Mixed states of the Zeeman-Dirac models on the Bloch ball.

A point ``X = r x`` of the ball (``0 <= r < 1``) is the state
``rho = (1/N) (1 + (r / h_1) H(x))`` where ``h_1`` is the largest energy of
``H``. This module computes its spectrum, entropy, trace distance and the
Bures metric together with curvature and volume of the Bloch ball.
"""

from dataclasses import dataclass
from fractions import Fraction
import math

import numpy as np

from .charts import AngleChart
from .spin_algebra import SpinLabel, irrep_dim, level_degeneracy, model_dim
from .zeeman_dirac import energy, frame_builder

HALF = Fraction(1, 2)


def top_energy(label):
    """``h_1``: ``S`` for odd groups, ``(S + 1/2)/2`` for even groups."""
    S = label.S
    return S if label.odd else (S + HALF) / 2


def _label(g_or_label):
    return g_or_label if isinstance(g_or_label, SpinLabel) else g_or_label.label


def _check_r(r):
    if not 0.0 <= r <= 1.0:
        raise ValueError(f"radius {r} outside [0, 1]")


def _h1(label, h1):
    return float(top_energy(label) if h1 is None else h1)


def density_matrix(g, r, x, h1=None):
    """``rho(r x)`` in the basis of ``g``; ``h1`` overrides the normalisation."""
    _check_r(r)
    N = g.dim
    return (np.eye(N) + (r / _h1(g.label, h1)) * g.hamiltonian(x)) / N


@dataclass
class BallDensity:
    """``rho`` at ball point ``r x`` with its closed-form spectrum."""

    gammas: object
    r: float
    x: np.ndarray
    rho: np.ndarray
    closed_spectrum: list

    def numeric_spectrum(self):
        return np.linalg.eigvalsh(self.rho)[::-1]

    def spectrum_error(self):
        closed = np.sort(np.concatenate([[p] * m for _, p, m in self.closed_spectrum]))[::-1]
        return float(np.abs(closed - self.numeric_spectrum()).max())


def density(g, r, x, h1=None):
    """:class:`BallDensity` for the model ``g`` at ``r x``."""
    x = np.asarray(x, dtype=float)
    if abs(np.linalg.norm(x) - 1) > 1e-9:
        raise ValueError("x must be a unit vector")
    return BallDensity(g, float(r), x, density_matrix(g, r, x, h1), spectrum(g, r, h1))


def spectrum(g_or_label, r, h1=None):
    """Closed-form ``[(lam, eigenvalue, multiplicity), ...]`` of ``rho``."""
    label = _label(g_or_label)
    N = model_dim(label)
    h1 = _h1(label, h1)
    out = []
    for lam in label.levels():
        p = (1 + r * float(energy(label, lam)) / h1) / N
        out.append((lam, p, level_degeneracy(label, lam)))
    return out


def _entropy_terms(pairs):
    return -sum(m * p * math.log(p) for p, m in pairs if p > 0)


def entropy_closed(g_or_label, r):
    """Von Neumann entropy from the closed-form spectrum."""
    _check_r(r)
    return _entropy_terms((p, m) for _, p, m in spectrum(g_or_label, r))


def entropy_numeric(g, r, x=None):
    """Von Neumann entropy from a numerical eigendecomposition of ``rho``."""
    if x is None:
        x = np.eye(g.n)[-1]
    w = np.linalg.eigvalsh(density_matrix(g, r, x))
    w = w[w > 1e-300]
    return float(-np.sum(w * np.log(w)))


def von_neumann_entropy(g, r, x=None, tol=1e-10):
    """Entropy of ``rho(r x)``; both routes are computed and must agree to ``tol``."""
    a = entropy_closed(g, r)
    b = entropy_numeric(g, r, x)
    if abs(a - b) > tol:
        raise ArithmeticError(f"entropy routes disagree: {a} vs {b}")
    return a


def minimal_entropy(k, r):
    """``k ln 2 - (1+r)/2 ln(1+r) - (1-r)/2 ln(1-r)`` for the minimal models."""
    _check_r(r)
    return k * math.log(2) - sum(0.5 * t * math.log(t) for t in (1 + r, 1 - r) if t > 0)


def trace_distance(rho, sigma):
    """``(1/2) sum |eig(rho - sigma)|``."""
    return 0.5 * float(np.sum(np.abs(np.linalg.eigvalsh(rho - sigma))))


def trace_distance_coefficient(g_or_label):
    """``c`` with ``L(rho, rho') = c |X - X'|``: ``sum |E_lam| D(lam) / (2 h_1 N)``.

    Follows from ``rho - rho' = (1/(2 N h_1)) (X - X') . Gamma`` whose
    spectrum is that of ``H`` scaled by ``|X - X'| / (N h_1)``.
    """
    label = _label(g_or_label)
    N = model_dim(label)
    h1 = top_energy(label)
    total = Fraction(0)
    for lam in label.levels():
        total += abs(energy(label, lam)) * level_degeneracy(label, lam)
    return total / (2 * h1 * N)


def trace_distance_coefficient_alternative(g_or_label):
    """The alternative normalisation ``c'`` (kept for comparison only).

    Odd groups: ``sum_lam |lam| D(lam) / (4 S N)``; even groups:
    ``sum_{lam>0} (2 lam + 1)/(2S + 1) D_SO(2k-1)(lam) / D_SO(2k)(1/2)``.
    """
    label = _label(g_or_label)
    S = label.S
    if label.odd:
        N = model_dim(label)
        total = sum(abs(lam) * level_degeneracy(label, lam) for lam in label.levels())
        return Fraction(total) / (4 * S * N)
    half_dim = irrep_dim(label.n, label.twoS, HALF)
    total = sum((2 * lam + 1) * level_degeneracy(label, lam) for lam in label.levels() if lam > 0)
    return Fraction(total) / ((2 * S + 1) * half_dim)


def fit_trace_distance(g, rng, samples=50):
    """Least-squares ``c`` from random pairs of ball points; returns ``(c, residual)``."""
    ratios = []
    for _ in range(samples):
        p = _random_ball_point(g.n, rng)
        q = _random_ball_point(g.n, rng)
        rp, rq = np.linalg.norm(p), np.linalg.norm(q)
        rho = density_matrix(g, rp, p / rp)
        sig = density_matrix(g, rq, q / rq)
        ratios.append(trace_distance(rho, sig) / np.linalg.norm(p - q))
    ratios = np.array(ratios)
    c = float(np.mean(ratios))
    return c, float(np.max(np.abs(ratios - c)) / c)


def _random_ball_point(n, rng, rmax=0.95):
    v = rng.normal(size=n)
    return v / np.linalg.norm(v) * rng.uniform(0.05, rmax)


def _coherent_parts(g, r, x, h1):
    """Populations ``p``, their radial slopes and the rotated ``drho`` components."""
    label = g.label
    h1 = _h1(label, h1)
    if r < 0 or r >= h1 / float(top_energy(label)):
        raise ValueError(f"radius {r} outside the open ball")
    x = np.asarray(x, dtype=float)
    x = x / np.linalg.norm(x)
    N = g.dim
    fb = frame_builder(g)
    chart = AngleChart.from_point(x)
    psi, _ = fb.frames(chart.array, derivatives=False)
    psi = psi[0]
    slope = np.zeros(N)
    for lam, sl in fb.levels:
        slope[sl] = float(energy(label, lam)) / (h1 * N)
    p = 1.0 / N + r * slope
    M = np.einsum("ji,ajk,kl->ail", psi.conj(), g.gammas, psi) / (2 * N * h1)
    return p, slope, M


def bures_metric(g, r, x, h1=None):
    """Bures metric in the Cartesian coordinates ``X_a = r x_a``, shape ``(n, n)``.

    Uses the coherent frame at ``x``, in which ``rho`` is diagonal. A custom
    ``h1`` may push the pure-state boundary beyond ``r = 1``; only positivity
    of ``rho`` is then required.
    """
    return bures_metric_jet(g, r, x, h1)[0]


def bures_metric_jet(g, r, x, h1=None):
    """``(B, dB/dr, d^2B/dr^2)`` at fixed direction ``x``.

    ``rho`` is linear in ``r`` and its eigenvectors do not depend on ``r``,
    so only the Hubner kernel ``1/(2 (p_i + p_j))`` varies and its radial
    derivatives are exact.
    """
    p, slope, M = _coherent_parts(g, r, x, h1)
    s = p[:, None] + p[None, :]
    ds = slope[:, None] + slope[None, :]
    kernels = (1 / (2 * s), -ds / (2 * s**2), ds**2 / s**3)
    return tuple(np.einsum("ij,aij,bji->ab", K, M, M).real for K in kernels)


def bures_metric_hubner(rho, drho):
    """Generic Bures metric from an eigendecomposition of ``rho``.

    ``drho`` stacks the coordinate derivatives of ``rho``.
    """
    w, U = np.linalg.eigh(rho)
    M = np.einsum("ji,ajk,kl->ail", U.conj(), drho, U)
    K = 1.0 / (2 * (w[:, None] + w[None, :]))
    return np.einsum("ij,aij,bji->ab", K, M, M).real


def fg_extract(B, x):
    """Split ``B = f 1 + g x x^T``; returns ``(f, g, residual)``."""
    x = np.asarray(x, dtype=float)
    x = x / np.linalg.norm(x)
    d = len(x) - 1
    xBx = float(x @ B @ x)
    f = (float(np.trace(B)) - xBx) / d
    gg = xBx - f
    res = float(np.abs(B - f * np.eye(len(x)) - gg * np.outer(x, x)).max())
    return f, gg, res


@dataclass
class RadialMetric:
    """Samples of ``ds^2 = (f + g) dr^2 + f r^2 dOmega_d^2``."""

    r: np.ndarray
    f: np.ndarray
    g: np.ndarray
    d: int

    @property
    def radial(self):
        return self.f + self.g


def radial_metric(gs, radii, x=None, h1=None):
    """Sample ``f(r), g(r)`` of the Bures metric of ``gs`` along direction ``x``."""
    if x is None:
        x = np.ones(gs.n) / np.sqrt(gs.n)
    f, g = [], []
    for r in radii:
        fr, gr, _ = fg_extract(bures_metric(gs, r, x, h1), x)
        f.append(fr)
        g.append(gr)
    return RadialMetric(np.asarray(radii, dtype=float), np.array(f), np.array(g), gs.n - 1)


def _five_point(y, h):
    """First and second derivatives at the centre of 5-sample stencils."""
    y = np.asarray(y)
    d1 = (y[..., 0] - 8 * y[..., 1] + 8 * y[..., 3] - y[..., 4]) / (12 * h)
    d2 = (-y[..., 0] + 16 * y[..., 1] - 30 * y[..., 2] + 16 * y[..., 3] - y[..., 4]) / (12 * h * h)
    return d1, d2


def warped_curvature(r, A, A_r, R, R_r, R_rr, d):
    """Ricci scalar and Kretschmann scalar of ``A dr^2 + R^2 dOmega_d^2``."""
    Rp = R_r / np.sqrt(A)
    Rpp = (R_rr - R_r * A_r / (2 * A)) / A
    radial = Rpp / R
    sphere = (1 - Rp**2) / R**2
    ricci = -2 * d * radial + d * (d - 1) * sphere
    kretsch = 4 * d * radial**2 + 2 * d * (d - 1) * sphere**2
    return ricci, kretsch


@dataclass
class CurvatureReport:
    r: np.ndarray
    ricci: np.ndarray
    kretschmann: np.ndarray
    singular: bool


def radial_curvature(samples: RadialMetric, bound=1e8):
    """Curvature scalars at interior points of uniformly spaced samples.

    Every point with a full five-point stencil is reported.
    """
    r = samples.r
    if len(r) < 5:
        raise ValueError("need at least five samples")
    h = np.diff(r)
    if not np.allclose(h, h[0], rtol=1e-9, atol=0):
        raise ValueError("samples must be uniformly spaced")
    h = h[0]
    A = samples.radial
    R = r * np.sqrt(samples.f)
    idx = np.arange(2, len(r) - 2)
    stencil = idx[:, None] + np.arange(-2, 3)[None, :]
    A_r, _ = _five_point(A[stencil], h)
    R_r, R_rr = _five_point(R[stencil], h)
    ricci, kr = warped_curvature(r[idx], A[idx], A_r, R[idx], R_r, R_rr, samples.d)
    return CurvatureReport(r[idx], ricci, kr, has_singularity(ricci, bound) or has_singularity(kr, bound))


def curvature_exact(gs, r, x=None, h1=None):
    """Ricci and Kretschmann scalars at one radius from exact radial derivatives."""
    if x is None:
        x = np.ones(gs.n) / np.sqrt(gs.n)
    jets = [fg_extract(B, x)[:2] for B in bures_metric_jet(gs, r, x, h1)]
    (f, g), (f1, g1), (f2, _) = jets
    rf = math.sqrt(f)
    R = r * rf
    R_r = rf + r * f1 / (2 * rf)
    R_rr = f1 / rf + r * f2 / (2 * rf) - r * f1 * f1 / (4 * f * rf)
    return warped_curvature(r, f + g, f1 + g1, R, R_r, R_rr, gs.n - 1)


def curvature_at(gs, radii, x=None, bound=1e8, method="exact", h=1e-3):
    """Curvature of the Bures metric of ``gs`` at each radius.

    ``method="exact"`` differentiates the Hubner kernel analytically;
    ``"stencil"`` uses a five-point stencil of step ``h`` around each radius.
    """
    radii = np.asarray(radii, dtype=float)
    if method == "exact":
        vals = np.array([curvature_exact(gs, r, x) for r in radii])
        ricci, kr = vals[:, 0], vals[:, 1]
        return CurvatureReport(radii, ricci, kr, has_singularity(ricci, bound) or has_singularity(kr, bound))
    if method != "stencil":
        raise ValueError(f"unknown method {method!r}")
    reps = [radial_curvature(radial_metric(gs, r0 + h * np.arange(-2, 3), x), bound) for r0 in radii]
    ricci = np.concatenate([c.ricci for c in reps])
    kr = np.concatenate([c.kretschmann for c in reps])
    return CurvatureReport(radii, ricci, kr, any(c.singular for c in reps))


def has_singularity(values, bound=1e8):
    return bool(np.any(~np.isfinite(values)) or np.any(np.abs(values) > bound))


def _double_factorial(n):
    return math.prod(range(n, 0, -2)) if n > 0 else 1


def sphere_area(d):
    """Area of the unit ``S^d``: ``2/(d-1)!! (2 pi)^floor(d/2) pi^((1-(-1)^d)/2)``."""
    return 2.0 / _double_factorial(d - 1) * (2 * np.pi) ** (d // 2) * np.pi ** (d % 2)


def bures_volume_minimal(d):
    """Closed-form Bures volume of the minimal Bloch ball ``B^(d+1)``."""
    return (np.pi / 2) ** (d // 2 + 1) / _double_factorial(d)


def bures_volume_quadrature(gs, nodes=32, x=None):
    """``area(S^d) int_0^1 r^d sqrt(det B) dr`` with ``r = sin u`` Gauss-Legendre nodes."""
    d = gs.n - 1
    if x is None:
        x = np.ones(gs.n) / np.sqrt(gs.n)
    t, w = np.polynomial.legendre.leggauss(nodes)
    u = (t + 1) * np.pi / 4
    w = w * np.pi / 4
    total = 0.0
    for ui, wi in zip(u, w):
        r = np.sin(ui)
        det = np.linalg.det(bures_metric(gs, r, x))
        total += wi * r**d * np.sqrt(det) * np.cos(ui)
    return sphere_area(d) * total


def bures_distance_minimal(p, q):
    """Bures distance between two minimal-model states at ball points ``p, q``.

    ``D = (1/2) arccos(p.q + sqrt((1 - |p|^2)(1 - |q|^2)))``, i.e. the
    great-circle distance on a hemisphere of radius 1/2.
    """
    p = np.asarray(p, dtype=float)
    q = np.asarray(q, dtype=float)
    pp, qq = p @ p, q @ q
    if pp > 1 + 1e-12 or qq > 1 + 1e-12:
        raise ValueError("points must lie in the closed unit ball")
    c = p @ q + math.sqrt(max(0.0, 1 - pp) * max(0.0, 1 - qq))
    return 0.5 * math.acos(min(1.0, max(-1.0, c)))


def _table(n, twoS):
    """Reference ``(f + g, f)`` forms, or ``None`` for excluded cells."""
    forms = {
        (3, 1): (lambda r: 1 / (4 * (1 - r * r)), lambda r: 0.25 + 0 * r),
        (3, 2): (lambda r: 1 / (6 * (1 - r * r)), lambda r: 2 / (3 * (4 - r * r))),
        (3, 3): (
            lambda r: (5 - r * r) / (4 * (1 - r * r) * (9 - r * r)),
            lambda r: (45 - 8 * r * r) / (36 * (9 - 4 * r * r)),
        ),
        (4, 1): (lambda r: 1 / (4 * (1 - r * r)), lambda r: 0.25 + 0 * r),
        (4, 3): (
            lambda r: (27 - 4 * r * r) / (4 * (9 - r * r) * (9 - 4 * r * r)),
            lambda r: (324 - 65 * r * r) / (972 * (4 - r * r)),
        ),
        (5, 1): (lambda r: 1 / (4 * (1 - r * r)), lambda r: 0.25 + 0 * r),
        (5, 2): (lambda r: 3 / (20 * (1 - r * r)), lambda r: 3 / (5 * (4 - r * r))),
        (5, 3): (
            lambda r: (21 - 5 * r * r) / (20 * (1 - r * r) * (9 - r * r)),
            lambda r: (21 - 4 * r * r) / (20 * (9 - 4 * r * r)),
        ),
    }
    return forms.get((n, twoS))


REFERENCE_CELLS = [(3, 1), (3, 2), (3, 3), (4, 1), (4, 3), (5, 1), (5, 2), (5, 3)]


def reference_fg(n, twoS, r):
    """Reference ``(f + g, f)`` at radius ``r`` for ball ``B^n`` and spin ``twoS/2``."""
    forms = _table(n, twoS)
    if forms is None:
        raise KeyError(f"no reference entry for B^{n}, 2S={twoS}")
    return forms[0](r), forms[1](r)

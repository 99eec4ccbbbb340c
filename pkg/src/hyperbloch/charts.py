"""Hyperspherical angle charts on S^d.

Angles are stored in the order ``(theta_d, ..., theta_3, theta, phi)``: the
first angle is measured from the ``x_{d+1}`` axis and the last two are the
ordinary polar and azimuthal angles of the ``(x_1, x_2, x_3)`` subspace.
"""

from dataclasses import dataclass

import numpy as np


def sphere_point(angles):
    """Unit vector in R^{d+1}; ``angles`` may carry leading batch axes."""
    a = np.asarray(angles, dtype=float)
    th, ph = a[..., -2], a[..., -1]
    s = np.sin(th)
    comps = [s * np.cos(ph), s * np.sin(ph), np.cos(th)]
    # wrap successively with theta_3, theta_4, ... theta_d
    for j in range(a.shape[-1] - 3, -1, -1):
        t = a[..., j]
        st = np.sin(t)
        comps = [c * st for c in comps] + [np.cos(t)]
    return np.stack(comps, axis=-1)


def sphere_tangents(angles):
    """``dx/d(angle_t)`` stacked as ``(..., d, d+1)``."""
    a = np.asarray(angles, dtype=float)
    d = a.shape[-1]
    out = []
    for t in range(d):
        shifted = a.copy()
        shifted[..., t] += np.pi / 2
        # every coordinate depends on each angle through sin or cos only once,
        # so a quarter-period shift differentiates that factor exactly
        der = sphere_point(shifted)
        mask = _dependence_mask(d)[t]
        out.append(np.where(mask, der, 0.0))
    return np.stack(out, axis=-2)


def _dependence_mask(d):
    """``mask[t, c]`` is True when coordinate ``c`` depends on angle ``t``."""
    mask = np.zeros((d, d + 1), dtype=bool)
    # theta_j at position p = d - j (j >= 3) feeds coordinates 0..j
    for p in range(d - 2):
        j = d - p
        mask[p, : j + 1] = True
    mask[d - 2, :3] = True
    mask[d - 1, :2] = True
    return mask


def round_metric(angles):
    """Diagonal of the round metric on S^d at ``angles``."""
    a = np.asarray(angles, dtype=float)
    s2 = np.sin(a) ** 2
    diag = [np.ones(a.shape[:-1])]
    for t in range(1, a.shape[-1]):
        diag.append(diag[-1] * s2[..., t - 1])
    return np.stack(diag, axis=-1)


def orientation_sign(d):
    """+1 when the angle order matches the outward-normal orientation of S^d."""
    a = np.full(d, 0.7) + 0.05 * np.arange(d)
    frame = np.vstack([sphere_point(a), sphere_tangents(a)])
    return int(np.sign(np.linalg.det(frame)))


def angles_from_point(x):
    """Inverse of :func:`sphere_point` for a single unit vector."""
    x = np.asarray(x, dtype=float)
    x = x / np.linalg.norm(x)
    d = len(x) - 1
    ang = np.zeros(d)
    rest = x.copy()
    for p in range(d - 2):
        j = d - p
        ang[p] = np.arccos(np.clip(rest[j], -1.0, 1.0))
        rest = rest[:j]
        nrm = np.linalg.norm(rest)
        rest = rest / nrm if nrm > 0 else np.eye(j)[0]
    ang[d - 2] = np.arccos(np.clip(rest[2], -1.0, 1.0))
    ang[d - 1] = np.arctan2(rest[1], rest[0]) % (2 * np.pi)
    return ang


@dataclass(frozen=True)
class AngleChart:
    """A point on S^d given by hyperspherical angles.

    Polar angles outside ``[0, pi]`` or an azimuth outside ``[0, 2 pi)``
    raise ``ValueError``.
    """

    angles: tuple

    def __post_init__(self):
        a = tuple(float(v) for v in self.angles)
        if len(a) < 2:
            raise ValueError("charts need at least two angles")
        for v in a[:-1]:
            if not 0.0 <= v <= np.pi:
                raise ValueError(f"polar angle {v} outside [0, pi]")
        if not 0.0 <= a[-1] < 2 * np.pi:
            raise ValueError(f"azimuth {a[-1]} outside [0, 2 pi)")
        object.__setattr__(self, "angles", a)

    @property
    def d(self):
        return len(self.angles)

    @property
    def array(self):
        return np.array(self.angles)

    def point(self):
        return sphere_point(self.array)

    def tangents(self):
        return sphere_tangents(self.array)

    def metric(self):
        return np.diag(round_metric(self.array))

    @classmethod
    def from_point(cls, x):
        return cls(tuple(angles_from_point(x)))

    @classmethod
    def random(cls, d, rng, margin=0.05):
        """Random chart away from coordinate singularities by ``margin``."""
        polar = rng.uniform(margin, np.pi - margin, d - 1)
        az = rng.uniform(0.0, 2 * np.pi)
        return cls(tuple(polar) + (az,))

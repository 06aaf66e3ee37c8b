"""Brute-force Monte Carlo oracles for half-space and section volumes.

These estimators share no code with the formula-based routes and exist to
ground them.  Randomness comes from counter-based Philox streams keyed by the
seed, with one jumped stream per batch; batches may run in parallel but are
reduced as exact integer hit counts in a fixed order, so estimates are
bit-identical for a given (spec, n, seed) regardless of scheduling.
"""

from __future__ import annotations

import math

import numpy as np

from .geometry import SectionSpec
from .parallel import ordered_map

_BATCH = 1 << 16


def _batches(seed: int, n: int):
    base = np.random.Philox(key=seed)
    out, offset, index = [], 0, 0
    while offset < n:
        size = min(_BATCH, n - offset)
        out.append((base.jumped(index), size))
        offset += size
        index += 1
    return out


def mc_halfspace_volume(spec: SectionSpec, n: int, seed: int = 0):
    """Fraction of n uniform cube points with a.x <= b.

    Returns (estimate, stderr) with stderr = sqrt(p(1-p)/n).
    """
    if n < 1:
        raise ValueError("n must be at least 1")
    a = np.ascontiguousarray(spec.direction)
    b = spec.offset
    d = spec.dim

    def count(batch):
        bits, size = batch
        x = np.empty((size, d))
        np.random.Generator(bits).random(out=x)
        return int(np.count_nonzero(x @ a <= b))

    hits = sum(ordered_map(count, _batches(seed, n)))
    p = hits / n
    return p, math.sqrt(p * (1.0 - p) / n)


def mc_section_volume(spec: SectionSpec, n: int, seed: int = 0):
    """Hit-or-miss estimate of the (d-1)-volume of the section.

    Points are drawn uniformly from the disk of radius sqrt(d)/2 inside the
    hyperplane, centered at its nearest point to the cube center; that disk
    always covers the section.  The estimate is the in-cube fraction scaled
    by the disk's (d-1)-volume.
    """
    if n < 1:
        raise ValueError("n must be at least 1")
    d = spec.dim
    a = spec.direction
    frame = np.ascontiguousarray(_hyperplane_frame(a))
    foot = (np.full(d, 0.5) - spec.radius * a)[:, None]
    radius = math.sqrt(d) / 2.0
    disk_volume = (
        math.pi ** ((d - 1) / 2.0) / math.gamma((d + 1) / 2.0) * radius ** (d - 1)
    )

    def count(batch):
        bits, size = batch
        rng = np.random.Generator(bits)
        z = np.empty((d - 1, size))
        rng.standard_normal(out=z)
        scale = radius * rng.random(size) ** (1.0 / (d - 1))
        scale /= np.sqrt(np.einsum("ij,ij->j", z, z))
        z *= scale
        pts = frame @ z
        pts += foot
        ok = (pts >= 0.0) & (pts <= 1.0)
        return int(np.count_nonzero(np.logical_and.reduce(ok, axis=0)))

    hits = sum(ordered_map(count, _batches(seed, n)))
    p = hits / n
    return p * disk_volume, disk_volume * math.sqrt(p * (1.0 - p) / n)


def _hyperplane_frame(a: np.ndarray) -> np.ndarray:
    """d x (d-1) orthonormal basis of the hyperplane through the origin
    orthogonal to a, from the Householder reflection sending e1 to -a."""
    d = a.size
    w = a.astype(float).copy()
    w[0] += 1.0
    h = np.eye(d) - 2.0 * np.outer(w, w) / float(w @ w)
    frame = h[:, 1:]
    residual = float(np.max(np.abs(frame.T @ a)))
    if residual > 1e-10:
        raise RuntimeError("hyperplane frame construction failed")
    return frame

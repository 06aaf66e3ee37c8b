"""Shared seeded generators for test specs in known cut regimes."""

import numpy as np

from hyperslice.geometry import make_section_spec


def rng_for(seed: int) -> np.random.Generator:
    return np.random.Generator(np.random.Philox(key=seed))


def random_unit_direction(rng, d):
    """Uniform direction on the sphere restricted to the open orthant."""
    while True:
        x = np.abs(rng.standard_normal(d))
        if np.all(x > 1e-9):
            return x / np.linalg.norm(x)


def corner_spec(rng, d, min_coord=0.05, margin=0.25):
    """Spec whose near side holds only the origin, with comfortable slack."""
    while True:
        a = np.sqrt(rng.dirichlet(np.ones(d)))
        if a.min() < min_coord:
            continue
        b = float(rng.uniform(margin, 1.0 - margin)) * float(a.min())
        t = float(np.sum(a)) / 2.0 - b
        return make_section_spec(a, t)


def edge_spec(rng, d, min_gap=0.05, margin=0.25):
    """Spec whose near side holds the origin plus one neighbor."""
    while True:
        a = np.sqrt(rng.dirichlet(np.ones(d)))
        srt = np.sort(a)
        if srt[0] < 0.03 or srt[1] - srt[0] < min_gap:
            continue
        b = float(srt[0]) + float(rng.uniform(margin, 1.0 - margin)) * float(srt[1] - srt[0])
        t = float(np.sum(a)) / 2.0 - b
        return make_section_spec(a, t)


def smooth_cell_spec(rng, d, clearance=5e-4):
    """Spec whose hyperplane stays clear of every vertex by `clearance`."""
    while True:
        a = random_unit_direction(rng, d)
        t = float(rng.uniform(0.05, 0.95)) * float(np.sum(a)) / 2.0
        spec = make_section_spec(a, t)
        dots = _all_vertex_dots(spec.direction)
        if np.min(np.abs(dots - spec.offset)) > clearance:
            return spec


def _all_vertex_dots(a):
    d = a.size
    verts = ((np.arange(2**d)[:, None] >> np.arange(d)) & 1).astype(float)
    return verts @ a

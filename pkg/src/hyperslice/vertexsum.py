"""Exact-formula volumes from alternating sums over near-side cube vertices.

The (d-1)-volume of the section {a.x = b} cut out of [0,1]^d is

    ||a|| * sum_v (-1)^{popcount(v)} (b - a.v)^(d-1) / ((d-1)! prod(a)),

summed over the vertices v with a.v <= b, and the d-volume of the near
half-space replaces the power d-1 by d and (d-1)! by d!.  Terms can exceed
the result by many orders of magnitude for deep cuts, so the sums are
evaluated with Neumaier compensation and fall back to software floats with
a >=128-bit significand when the estimated cancellation error is too large
relative to the result.
"""

from __future__ import annotations

import math

import mpmath
import numpy as np

from .errors import CellCrossingError, InvalidInputError, RegimeError
from .geometry import (
    DEFAULT_DIM_LIMIT,
    ZERO_COORD_TOL,
    CutClassification,
    CutKind,
    SectionSpec,
    VolumeResult,
    classify_cut,
    vertices_below,
)

_EPS = float(np.finfo(float).eps)

#: Relative cancellation-error threshold that triggers the extended-precision
#: re-evaluation of an alternating sum.
EXTENDED_PRECISION_TRIGGER = 1e-9

_FACTORIALS = [float(math.factorial(n)) for n in range(32)]


def _factorial(n: int) -> float:
    if n < len(_FACTORIALS):
        return _FACTORIALS[n]
    return float(math.factorial(n))


def _reduced_direction(spec: SectionSpec):
    """Drop zero coordinates (below threshold) from the direction.

    The section volume is unchanged: a zero coordinate factors the section
    as a cartesian product with [0,1], and the formula then applies in the
    reduced dimension with the same offset b.
    """
    a = spec.direction
    keep = a > ZERO_COORD_TOL
    a_pos = a[keep]
    if a_pos.size < 1:
        raise InvalidInputError("direction reduces to dimension 0")
    return a_pos


def _signed_gap_terms(a, b):
    """Yield (parity, gap) with gap = b - a.v >= 0 over vertices with a.v <= b.

    Depth-first over coordinates sorted descending with prune-on-overshoot,
    identical in spirit to geometry.vertices_below but without materializing
    vertex tuples.
    """
    if b < 0.0:
        return
    d = len(a)
    asorted = np.sort(np.asarray(a, dtype=float))[::-1]
    stack = [(0, 0.0, 0)]
    while stack:
        i, partial, parity = stack.pop()
        if i == d:
            yield parity, b - partial
            continue
        s1 = partial + asorted[i]
        if s1 <= b:
            stack.append((i + 1, s1, parity ^ 1))
        stack.append((i + 1, partial, parity))


def _compensated_power_sum(a, b, power):
    """Neumaier sum of (-1)^parity * gap^power and the sum of magnitudes."""
    total = 0.0
    comp = 0.0
    absum = 0.0
    for parity, gap in _signed_gap_terms(a, b):
        term = gap**power
        absum += term
        if parity:
            term = -term
        s = total + term
        if abs(total) >= abs(term):
            comp += (total - s) + term
        else:
            comp += (term - s) + total
        total = s
    return total + comp, absum


def _extended_power_sum(a, b, power):
    """Re-evaluate the alternating sum with 160-bit software floats."""
    with mpmath.workprec(160):
        bb = mpmath.mpf(b)
        total = mpmath.mpf(0)
        d = len(a)
        asorted = sorted((mpmath.mpf(float(x)) for x in a), reverse=True)
        stack = [(0, mpmath.mpf(0), 0)]
        while stack:
            i, partial, parity = stack.pop()
            if i == d:
                term = (bb - partial) ** power
                total = total - term if parity else total + term
                continue
            s1 = partial + asorted[i]
            if s1 <= bb:
                stack.append((i + 1, s1, parity ^ 1))
            stack.append((i + 1, partial, parity))
        return float(total)


def _alternating_sum(a, b, power):
    """(sum, err_estimate) for the signed gap-power sum, with fallback."""
    total, absum = _compensated_power_sum(a, b, power)
    err = _EPS * absum
    if absum > 0.0 and err > EXTENDED_PRECISION_TRIGGER * abs(total):
        total = _extended_power_sum(a, b, power)
        err = _EPS * abs(total)
    return total, err


def section_volume_vertex_sum(
    spec: SectionSpec, dim_limit: int = DEFAULT_DIM_LIMIT
) -> VolumeResult:
    """(d-1)-volume of the section by the signed vertex sum."""
    cut = classify_cut(spec, dim_limit=dim_limit)
    a_pos = _reduced_direction(spec)
    d_eff = a_pos.size
    norm = float(np.linalg.norm(a_pos))
    scale = norm / (_factorial(d_eff - 1) * float(np.prod(a_pos)))
    total, err = _alternating_sum(a_pos, spec.offset, d_eff - 1)
    return VolumeResult(
        value=max(total * scale, 0.0),
        method="vertex_sum",
        err=err * scale,
        cut=cut,
    )


def halfspace_volume(spec: SectionSpec, dim_limit: int = DEFAULT_DIM_LIMIT) -> VolumeResult:
    """d-volume of the near half-space {x in [0,1]^d : a.x <= b}."""
    cut = classify_cut(spec, dim_limit=dim_limit)
    value, err = _halfspace_value(spec.direction, spec.offset)
    return VolumeResult(value=value, method="vertex_sum", err=err, cut=cut)


def _halfspace_value(a, b):
    """Half-space volume from raw (a, b); b may exceed sum(a)/2."""
    a = np.asarray(a, dtype=float)
    a_pos = a[a > ZERO_COORD_TOL]
    if a_pos.size < 1:
        raise InvalidInputError("direction reduces to dimension 0")
    d_eff = a_pos.size
    if b >= float(np.sum(a_pos)):
        return 1.0, 0.0
    scale = 1.0 / (_factorial(d_eff) * float(np.prod(a_pos)))
    total, err = _alternating_sum(a_pos, b, d_eff)
    return min(max(total * scale, 0.0), 1.0), err * scale


def corner_volume(spec: SectionSpec) -> float:
    """Closed form b^(d-1)/((d-1)! prod(a)) for a corner cut (origin only below)."""
    cut = classify_cut(spec)
    if cut.kind is not CutKind.CORNER or spec.offset <= 0.0:
        raise RegimeError("corner_volume requires a corner cut with positive offset")
    a = spec.direction
    d = spec.dim
    return spec.offset ** (d - 1) / (_factorial(d - 1) * float(np.prod(a)))


def edge_volume(spec: SectionSpec) -> float:
    """Closed form for an edge cut: origin and one neighbor below.

    With a_low the unique coordinate not exceeding b, the volume is
    (b^(d-1) - (b - a_low)^(d-1)) / ((d-1)! prod(a)).  When a_low is a true
    zero the cut lives in the facet and the corner form of the reduced
    direction applies instead.
    """
    cut = classify_cut(spec)
    if cut.kind is not CutKind.EDGE or spec.offset <= 0.0:
        raise RegimeError("edge_volume requires an edge cut with positive offset")
    a = spec.direction
    b = spec.offset
    d = spec.dim
    i_low = int(np.argmin(a))
    a_low = float(a[i_low])
    if a_low <= ZERO_COORD_TOL:
        rest = np.delete(a, i_low)
        return b ** (d - 2) / (_factorial(d - 2) * float(np.prod(rest)))
    return (b ** (d - 1) - (b - a_low) ** (d - 1)) / (_factorial(d - 1) * float(np.prod(a)))


def section_from_halfspace_derivative(spec: SectionSpec, h: float) -> float:
    """Section volume as a central difference of the half-space volume in t.

    Requires that no vertex changes side across [t-h, t+h]; otherwise the
    half-space volume has a kink there and the quotient is meaningless.
    """
    if not h > 0.0:
        raise InvalidInputError("step h must be positive")
    a = spec.direction
    norm = float(np.linalg.norm(a))
    b_lo = spec.offset - h * norm  # radius t + h
    b_hi = spec.offset + h * norm  # radius t - h
    n_lo = _count_below(a, b_lo)
    n_hi = _count_below(a, b_hi)
    if n_lo != n_hi:
        raise CellCrossingError(
            f"vertex count changes across the step ({n_lo} vs {n_hi}); shrink h"
        )
    w_lo, _ = _halfspace_value(a, b_lo)
    w_hi, _ = _halfspace_value(a, b_hi)
    return (w_hi - w_lo) / (2.0 * h)


def _count_below(a, b):
    if b < 0.0:
        return 0
    return sum(1 for _ in _signed_gap_terms(np.asarray(a, dtype=float), b))

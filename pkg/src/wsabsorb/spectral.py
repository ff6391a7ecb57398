"""Closed-form critical energies and threshold-certified absorption ranges.

Every enumerated energy comes from an exact integer condition on the
channel parameters: unidirectional absorption and spectral singularities
from 2*a3 or 2*a2 hitting integers, bidirectional absorption from their
sum, and reflection zeros of the time-reversed potential from their
difference.  Range scanning certifies the smallness of the relevant
coefficients on a grid between consecutive singularities, with bisection
refinement of the crossing points.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace
from enum import Enum

import numpy as np

from .amplitudes import amplitudes
from .specfun import TAU_INT
from .units import PotentialSpec, Variant, validate

__all__ = [
    "SpectralFamily",
    "Side",
    "RangeCriterion",
    "SpectralPoint",
    "AbsorptionRange",
    "cc_left_energies",
    "cc_right_energies",
    "ss_energies",
    "rprime_left_zeros",
    "cpa_energies_forward",
    "cpa_energies_time_reversed",
    "p_intermediate",
    "q_intermediate",
    "scan_ranges",
]

DEFAULT_MAX_COUNT = 10
DEFAULT_GRID_POINTS = 4096
DEFAULT_THRESHOLD = 1e-6


class SpectralFamily(Enum):
    CC_LEFT = "cc_left"
    CC_RIGHT = "cc_right"
    SS_LEFT = "ss_left"
    SS_RIGHT = "ss_right"
    CPA_FORWARD_A2 = "cpa_forward_a2"
    CPA_FORWARD_A3 = "cpa_forward_a3"
    CPA_TIME_REVERSED = "cpa_time_reversed"
    RPRIME_LEFT_ZERO = "rprime_left_zero"


class Side(Enum):
    LEFT = "left"
    RIGHT = "right"


class RangeCriterion(Enum):
    CC_LEFT_RANGE = "cc_left"
    CPA_RANGE = "cpa"


@dataclass(frozen=True)
class SpectralPoint:
    kind: SpectralFamily
    index: int
    energy: float
    degenerate: bool = False


@dataclass(frozen=True)
class AbsorptionRange:
    lo: float
    hi: float
    criterion: RangeCriterion
    threshold: float
    bracketing_ss: tuple[SpectralPoint, SpectralPoint]
    interior_zeros: tuple[SpectralPoint, ...]


# -- integer-condition variables --------------------------------------------


def _two_a2(spec: PotentialSpec, energy: float) -> float:
    return 4.0 * math.sqrt(spec.mass * energy) / spec.rho


def _two_a3(spec: PotentialSpec, energy: float) -> float:
    return 4.0 * math.sqrt(spec.mass * (energy + spec.v0)) / spec.rho


def _near_positive_integer(x: float, tau: float) -> bool:
    n = round(x)
    return n >= 1 and abs(x - n) <= tau


def _quarter_rho2_over_m(spec: PotentialSpec) -> float:
    return spec.rho * spec.rho / (16.0 * spec.mass)


# -- discrete families -------------------------------------------------------


def cc_left_energies(
    spec: PotentialSpec, max_count: int = DEFAULT_MAX_COUNT, tau: float = TAU_INT
) -> list[SpectralPoint]:
    """Energies where left-incident reflection and transmission both vanish.

    2*a3 = n, so E_n = n^2 rho^2 / (16 m) - v0 for n past the positivity
    bound.  A point is flagged degenerate when 2*a2 is also an integer
    there (the coincidence changes the amplitude classification).
    """
    validate(spec)
    scale = _quarter_rho2_over_m(spec)
    n = math.floor(4.0 * math.sqrt(spec.mass * spec.v0) / spec.rho)
    points = []
    while len(points) < max_count:
        energy = scale * n * n - spec.v0
        if energy > 0.0:
            points.append(
                SpectralPoint(
                    kind=SpectralFamily.CC_LEFT,
                    index=n,
                    energy=energy,
                    degenerate=_near_positive_integer(_two_a2(spec, energy), tau),
                )
            )
        n += 1
    return points


def cc_right_energies(
    spec: PotentialSpec, max_count: int = DEFAULT_MAX_COUNT, tau: float = TAU_INT
) -> list[SpectralPoint]:
    """Energies where right-incident reflection and transmission vanish:
    2*a2 = n', i.e. E = n'^2 rho^2 / (16 m), independent of the depth."""
    validate(spec)
    scale = _quarter_rho2_over_m(spec)
    points = []
    for n in range(1, max_count + 1):
        energy = scale * n * n
        points.append(
            SpectralPoint(
                kind=SpectralFamily.CC_RIGHT,
                index=n,
                energy=energy,
                degenerate=_near_positive_integer(_two_a3(spec, energy), tau),
            )
        )
    return points


def ss_energies(
    spec: PotentialSpec,
    side: Side,
    max_count: int = DEFAULT_MAX_COUNT,
    tau: float = TAU_INT,
) -> list[SpectralPoint]:
    """Spectral singularities of the time-reversed potential.

    These coincide energy-by-energy with the forward critical-coupling
    sets: the left family diverges in R'_l where the forward left
    coefficients vanish, and likewise on the right.
    """
    if side is Side.LEFT:
        base = cc_left_energies(spec, max_count, tau)
        kind = SpectralFamily.SS_LEFT
    else:
        base = cc_right_energies(spec, max_count, tau)
        kind = SpectralFamily.SS_RIGHT
    return [replace(p, kind=kind) for p in base]


def p_intermediate(spec: PotentialSpec, n: int) -> float:
    """Intermediate scalar of the reflection-zero condition a2 - a3 = -n.

    Satisfies v0 + 2 p_n = n^2 rho^2 / (4 m) > 0 for solvable n.
    """
    return n * n * spec.rho * spec.rho / (8.0 * spec.mass) - spec.v0 / 2.0


def q_intermediate(spec: PotentialSpec, m_index: int) -> float:
    """Intermediate scalar of the bidirectional-absorption condition
    a2 + a3 = M; satisfies v0 + 2 q_M = M^2 rho^2 / (4 m)."""
    return m_index * m_index * spec.rho * spec.rho / (8.0 * spec.mass) - spec.v0 / 2.0


def rprime_left_zeros(spec: PotentialSpec, tau: float = TAU_INT) -> list[SpectralPoint]:
    """Exact zeros of the time-reversed left reflection: a2 - a3 = -n.

    k2 - k1 decreases from sqrt(m v0) to 0, so solvable n satisfy
    1 <= n < (2/rho) sqrt(m v0); the list is complete and may be empty.
    """
    validate(spec)
    points = []
    n_cap = 2.0 * math.sqrt(spec.mass * spec.v0) / spec.rho
    n = 1
    while n < n_cap:
        p = p_intermediate(spec, n)
        energy = p * p / (spec.v0 + 2.0 * p)
        points.append(
            SpectralPoint(
                kind=SpectralFamily.RPRIME_LEFT_ZERO,
                index=n,
                energy=energy,
                degenerate=(
                    _near_positive_integer(_two_a2(spec, energy), tau)
                    or _near_positive_integer(_two_a3(spec, energy), tau)
                ),
            )
        )
        n += 1
    return points


def cpa_energies_forward(
    spec: PotentialSpec, max_count: int = DEFAULT_MAX_COUNT, tau: float = TAU_INT
) -> list[SpectralPoint]:
    """Bidirectional perfect-absorption energies of the forward potential.

    Two interleaved families from the two numerator poles: 2*a2 = n1 + 1
    and 2*a3 = n2, with up to max_count points per family, merged in
    ascending energy.  det S vanishes at each except at flagged degenerate
    coincidences, where the residues cancel.
    """
    validate(spec)
    scale = _quarter_rho2_over_m(spec)
    points = []
    for n1 in range(1, max_count + 1):
        energy = scale * (n1 + 1) * (n1 + 1)
        points.append(
            SpectralPoint(
                kind=SpectralFamily.CPA_FORWARD_A2,
                index=n1,
                energy=energy,
                degenerate=_near_positive_integer(_two_a3(spec, energy), tau),
            )
        )
    n2 = math.floor(4.0 * math.sqrt(spec.mass * spec.v0) / spec.rho)
    kept = 0
    while kept < max_count:
        energy = scale * n2 * n2 - spec.v0
        if energy > 0.0:
            points.append(
                SpectralPoint(
                    kind=SpectralFamily.CPA_FORWARD_A3,
                    index=n2,
                    energy=energy,
                    degenerate=_near_positive_integer(_two_a2(spec, energy), tau),
                )
            )
            kept += 1
        n2 += 1
    return sorted(points, key=lambda p: (p.energy, p.kind.value))


def cpa_energies_time_reversed(
    spec: PotentialSpec, max_count: int = DEFAULT_MAX_COUNT, tau: float = TAU_INT
) -> list[SpectralPoint]:
    """Bidirectional perfect-absorption energies of the time-reversed
    potential: a2 + a3 = M.

    Degenerate M, where 2*a2 (and hence 2*a3) is also an integer at the
    candidate energy, are EXCLUDED: there a numerator residue cancels the
    intended zero of det S and absorption fails.
    """
    validate(spec)
    points = []
    m_index = math.floor(2.0 * math.sqrt(spec.mass * spec.v0) / spec.rho)
    while len(points) < max_count:
        m_index += 1
        q = q_intermediate(spec, m_index)
        if q <= 0.0:
            continue
        energy = q * q / (spec.v0 + 2.0 * q)
        if _near_positive_integer(_two_a2(spec, energy), tau) or _near_positive_integer(
            _two_a3(spec, energy), tau
        ):
            continue
        points.append(
            SpectralPoint(
                kind=SpectralFamily.CPA_TIME_REVERSED,
                index=m_index,
                energy=energy,
                degenerate=False,
            )
        )
    return points


# -- range certification ------------------------------------------------------


def _ss_in_window(
    spec: PotentialSpec, families: tuple[SpectralFamily, ...], emin: float, emax: float
) -> list[SpectralPoint]:
    """Enumerated singularities covering [emin, emax], one beyond each side."""
    scale = _quarter_rho2_over_m(spec)
    points: list[SpectralPoint] = []
    for family in families:
        if family is SpectralFamily.SS_LEFT:
            shift = spec.v0
            n_min = math.floor(4.0 * math.sqrt(spec.mass * spec.v0) / spec.rho) + 1
            while scale * n_min * n_min - spec.v0 <= 0.0:
                n_min += 1
        else:
            shift = 0.0
            n_min = 1
        n_lo = max(n_min, math.floor(math.sqrt(max(emin + shift, 0.0) / scale)))
        n_hi = math.ceil(math.sqrt((emax + shift) / scale)) + 1
        for n in range(n_lo, n_hi + 1):
            energy = scale * n * n - shift
            if energy <= 0.0:
                continue
            points.append(SpectralPoint(kind=family, index=n, energy=energy))
    points.sort(key=lambda p: p.energy)
    return points


def _log10_certified(tr_spec: PotentialSpec, criterion: RangeCriterion, energy: float) -> float:
    amps = amplitudes(tr_spec, energy)
    if criterion is RangeCriterion.CC_LEFT_RANGE:
        return max(amps.Rl.log10_magnitude, amps.T.log10_magnitude)
    half = amps.det_s.abs_squared().log10_magnitude
    return 0.5 * half if math.isfinite(half) else half


def _bisect_crossing(
    tr_spec: PotentialSpec,
    criterion: RangeCriterion,
    log10_cap: float,
    e_fail: float,
    e_pass: float,
) -> float:
    """Refine the threshold crossing between a failing and a passing energy."""
    for _ in range(200):
        mid = 0.5 * (e_fail + e_pass)
        if abs(e_pass - e_fail) <= 1e-10 * mid:
            break
        if _log10_certified(tr_spec, criterion, mid) < log10_cap:
            e_pass = mid
        else:
            e_fail = mid
    return e_pass


def scan_ranges(
    spec: PotentialSpec,
    criterion: RangeCriterion,
    window: tuple[float, float],
    threshold: float = DEFAULT_THRESHOLD,
    grid_points: int = DEFAULT_GRID_POINTS,
) -> list[AbsorptionRange]:
    """Certify absorption ranges between consecutive spectral singularities.

    The certified quantities live on the time-reversed potential:
    max(R'_l, T') for unidirectional ranges, |det S'| for bidirectional
    ones (whose brackets interleave both singularity families, so the
    right-reflection singular points are excluded by construction).  Each
    bracket overlapping the window is sampled on a uniform grid; maximal
    sub-threshold runs are reported with bisection-refined endpoints.
    An empty result means no sample beat the threshold.
    """
    validate(spec)
    emin, emax = window
    if not (emin > 0.0 and emax > emin):
        raise ValueError(f"invalid window {window!r}")
    if threshold <= 0.0:
        raise ValueError("threshold must be positive")
    if grid_points < 100:
        raise ValueError("grid_points must be at least 100")

    tr_spec = replace(spec, variant=Variant.TIME_REVERSED)
    if criterion is RangeCriterion.CC_LEFT_RANGE:
        families = (SpectralFamily.SS_LEFT,)
    else:
        families = (SpectralFamily.SS_LEFT, SpectralFamily.SS_RIGHT)

    singularities = _ss_in_window(spec, families, emin, emax)
    log10_cap = math.log10(threshold)
    ranges: list[AbsorptionRange] = []

    for ss_lo, ss_hi in zip(singularities, singularities[1:]):
        lo = max(ss_lo.energy * (1.0 + 1e-12), emin)
        hi = min(ss_hi.energy * (1.0 - 1e-12), emax)
        if hi <= lo:
            continue
        grid = np.linspace(lo, hi, grid_points)
        passing = np.array(
            [_log10_certified(tr_spec, criterion, e) < log10_cap for e in grid]
        )
        i = 0
        while i < grid_points:
            if not passing[i]:
                i += 1
                continue
            j = i
            while j + 1 < grid_points and passing[j + 1]:
                j += 1
            lo_e = grid[i]
            if i > 0:
                lo_e = _bisect_crossing(tr_spec, criterion, log10_cap, grid[i - 1], grid[i])
            hi_e = grid[j]
            if j + 1 < grid_points:
                hi_e = _bisect_crossing(tr_spec, criterion, log10_cap, grid[j + 1], grid[j])
            ranges.append(
                AbsorptionRange(
                    lo=float(lo_e),
                    hi=float(hi_e),
                    criterion=criterion,
                    threshold=threshold,
                    bracketing_ss=(ss_lo, ss_hi),
                    interior_zeros=tuple(
                        _interior_points(spec, criterion, float(lo_e), float(hi_e))
                    ),
                )
            )
            i = j + 1
    return ranges


def _interior_points(
    spec: PotentialSpec, criterion: RangeCriterion, lo: float, hi: float
) -> list[SpectralPoint]:
    """Discrete exact-absorption points inside a certified range."""
    if criterion is RangeCriterion.CC_LEFT_RANGE:
        return [p for p in rprime_left_zeros(spec) if lo <= p.energy <= hi]
    # a2 + a3 is monotone in energy; enumerate M indices overlapping [lo, hi]
    out = []
    m_lo = math.floor((_two_a2(spec, lo) + _two_a3(spec, lo)) / 2.0)
    m_hi = math.ceil((_two_a2(spec, hi) + _two_a3(spec, hi)) / 2.0)
    for m_index in range(max(m_lo, 1), m_hi + 1):
        q = q_intermediate(spec, m_index)
        if q <= 0.0:
            continue
        energy = q * q / (spec.v0 + 2.0 * q)
        if not lo <= energy <= hi:
            continue
        if _near_positive_integer(_two_a2(spec, energy), TAU_INT) or _near_positive_integer(
            _two_a3(spec, energy), TAU_INT
        ):
            continue
        out.append(
            SpectralPoint(
                kind=SpectralFamily.CPA_TIME_REVERSED, index=m_index, energy=energy
            )
        )
    return out

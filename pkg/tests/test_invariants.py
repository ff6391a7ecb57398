"""Cross-module invariants over randomized parameter records.

Every enumerated critical point must back-substitute into its defining
integer condition and carry the amplitude classification that defines its
family; these sweeps run the whole chain (enumeration -> channel
parameters -> Gamma poles -> singular-value limits) over random depths,
shapes and masses, including masses away from one.
"""

import math
from dataclasses import replace

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from wsabsorb.amplitudes import amplitudes, det_s
from wsabsorb.oracle import oracle_amplitudes, oracle_domain_ok, wavefunction_residual
from wsabsorb.spectral import (
    Side,
    SpectralFamily,
    cc_left_energies,
    cc_right_energies,
    cpa_energies_forward,
    cpa_energies_time_reversed,
    rprime_left_zeros,
    ss_energies,
)
from wsabsorb.units import PotentialSpec, Variant

spec_strategy = st.builds(
    PotentialSpec,
    v0=st.floats(0.2, 30.0),
    rho=st.floats(0.3, 4.0),
    mass=st.floats(0.4, 3.0),
)


def two_a2(spec, energy):
    return 4.0 * math.sqrt(spec.mass * energy) / spec.rho


def two_a3(spec, energy):
    return 4.0 * math.sqrt(spec.mass * (energy + spec.v0)) / spec.rho


@given(spec_strategy)
@settings(max_examples=60, deadline=None)
def test_back_substitution_all_families(spec):
    for p in cc_left_energies(spec, 5):
        assert abs(two_a3(spec, p.energy) - p.index) < 1e-10
    for p in cc_right_energies(spec, 5):
        assert abs(two_a2(spec, p.energy) - p.index) < 1e-10
    for p in ss_energies(spec, Side.LEFT, 5) + ss_energies(spec, Side.RIGHT, 5):
        var = two_a3 if p.kind is SpectralFamily.SS_LEFT else two_a2
        assert abs(var(spec, p.energy) - p.index) < 1e-10
    for p in cpa_energies_forward(spec, 5):
        if p.kind is SpectralFamily.CPA_FORWARD_A2:
            assert abs(two_a2(spec, p.energy) - (p.index + 1)) < 1e-10
        else:
            assert abs(two_a3(spec, p.energy) - p.index) < 1e-10
    for p in cpa_energies_time_reversed(spec, 5):
        total = (two_a2(spec, p.energy) + two_a3(spec, p.energy)) / 2.0
        assert abs(total - p.index) < 1e-10
    for p in rprime_left_zeros(spec):
        diff = (two_a3(spec, p.energy) - two_a2(spec, p.energy)) / 2.0
        assert abs(diff - p.index) < 1e-10


@given(spec_strategy)
@settings(max_examples=30, deadline=None)
def test_classification_matches_family(spec):
    tr = replace(spec, variant=Variant.TIME_REVERSED)
    for p in cc_left_energies(spec, 3):
        if p.degenerate:
            continue
        fwd = amplitudes(spec, p.energy)
        assert fwd.rl.is_zero and fwd.tl.is_zero and fwd.rr.is_finite
        assert amplitudes(tr, p.energy).Rl.is_pole
    for p in cc_right_energies(spec, 3):
        if p.degenerate:
            continue
        fwd = amplitudes(spec, p.energy)
        assert fwd.rr.is_zero and fwd.tl.is_zero
        assert amplitudes(tr, p.energy).Rr.is_pole
    for p in cpa_energies_forward(spec, 3):
        if p.degenerate:
            continue
        assert det_s(spec, p.energy).is_zero
    for p in cpa_energies_time_reversed(spec, 3):
        assert det_s(tr, p.energy).is_zero
        assert det_s(spec, p.energy).is_pole
    for p in rprime_left_zeros(spec):
        if p.degenerate:
            continue
        assert amplitudes(tr, p.energy).rl.is_zero


@given(spec_strategy, st.floats(0.05, 20.0))
@settings(max_examples=60, deadline=None)
def test_degenerate_free_energies_have_unit_det_product(spec, energy):
    forward = det_s(spec, energy)
    backward = det_s(replace(spec, variant=Variant.TIME_REVERSED), energy)
    if not (forward.is_finite and backward.is_finite):
        return
    assert abs((forward * backward).to_complex() - 1.0) < 1e-9


def test_oracle_with_nonunit_mass():
    spec = PotentialSpec(v0=1.7, rho=1.4, mass=2.3)
    energy = 0.83
    assert oracle_domain_ok(spec, energy)
    ref = amplitudes(spec, energy)
    got = oracle_amplitudes(spec, energy)
    for field in ("rl", "rr", "tl"):
        a = getattr(ref, field).to_complex()
        b = getattr(got, field).to_complex()
        assert abs(a - b) <= 1e-6 * abs(a)


def test_residual_time_reversed_variant():
    spec = PotentialSpec(v0=1.2, rho=1.8, mass=1.0, variant=Variant.TIME_REVERSED)
    res = wavefunction_residual(spec, 1.0, [(0.3, 0.4), (0.9, 0.8)], step=1e-3)
    assert res < 1e-6


def test_oracle_time_reversed_nonzero_offset():
    spec = PotentialSpec(v0=0.9, rho=1.1, mass=1.0, variant=Variant.TIME_REVERSED)
    ref = amplitudes(spec, 1.17)
    got = oracle_amplitudes(spec, 1.17, x0=0.6)
    for field in ("rl", "rr", "tl", "det_s"):
        a = getattr(ref, field).to_complex()
        b = getattr(got, field).to_complex()
        assert abs(a - b) <= 1e-6 * abs(a)

"""Command-line front end: scans, spectral tables, range certification,
reference-table reproduction, and the invariant verification suite.

Output is CSV by default (12 significant digits, ``inf``/``-inf`` tokens
for singular rows) or JSON mirroring the same fields; identical
invocations produce byte-identical output.  Exit codes: 0 success,
1 validation error, 2 acceptance mismatch (table1/verify).
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from dataclasses import replace

import numpy as np

from . import spectral
from .amplitudes import amplitudes, hermitian_amplitudes, potential_profile
from .oracle import oracle_g_factors
from .specfun import TAU_INT, SingularValue, log_gamma
from .spectral import (
    RangeCriterion,
    Side,
    SpectralFamily,
    cc_left_energies,
    cc_right_energies,
    cpa_energies_forward,
    cpa_energies_time_reversed,
    rprime_left_zeros,
    scan_ranges,
    ss_energies,
)
from .units import (
    EnergyUnit,
    PotentialSpec,
    Variant,
    convert_energy,
    validate,
)

_UNIT_CHOICES = {"internal": EnergyUnit.INTERNAL, "ev": EnergyUnit.ELECTRON_VOLT,
                 "mev": EnergyUnit.MEGA_ELECTRON_VOLT}

_SPEC_KEYS = ("v0", "rho", "mass", "zeta", "variant", "emin", "emax", "points",
              "threshold", "units", "format", "grid", "max_count", "seed")


class _Parser(argparse.ArgumentParser):
    """argparse variant whose usage errors exit with code 1."""

    def error(self, message):
        self.print_usage(sys.stderr)
        sys.stderr.write(f"error: {message}\n")
        sys.exit(1)


def _fmt(x: float) -> str:
    if isinstance(x, float):
        if math.isinf(x):
            return "inf" if x > 0 else "-inf"
        if math.isnan(x):
            raise ValueError("refusing to emit NaN")
        return f"{x:.12g}"
    return str(x)


def _log10_token(value: float) -> str:
    """log10 magnitudes with +-inf flushing beyond 300 decades."""
    if value >= 300.0:
        return "inf"
    if value <= -300.0:
        return "-inf"
    return _fmt(value)


def _jsonify(token: str):
    if token in ("inf", "-inf"):
        return token
    try:
        return int(token)
    except ValueError:
        pass
    try:
        return float(token)
    except ValueError:
        return token


def _emit(args, columns, rows, meta):
    rows = [[_fmt(v) if isinstance(v, float) else str(v) for v in row] for row in rows]
    if args.format == "json":
        doc = {
            "command": meta["command"],
            "params": meta["params"],
            "rows": [
                {c: _jsonify(v) for c, v in zip(columns, row)} for row in rows
            ],
        }
        text = json.dumps(doc, indent=2) + "\n"
    else:
        lines = [",".join(columns)]
        lines += [",".join(row) for row in rows]
        text = "\n".join(lines) + "\n"
    if args.out:
        with open(args.out, "w", encoding="utf-8") as handle:
            handle.write(text)
    else:
        sys.stdout.write(text)


def _load_config(path: str) -> dict:
    out = {}
    with open(path, encoding="utf-8") as handle:
        for raw in handle:
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise ValueError(f"config line {raw!r} is not 'key = value'")
            key, value = (part.strip() for part in line.split("=", 1))
            out[key.replace("-", "_")] = value
    return out


def _overlay_config(args) -> None:
    if not getattr(args, "config", None):
        return
    loaded = _load_config(args.config)
    unknown = set(loaded) - set(_SPEC_KEYS)
    if unknown:
        raise ValueError(f"unknown config keys: {sorted(unknown)}")
    for key, value in loaded.items():
        if getattr(args, key, None) is None and hasattr(args, key):
            setattr(args, key, value)


def _spec_from_args(args) -> PotentialSpec:
    if args.v0 is None or args.rho is None:
        raise ValueError("both --v0 and --rho are required (flag or config)")
    variant = {"forward": Variant.FORWARD, "time-reversed": Variant.TIME_REVERSED,
               "time_reversed": Variant.TIME_REVERSED}.get(str(args.variant or "forward"))
    if variant is None:
        raise ValueError(f"unknown variant {args.variant!r}")
    return validate(
        PotentialSpec(
            v0=float(args.v0),
            rho=float(args.rho),
            mass=float(args.mass if args.mass is not None else 1.0),
            zeta=float(args.zeta if args.zeta is not None else 0.0),
            variant=variant,
        )
    )


def _energy_unit(args) -> EnergyUnit:
    name = str(args.units or "ev").lower()
    if name not in _UNIT_CHOICES:
        raise ValueError(f"unknown units {name!r}")
    return _UNIT_CHOICES[name]


def _display_column(unit: EnergyUnit) -> str:
    return {EnergyUnit.INTERNAL: "energy_display_internal",
            EnergyUnit.ELECTRON_VOLT: "energy_ev",
            EnergyUnit.MEGA_ELECTRON_VOLT: "energy_mev"}[unit]


# -- flag annotation -----------------------------------------------------------


def _flag_points(spec: PotentialSpec, emin: float, emax: float):
    """(flag, energy, energy_tolerance, degenerate) annotations for a window.

    The tolerance is the snap tolerance on the defining integer condition
    converted to energy through its derivative.
    """
    base = replace(spec, variant=Variant.FORWARD)
    out = []

    def tol_2a2(e):
        return TAU_INT * spec.rho * math.sqrt(spec.mass * e) / (2.0 * spec.mass)

    def tol_2a3(e):
        return TAU_INT * spec.rho * math.sqrt(spec.mass * (e + spec.v0)) / (2.0 * spec.mass)

    def tol_sum(e):
        k1 = math.sqrt(spec.mass * e)
        k2 = math.sqrt(spec.mass * (e + spec.v0))
        return TAU_INT * spec.rho / (spec.mass * (1.0 / k1 + 1.0 / k2))

    left = spectral._ss_in_window(base, (SpectralFamily.SS_LEFT,), emin, emax)
    right = spectral._ss_in_window(base, (SpectralFamily.SS_RIGHT,), emin, emax)
    lasing = spectral._interior_points(
        base, RangeCriterion.CPA_RANGE, max(emin * 0.5, 1e-300), emax * 2.0
    )
    if spec.variant is Variant.FORWARD:
        for p in left:
            deg = spectral._near_positive_integer(spectral._two_a2(base, p.energy), TAU_INT)
            out.append(("CC_L", p.energy, tol_2a3(p.energy), deg))
            out.append(("CPA", p.energy, tol_2a3(p.energy), deg))
        for p in right:
            deg = spectral._near_positive_integer(spectral._two_a3(base, p.energy), TAU_INT)
            out.append(("CC_R", p.energy, tol_2a2(p.energy), deg))
            if p.index >= 2:
                out.append(("CPA", p.energy, tol_2a2(p.energy), deg))
        for p in lasing:
            out.append(("SS", p.energy, tol_sum(p.energy), False))
    else:
        for p in left:
            deg = spectral._near_positive_integer(spectral._two_a2(base, p.energy), TAU_INT)
            out.append(("SS", p.energy, tol_2a3(p.energy), deg))
        for p in right:
            deg = spectral._near_positive_integer(spectral._two_a3(base, p.energy), TAU_INT)
            out.append(("SS", p.energy, tol_2a2(p.energy), deg))
        for p in lasing:
            out.append(("CPA", p.energy, tol_sum(p.energy), False))
    return out


def _flags_for(energy: float, annotations) -> str:
    hits = []
    for flag, at, tol, degenerate in annotations:
        if abs(energy - at) <= tol:
            hits.append(flag)
            if degenerate:
                hits.append("DEGENERATE")
    return "|".join(sorted(set(hits)))


# -- subcommands ----------------------------------------------------------------


def cmd_scan(args) -> int:
    spec = _spec_from_args(args)
    unit = _energy_unit(args)
    points = int(args.points if args.points is not None else 1000)
    emin = float(args.emin) if args.emin is not None else None
    emax = float(args.emax) if args.emax is not None else None
    if emin is None or emax is None:
        raise ValueError("--emin and --emax are required")
    if not (emin > 0 and emax > emin):
        raise ValueError(f"invalid window [{emin}, {emax}]")
    if points < 2:
        raise ValueError("--points must be at least 2")
    grid = np.linspace(emin, emax, points)
    annotations = _flag_points(spec, emin, emax)
    columns = ["energy_internal", _display_column(unit), "log10_Rl", "log10_Rr",
               "log10_T", "log10_absdetS", "flags"]
    rows = []
    for energy in grid:
        amps = amplitudes(spec, float(energy))
        rows.append([
            float(energy),
            convert_energy(float(energy), EnergyUnit.INTERNAL, unit),
            _log10_token(amps.Rl.log10_magnitude),
            _log10_token(amps.Rr.log10_magnitude),
            _log10_token(amps.T.log10_magnitude),
            _log10_token(amps.det_s.log10_magnitude),
            _flags_for(float(energy), annotations),
        ])
    _emit(args, columns, rows, {
        "command": "scan",
        "params": {"v0": spec.v0, "rho": spec.rho, "mass": spec.mass,
                   "variant": spec.variant.value, "emin": emin, "emax": emax,
                   "points": points, "units": unit.value},
    })
    return 0


_FAMILY_CHOICES = {
    "cc-left": "cc_left",
    "cc-right": "cc_right",
    "ss-left": "ss_left",
    "ss-right": "ss_right",
    "cpa-forward": "cpa_forward",
    "cpa-time-reversed": "cpa_time_reversed",
    "rprime-zeros": "rprime_zeros",
}


def cmd_spectrum(args) -> int:
    spec = _spec_from_args(args)
    unit = _energy_unit(args)
    max_count = int(args.max_count if args.max_count is not None else 10)
    raw = str(args.families or "all")
    if raw == "all":
        families = list(_FAMILY_CHOICES.values())
    elif raw == "none":
        families = []
    else:
        families = []
        for token in raw.split(","):
            token = token.strip()
            if token not in _FAMILY_CHOICES:
                raise ValueError(f"unknown family {token!r}")
            families.append(_FAMILY_CHOICES[token])

    points = []
    base = replace(spec, variant=Variant.FORWARD)
    for family in families:
        if family == "cc_left":
            points += cc_left_energies(base, max_count)
        elif family == "cc_right":
            points += cc_right_energies(base, max_count)
        elif family == "ss_left":
            points += ss_energies(base, Side.LEFT, max_count)
        elif family == "ss_right":
            points += ss_energies(base, Side.RIGHT, max_count)
        elif family == "cpa_forward":
            points += cpa_energies_forward(base, max_count)
        elif family == "cpa_time_reversed":
            points += cpa_energies_time_reversed(base, max_count)
        elif family == "rprime_zeros":
            points += rprime_left_zeros(base)

    columns = ["family", "index", "energy_internal", _display_column(unit), "degenerate"]
    rows = [
        [p.kind.value, p.index, p.energy,
         convert_energy(p.energy, EnergyUnit.INTERNAL, unit), str(p.degenerate).lower()]
        for p in sorted(points, key=lambda p: (p.kind.value, p.index))
    ]
    _emit(args, columns, rows, {
        "command": "spectrum",
        "params": {"v0": spec.v0, "rho": spec.rho, "mass": spec.mass,
                   "families": families, "max_count": max_count, "units": unit.value},
    })
    return 0


def cmd_ranges(args) -> int:
    spec = _spec_from_args(args)
    unit = _energy_unit(args)
    criterion = {"cc-left": RangeCriterion.CC_LEFT_RANGE,
                 "cpa": RangeCriterion.CPA_RANGE}.get(str(args.criterion))
    if criterion is None:
        raise ValueError(f"unknown criterion {args.criterion!r}")
    if args.emin is None or args.emax is None:
        raise ValueError("--emin and --emax are required")
    threshold = float(args.threshold if args.threshold is not None else 1e-6)
    grid = int(args.grid if args.grid is not None else spectral.DEFAULT_GRID_POINTS)
    found = scan_ranges(spec, criterion, (float(args.emin), float(args.emax)),
                        threshold, grid)
    columns = ["criterion", "lo_internal", "hi_internal",
               "lo_" + _display_column(unit).split("_", 1)[1],
               "hi_" + _display_column(unit).split("_", 1)[1],
               "threshold", "ss_lo_family", "ss_lo_index", "ss_lo_internal",
               "ss_hi_family", "ss_hi_index", "ss_hi_internal", "interior_zeros"]
    rows = []
    for r in found:
        rows.append([
            r.criterion.value, r.lo, r.hi,
            convert_energy(r.lo, EnergyUnit.INTERNAL, unit),
            convert_energy(r.hi, EnergyUnit.INTERNAL, unit),
            r.threshold,
            r.bracketing_ss[0].kind.value, r.bracketing_ss[0].index,
            r.bracketing_ss[0].energy,
            r.bracketing_ss[1].kind.value, r.bracketing_ss[1].index,
            r.bracketing_ss[1].energy,
            ";".join(_fmt(p.energy) for p in r.interior_zeros),
        ])
    _emit(args, columns, rows, {
        "command": "ranges",
        "params": {"v0": spec.v0, "rho": spec.rho, "mass": spec.mass,
                   "criterion": criterion.value, "emin": float(args.emin),
                   "emax": float(args.emax), "threshold": threshold,
                   "grid": grid, "units": unit.value},
    })
    return 0


# -- reference table -------------------------------------------------------------


def _table1_rows():
    """Computed-vs-published rows; the published values carry their units."""
    ev = EnergyUnit.ELECTRON_VOLT
    rows = []

    spec1 = PotentialSpec(v0=1.2, rho=1.8, mass=1.0)
    ccl = cc_left_energies(spec1, 5)
    for point, ref in zip(ccl[:3], (16.94, 55.50, 105.07)):
        rows.append(("cc_left", f"E_{point.index}^l", spec1,
                     convert_energy(point.energy, to_units=ev), ref, "eV"))
    for point, ref in zip(cc_right_energies(spec1, 3), (5.51, 22.04, 49.58)):
        rows.append(("cc_right", f"E_{point.index}^r", spec1,
                     convert_energy(point.energy, to_units=ev), ref, "eV"))

    spec5 = PotentialSpec(v0=2.0, rho=2.0, mass=1.0)
    cpa_f = {(p.kind, p.index): p for p in cpa_energies_forward(spec5, 6)}
    for (kind, index), ref in (
        ((SpectralFamily.CPA_FORWARD_A2, 1), 27.2),
        ((SpectralFamily.CPA_FORWARD_A3, 4), 54.4),
        ((SpectralFamily.CPA_FORWARD_A2, 2), 61.2),
    ):
        point = cpa_f[(kind, index)]
        label = f"E_n1={index}" if kind is SpectralFamily.CPA_FORWARD_A2 else f"E_n2={index}"
        rows.append(("cpa_forward", label, spec5,
                     convert_energy(point.energy, to_units=ev), ref, "eV"))
    cpa_tr = {p.index: p for p in cpa_energies_time_reversed(spec5, 5)}
    for index, ref in ((3, 37.03), (4, 83.32), (5, 143.92)):
        rows.append(("cpa_time_reversed", f"E*_M={index}", spec5,
                     convert_energy(cpa_tr[index].energy, to_units=ev), ref, "eV"))
    return rows


def _table1_ranges():
    """(label, spec, criterion, window_internal, threshold, published_lo, published_hi, unit)"""
    ev = EnergyUnit.ELECTRON_VOLT
    mev = EnergyUnit.MEGA_ELECTRON_VOLT
    def internal(x, unit):
        return convert_energy(x, unit, EnergyUnit.INTERNAL)
    return [
        ("cc_range_narrow", PotentialSpec(1.0, 0.0006, 1.0), RangeCriterion.CC_LEFT_RANGE,
         (internal(81.60, ev), internal(81.75, ev)), 1e-6, 81.6791, 81.6954, ev),
        ("cc_range_wide", PotentialSpec(5.5e6, 60.0, 1.0), RangeCriterion.CC_LEFT_RANGE,
         (internal(1.30, mev), internal(3.17, mev)), 1e-3, 1.37, 1.83, mev),
        ("cpa_range_narrow", PotentialSpec(15.0, 0.001, 1.0), RangeCriterion.CPA_RANGE,
         (internal(408.05, ev), internal(408.30, ev)), 1e-6, 408.096, 408.258, ev),
        ("cpa_range_wide", PotentialSpec(5.5e6, 60.0, 1.0), RangeCriterion.CPA_RANGE,
         (internal(0.054, mev), internal(0.098, mev)), 1e-6, 0.055, 0.097, mev),
    ]


def cmd_table1(args) -> int:
    columns = ["row", "quantity", "params", "computed", "published", "unit",
               "rel_dev", "status"]
    rows = []
    failed = False
    for family, label, spec, computed, ref, unit in _table1_rows():
        dev = abs(computed - ref) / abs(ref)
        ok = dev <= 0.005
        failed = failed or not ok
        rows.append([family, label,
                     f"v0={spec.v0:g} rho={spec.rho:g} m={spec.mass:g}",
                     computed, float(ref), unit, dev, "PASS" if ok else "FAIL"])
    for label, spec, criterion, window, threshold, plo, phi, unit in _table1_ranges():
        found = scan_ranges(spec, criterion, window, threshold,
                            grid_points=int(args.grid or 1024))
        overlap = any(
            convert_energy(r.lo, to_units=unit) < phi
            and convert_energy(r.hi, to_units=unit) > plo
            for r in found
        )
        failed = failed or not overlap
        span = "none" if not found else (
            f"{convert_energy(found[0].lo, to_units=unit):.6g}.."
            f"{convert_energy(found[-1].hi, to_units=unit):.6g}"
        )
        rows.append([label, f"overlap[{plo:g}, {phi:g}]",
                     f"v0={spec.v0:g} rho={spec.rho:g} m={spec.mass:g}",
                     span, f"{plo:g}..{phi:g}",
                     {EnergyUnit.ELECTRON_VOLT: "eV",
                      EnergyUnit.MEGA_ELECTRON_VOLT: "MeV"}[unit],
                     "overlap" if overlap else "disjoint",
                     "PASS" if overlap else "FAIL"])
    _emit(args, columns,
          [[v if isinstance(v, str) else v for v in row] for row in rows],
          {"command": "table1", "params": {"grid": int(args.grid or 1024)}})
    return 2 if failed else 0


# -- verification suite -----------------------------------------------------------


def _suite_gamma_reflection(rng, n=1000):
    worst = 0.0
    for _ in range(n):
        z = complex(rng.uniform(-30, 30), rng.uniform(-30, 30))
        if abs(z.real - round(z.real)) < 1e-3 and abs(z.imag) < 1e-3:
            continue
        lhs = log_gamma(z) + log_gamma(1.0 - z)
        rhs = math.pi / np.sin(math.pi * complex(z))
        worst = max(worst, abs(np.exp(lhs) - rhs) / abs(rhs))
    return worst, 1e-10


def _suite_gamma_recurrence(rng, n=1000):
    worst = 0.0
    for _ in range(n):
        z = complex(rng.uniform(-30, 30), rng.uniform(-30, 30))
        if abs(z.real - round(z.real)) < 1e-3 and abs(z.imag) < 1e-3:
            continue
        got = np.exp(log_gamma(z + 1.0) - log_gamma(z))
        worst = max(worst, abs(got - complex(z)) / abs(z))
    return worst, 1e-12


def _random_channel(rng):
    while True:
        a2 = rng.uniform(0.05, 20.0)
        a3 = rng.uniform(0.05, 20.0)
        if a3 <= a2:
            a2, a3 = a3, a2 + 0.05
        dists = [abs(x - round(x)) for x in (2 * a2, 2 * a3, a3 - a2, a3 + a2)]
        if min(dists) > 5e-3:
            return a2, a3


def _suite_gamma_identity(rng, n=1000):
    from .amplitudes import ChannelParams, g_factors

    worst = 0.0
    for _ in range(n):
        a2, a3 = _random_channel(rng)
        ch = ChannelParams(energy=1.0, k1=a2, k2=a3, a2=a2, a3=a3, mass=1.0)
        gf = g_factors(ch)
        lhs = gf.g4 * gf.g1 + SingularValue.from_complex(a2 / a3)
        worst = max(worst, lhs.relative_difference(gf.g2 * gf.g3))
    return worst, 1e-9


def _suite_hermitian(rng, n=200):
    worst = 0.0
    for _ in range(n):
        v0 = rng.uniform(0.2, 6.0)
        delta = rng.uniform(0.4, 3.0)
        energy = rng.uniform(0.05, 12.0)
        amps = hermitian_amplitudes(v0, delta, 1.0, energy)
        unitarity = abs(amps.Rl.magnitude + amps.T.magnitude - 1.0)
        recip = abs(math.exp(amps.rl.log_magnitude) - math.exp(amps.rr.log_magnitude))
        det_dev = abs(amps.det_s.magnitude - 1.0)
        worst = max(worst, unitarity, recip, det_dev)
    return worst, 1e-10


def _suite_duality(rng, n=5):
    worst = 0.0
    for _ in range(n):
        spec = PotentialSpec(v0=rng.uniform(0.5, 4.0), rho=rng.uniform(0.8, 2.5), mass=1.0)
        forward = cc_left_energies(spec, 6)
        mirrored = ss_energies(spec, Side.LEFT, 6)
        for a, b in zip(forward, mirrored):
            worst = max(worst, abs(a.energy - b.energy))
            amps = amplitudes(spec, a.energy)
            tr = amplitudes(replace(spec, variant=Variant.TIME_REVERSED), a.energy)
            if a.degenerate:
                continue
            if not (amps.rl.is_zero and amps.tl.is_zero and tr.Rl.is_pole):
                worst = math.inf
    return worst, 1e-12


def _suite_spacing(rng, n=4):
    worst = 0.0
    for _ in range(n):
        spec = PotentialSpec(v0=rng.uniform(0.5, 8.0), rho=rng.uniform(0.5, 2.5), mass=1.0)
        scale = spec.rho ** 2 / (16.0 * spec.mass)
        ccl = cc_left_energies(spec, 8)
        for a, b in zip(ccl, ccl[1:]):
            ref = scale * (2 * a.index + 1)
            worst = max(worst, abs((b.energy - a.energy) - ref) / ref)
        ccr = cc_right_energies(spec, 8)
        for a, b in zip(ccr, ccr[1:]):
            ref = scale * (2 * a.index + 1)
            worst = max(worst, abs((b.energy - a.energy) - ref) / ref)
    return worst, 1e-12


def _suite_rzero_spacing(rng, n=3):
    worst = 0.0
    specs = [PotentialSpec(v0=50.0, rho=1.0, mass=1.0),
             PotentialSpec(v0=8.0, rho=1.0, mass=1.0),
             PotentialSpec(v0=30.0, rho=1.5, mass=1.0)]
    for spec in specs[:n]:
        zeros = rprime_left_zeros(spec)
        for a, b in zip(zeros, zeros[1:]):
            n_idx = a.index
            ref = (2 * n_idx + 1) * (
                spec.rho ** 2 / (16.0 * spec.mass)
                - spec.mass * spec.v0 ** 2
                / (n_idx ** 2 * (n_idx + 1) ** 2 * spec.rho ** 2)
            )
            worst = max(worst, abs((b.energy - a.energy) - ref) / abs(ref))
    return worst, 1e-9


def _suite_zeta_independence(rng, n=20):
    for _ in range(n):
        spec = PotentialSpec(v0=rng.uniform(0.5, 4.0), rho=rng.uniform(0.8, 2.5), mass=1.0)
        energy = rng.uniform(0.2, 8.0)
        base = amplitudes(replace(spec, zeta=0.0), energy)
        for zeta in (-2.0, 3.0):
            other = amplitudes(replace(spec, zeta=zeta), energy)
            if (other.rl, other.rr, other.tl) != (base.rl, base.rr, base.tl):
                return math.inf, 0.0
    return 0.0, 0.0


def _suite_oracle(rng, n=8):
    from .amplitudes import channel_params, g_factors
    from .oracle import oracle_domain_ok

    worst = 0.0
    done = 0
    while done < n:
        spec = PotentialSpec(v0=rng.uniform(0.5, 5.0), rho=rng.uniform(0.5, 3.0), mass=1.0)
        energy = rng.uniform(0.1, 10.0)
        if not oracle_domain_ok(spec, energy):
            continue
        done += 1
        gf = g_factors(channel_params(spec, energy))
        got = oracle_g_factors(spec, energy)
        for sv, num in zip((gf.g1, gf.g2, gf.g3, gf.g4), got):
            worst = max(worst, abs(sv.to_complex() - num) / abs(num))
    return worst, 1e-6


def cmd_verify(args) -> int:
    seed = int(args.seed if args.seed is not None else 20260810)
    suites = [
        ("gamma_reflection", _suite_gamma_reflection),
        ("gamma_recurrence", _suite_gamma_recurrence),
        ("gamma_identity", _suite_gamma_identity),
        ("hermitian_unitarity", _suite_hermitian),
        ("cc_ss_duality", _suite_duality),
        ("cc_spacing_laws", _suite_spacing),
        ("rzero_spacing_corrected", _suite_rzero_spacing),
        ("zeta_independence", _suite_zeta_independence),
        ("oracle_agreement", _suite_oracle),
    ]
    columns = ["suite", "max_deviation", "tolerance", "status"]
    rows = []
    failed = False
    for name, fn in suites:
        rng = np.random.default_rng(seed)
        worst, tol = fn(rng)
        ok = worst <= tol
        failed = failed or not ok
        rows.append([name, float(worst), float(tol), "PASS" if ok else "FAIL"])
    _emit(args, columns, rows, {"command": "verify", "params": {"seed": seed}})
    return 2 if failed else 0


def cmd_potential(args) -> int:
    spec = _spec_from_args(args)
    xs = [float(x) for x in (args.x or ["2.0", "4.0"])]
    zmin = float(args.zmin if args.zmin is not None else -4.0)
    zmax = float(args.zmax if args.zmax is not None else 4.0)
    points = int(args.points if args.points is not None else 200)
    if points < 2 or zmax <= zmin:
        raise ValueError("need points >= 2 and zmax > zmin")
    zeta = np.linspace(zmin, zmax, points)
    profiles = [potential_profile(spec, x, zeta) for x in xs]
    columns = ["zeta"]
    for x in xs:
        tag = f"{x:g}".replace("-", "m").replace(".", "p")
        columns += [f"re_V_x{tag}", f"im_V_x{tag}"]
    rows = []
    for i, z in enumerate(zeta):
        row = [float(z)]
        for profile in profiles:
            row += [float(profile[i].real), float(profile[i].imag)]
        rows.append(row)
    _emit(args, columns, rows, {
        "command": "potential",
        "params": {"v0": spec.v0, "rho": spec.rho, "x": xs,
                   "zmin": zmin, "zmax": zmax, "points": points},
    })
    return 0


# -- wiring -----------------------------------------------------------------------


def _add_common(sub, spec_flags=True, window_flags=False):
    sub.add_argument("--config", help="key = value file supplying defaults")
    sub.add_argument("--format", choices=("csv", "json"), default=None)
    sub.add_argument("--out", help="write output to PATH instead of stdout")
    sub.add_argument("--units", choices=tuple(_UNIT_CHOICES), default=None)
    if spec_flags:
        sub.add_argument("--v0", type=float, default=None)
        sub.add_argument("--rho", type=float, default=None)
        sub.add_argument("--mass", type=float, default=None)
        sub.add_argument("--zeta", type=float, default=None)
        sub.add_argument("--variant", default=None,
                         help="forward or time-reversed")
    if window_flags:
        sub.add_argument("--emin", type=float, default=None)
        sub.add_argument("--emax", type=float, default=None)


def build_parser() -> _Parser:
    parser = _Parser(prog="wsabsorb",
                     description="Scattering analysis of the gain/loss-symmetric "
                                 "complexified Wood-Saxon potential.")
    subs = parser.add_subparsers(dest="command", required=True)

    scan = subs.add_parser("scan", help="amplitude scan over an energy window")
    _add_common(scan, window_flags=True)
    scan.add_argument("--points", type=int, default=None)
    scan.set_defaults(func=cmd_scan)

    spectrum = subs.add_parser("spectrum", help="closed-form critical energies")
    _add_common(spectrum)
    spectrum.add_argument("--families", default=None,
                          help="comma list of " + ",".join(_FAMILY_CHOICES)
                               + ", or all/none")
    spectrum.add_argument("--max-count", dest="max_count", type=int, default=None)
    spectrum.set_defaults(func=cmd_spectrum)

    ranges = subs.add_parser("ranges", help="certified absorption ranges")
    _add_common(ranges, window_flags=True)
    ranges.add_argument("--criterion", choices=("cc-left", "cpa"), default="cc-left")
    ranges.add_argument("--threshold", type=float, default=None)
    ranges.add_argument("--grid", type=int, default=None)
    ranges.set_defaults(func=cmd_ranges)

    table1 = subs.add_parser("table1", help="reproduce the published reference table")
    _add_common(table1, spec_flags=False)
    table1.add_argument("--grid", type=int, default=None)
    table1.set_defaults(func=cmd_table1)

    verify = subs.add_parser("verify", help="run the cross-module invariant suites")
    _add_common(verify, spec_flags=False)
    verify.add_argument("--seed", type=int, default=None)
    verify.set_defaults(func=cmd_verify)

    potential = subs.add_parser("potential", help="sample the complex potential")
    _add_common(potential)
    potential.add_argument("--x", action="append", default=None,
                           help="real offset; repeatable")
    potential.add_argument("--zmin", type=float, default=None)
    potential.add_argument("--zmax", type=float, default=None)
    potential.add_argument("--points", type=int, default=None)
    potential.set_defaults(func=cmd_potential)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.format is None:
        args.format = "csv"
    try:
        _overlay_config(args)
        return args.func(args)
    except (ValueError, OSError) as exc:
        sys.stderr.write(f"error: {exc}\n")
        return 1


if __name__ == "__main__":
    sys.exit(main())

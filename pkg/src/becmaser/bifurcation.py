"""Parameter sweeps, branch assembly, transition detection and symmetry diagnostics."""
from __future__ import annotations

import dataclasses
import enum
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass

import numpy as np

from .dynamics import IntegratorConfig, Termination, integrate
from .models import PhaseState, WeakRegimeModel
from .stationary import (DEFAULT_GRID, FixedPoint, Stability, find_fixed_points)

JUMP_THRESHOLD = 0.05
SYMMETRY_TOL = 1e-6
ASYMMETRY_TOL = 1e-4

_FIELDS = {
    "lambda": "coupling_ratio", "Lambda": "coupling_ratio", "coupling_ratio": "coupling_ratio",
    "k": "excitation_ratio", "excitation_ratio": "excitation_ratio",
    "delta": "detuning", "Delta": "detuning", "detuning": "detuning",
}
_NAMES = {"coupling_ratio": "Lambda", "excitation_ratio": "k", "detuning": "Delta"}


class NoTransitionError(RuntimeError):
    pass


def _field(parameter_name: str) -> str:
    try:
        return _FIELDS[parameter_name]
    except KeyError:
        raise ValueError(f"unknown sweep parameter {parameter_name!r}") from None


def with_parameter(model, parameter_name: str, value: float):
    return dataclasses.replace(model, **{_field(parameter_name): float(value)})


@dataclass
class BifurcationBranch:
    parameter_name: str
    phi_star: float
    branch_id: str
    parameter_values: list[float] = dataclasses.field(default_factory=list)
    points: list[FixedPoint] = dataclasses.field(default_factory=list)


@dataclass(frozen=True)
class PitchforkReport:
    parameter_name: str
    critical_value: float
    bracket: tuple[float, float]
    pre_count: int
    post_count: int
    pre_stable: int
    post_stable: int
    new_saddle: FixedPoint | None
    estimate_kc: float | None = None


def _fixed_points_job(args):
    model, n = args
    return find_fixed_points(model, n)


def fixed_points_many(models, n: int = DEFAULT_GRID, workers: int = 1) -> list[list[FixedPoint]]:
    jobs = [(m, n) for m in models]
    if workers > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            return list(pool.map(_fixed_points_job, jobs, chunksize=max(1, len(jobs) // (4 * workers))))
    return [_fixed_points_job(j) for j in jobs]


def link_branches(parameter_name, values, point_sets, jump=JUMP_THRESHOLD) -> list[BifurcationBranch]:
    """Connect fixed points across ascending parameter samples by nearest z*.

    A point continues the open branch (same Phi*) whose last z* is closest,
    provided the jump stays below ``jump``; otherwise it opens a new branch.
    """
    branches: list[BifurcationBranch] = []
    open_: dict[float, list[BifurcationBranch]] = {}
    counters: dict[float, int] = {}
    for p, fps in zip(values, point_sets):
        for phi in sorted({fp.phi_star for fp in fps} | set(open_)):
            current = [fp for fp in fps if fp.phi_star == phi]
            candidates = open_.get(phi, [])
            pairs = sorted(
                (abs(fp.z_star - br.points[-1].z_star), i, j)
                for i, fp in enumerate(current) for j, br in enumerate(candidates)
            )
            used_fp, used_br, still_open = set(), set(), []
            for dist, i, j in pairs:
                if dist >= jump or i in used_fp or j in used_br:
                    continue
                used_fp.add(i)
                used_br.add(j)
                candidates[j].parameter_values.append(p)
                candidates[j].points.append(current[i])
                still_open.append(candidates[j])
            for i, fp in enumerate(current):
                if i in used_fp:
                    continue
                n = counters.get(phi, 0)
                counters[phi] = n + 1
                label = "0" if phi == 0.0 else "pi"
                br = BifurcationBranch(_NAMES[_field(parameter_name)], phi, f"phi{label}-{n:03d}", [p], [fp])
                branches.append(br)
                still_open.append(br)
            open_[phi] = sorted(still_open, key=lambda b: b.points[-1].z_star)
    return branches


def sweep(model_template, parameter_name: str, lo: float, hi: float, samples: int,
          n: int = DEFAULT_GRID, jump: float = JUMP_THRESHOLD, workers: int = 1,
          reverse: bool = False) -> list[BifurcationBranch]:
    """Fixed-point branches of ``model_template`` as one parameter is varied.

    Samples are always linked in ascending order, so ``reverse`` only changes
    the evaluation order and never the result.
    """
    if not lo < hi:
        raise ValueError("sweep range requires lo < hi")
    if samples < 2:
        raise ValueError("sweep needs at least two samples")
    values = np.linspace(lo, hi, samples)
    if reverse:
        values = values[::-1]
    models = [with_parameter(model_template, parameter_name, v) for v in values]
    sets = fixed_points_many(models, n, workers)
    order = np.argsort(values, kind="stable")
    return link_branches(parameter_name, [float(values[i]) for i in order],
                         [sets[i] for i in order], jump)


def _counts(model, phi_star, n):
    fps = [fp for fp in find_fixed_points(model, n) if fp.phi_star == phi_star]
    stable = sum(fp.stability is Stability.CENTER for fp in fps)
    return stable, fps


def critical_parameter(model_template, parameter_name: str, lo: float, hi: float,
                       tol: float, phi_star: float = 0.0, n: int = DEFAULT_GRID) -> PitchforkReport:
    """Bisect on the number of stable fixed points at ``phi_star``."""
    if not lo < hi:
        raise ValueError("bracket requires lo < hi")
    s_lo, fp_lo = _counts(with_parameter(model_template, parameter_name, lo), phi_star, n)
    s_hi, fp_hi = _counts(with_parameter(model_template, parameter_name, hi), phi_star, n)
    if s_lo == s_hi:
        raise NoTransitionError(
            f"stable count at phi*={phi_star:g} is {s_lo} at both ends of [{lo:g}, {hi:g}]")
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        if mid <= lo or mid >= hi:
            break
        s_mid, fp_mid = _counts(with_parameter(model_template, parameter_name, mid), phi_star, n)
        if s_mid == s_lo:
            lo, fp_lo = mid, fp_mid
        else:
            hi, fp_hi = mid, fp_mid
    richer = fp_lo if len(fp_lo) >= len(fp_hi) else fp_hi
    saddles = [fp for fp in richer if fp.stability is Stability.SADDLE]
    field = _field(parameter_name)
    estimate = None
    if field == "excitation_ratio" and isinstance(model_template, WeakRegimeModel):
        estimate = 0.5 * model_template.coupling_ratio ** 2
    return PitchforkReport(
        parameter_name=_NAMES[field],
        critical_value=0.5 * (lo + hi),
        bracket=(lo, hi),
        pre_count=len(fp_lo), post_count=len(fp_hi),
        pre_stable=sum(fp.stability is Stability.CENTER for fp in fp_lo),
        post_stable=sum(fp.stability is Stability.CENTER for fp in fp_hi),
        new_saddle=saddles[0] if saddles else None,
        estimate_kc=estimate,
    )


def critical_excitation(detuning: float, coupling_ratio: float, k_range: tuple[float, float],
                        tol: float, phi_star: float = 0.0, n: int = DEFAULT_GRID) -> PitchforkReport:
    """Locate the Rabi/Josephson transition in k; the report carries Lambda^2/2 alongside."""
    template = WeakRegimeModel(detuning, coupling_ratio, k_range[0])
    return critical_parameter(template, "k", k_range[0], k_range[1], tol, phi_star, n)


# --------------------------------------------------------------------------
# Symmetry diagnostic
# --------------------------------------------------------------------------

class Symmetry(str, enum.Enum):
    IDENTICAL = "identical"
    LOCALIZED_SYMMETRIC = "localized_symmetric"
    LOCALIZED_ASYMMETRIC = "localized_asymmetric"
    ASYMMETRIC_ORBITS = "asymmetric_orbits"


@dataclass(frozen=True)
class SymmetryReport:
    classification: Symmetry
    mirror_gap: float
    extents_plus: tuple[float, float]
    extents_minus: tuple[float, float]
    terminations: tuple[Termination, Termination]

    @property
    def symmetric(self) -> bool:
        return self.classification in (Symmetry.IDENTICAL, Symmetry.LOCALIZED_SYMMETRIC)


def symmetry_diagnostic(model, z0: float, phi0: float, t_end: float,
                        dt: float = 1e-3) -> SymmetryReport:
    """Compare the orbits launched from (+z0, phi0) and (-z0, phi0).

    The mirror gap is the largest disagreement between the z-extent of one
    orbit and the reflected z-extent of the other.  Orbits that never change
    the sign of z are localized (self-trapped).
    """
    cfg = IntegratorConfig(t_end=t_end, dt=dt)
    zp = abs(z0)
    tp = integrate(model, PhaseState(zp, phi0), cfg)
    tm = integrate(model, PhaseState(-zp, phi0), cfg)
    ext_p = (float(tp.z.min()), float(tp.z.max()))
    ext_m = (float(tm.z.min()), float(tm.z.max()))
    gap = max(abs(ext_p[1] + ext_m[0]), abs(ext_p[0] + ext_m[1]))
    localized = ext_p[0] > 0.0 and ext_m[1] < 0.0
    if localized:
        cls = Symmetry.LOCALIZED_SYMMETRIC if gap <= SYMMETRY_TOL else Symmetry.LOCALIZED_ASYMMETRIC
    else:
        cls = Symmetry.IDENTICAL if gap <= SYMMETRY_TOL else Symmetry.ASYMMETRIC_ORBITS
    return SymmetryReport(cls, gap, ext_p, ext_m, (tp.termination, tm.termination))


# --------------------------------------------------------------------------
# Energy landscape
# --------------------------------------------------------------------------

@dataclass(frozen=True)
class Landscape:
    phi: np.ndarray
    z: np.ndarray
    energy: np.ndarray        # shape (len(phi), len(z)); nan where undefined
    defined: np.ndarray
    normalized: np.ndarray
    raw_min: float | None
    raw_max: float | None


def landscape(model: WeakRegimeModel, z_samples, phi_samples) -> Landscape:
    """Energy over a (Phi, z) grid, normalised to [0, 1] over the accessible cells."""
    z = np.asarray(z_samples, dtype=float)
    phi = np.asarray(phi_samples, dtype=float)
    if z.size < 2 or phi.size < 2:
        raise ValueError("landscape needs at least two samples per axis")
    energy = np.full((phi.size, z.size), np.nan)
    defined = np.zeros_like(energy, dtype=bool)
    for j, zj in enumerate(z):
        if not model.accessible(zj):
            continue
        defined[:, j] = True
        for i, p in enumerate(phi):
            energy[i, j] = model.energy(zj, p)
    if defined.any():
        lo, hi = float(np.min(energy[defined])), float(np.max(energy[defined]))
        span = hi - lo
        norm = (energy - lo) / span if span > 0 else np.where(defined, 0.0, np.nan)
    else:
        lo = hi = None
        norm = np.full_like(energy, np.nan)
    return Landscape(phi, z, energy, defined, norm, lo, hi)


def empty_landscape(z_samples, phi_samples) -> Landscape:
    """All-undefined grid, for excitation ratios below -1 where no state is accessible."""
    z = np.asarray(z_samples, dtype=float)
    phi = np.asarray(phi_samples, dtype=float)
    nan = np.full((phi.size, z.size), np.nan)
    return Landscape(phi, z, nan, np.zeros(nan.shape, dtype=bool), nan.copy(), None, None)


def default_landscape_axes(z_samples: int = 201, phi_samples: int = 201):
    return np.linspace(-1.0, 1.0, z_samples), np.linspace(-math.pi, math.pi, phi_samples)

"""Stationary states: excitation-ratio curve, admissible z-domain, fixed points."""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np

from .models import DoubleWellModel, ModelError, WeakRegimeModel

STATIONARY_PHASES = (0.0, math.pi)
DEFAULT_GRID = 4096
STABILITY_TOL = 1e-10


class Stability(str, enum.Enum):
    CENTER = "center"
    SADDLE = "saddle"
    DEGENERATE = "degenerate"


class Branch(str, enum.Enum):
    PLUS = "plus"
    MINUS = "minus"
    DOUBLE_WELL_SYMMETRIC = "double_well_symmetric"
    DOUBLE_WELL_BROKEN = "double_well_broken"


@dataclass(frozen=True)
class FixedPoint:
    z_star: float
    phi_star: float
    stability: Stability
    branch: Branch
    residual: float = 0.0

    def sort_key(self):
        return (self.phi_star, self.z_star)


@dataclass(frozen=True)
class AdmissibleDomain:
    intervals: tuple[tuple[float, float], ...]
    z_minus: float | None = None
    z_plus: float | None = None

    def contains(self, z: float, tol: float = 0.0) -> bool:
        return any(lo - tol <= z <= hi + tol for lo, hi in self.intervals)


# --------------------------------------------------------------------------
# Excitation-ratio curve
# --------------------------------------------------------------------------

def excitation_ratio_curve(z: float, detuning: float, coupling_ratio: float,
                           branch: Branch | str) -> float:
    """Excitation ratio k for which (z, Phi*) is stationary, on one of two branches.

    Evaluated through the equivalent form

        k = z + (1 - z^2) (|a| +/- b)^2 / (8 z^2),   a = Delta + Lambda z,
                                                    b = sqrt(a^2 - 4 z)

    with the minus branch rationalised, (|a| - b) = 4 z / (|a| + b), so no
    cancellation occurs when a^2 >> |z|.
    """
    branch = Branch(branch)
    if branch not in (Branch.PLUS, Branch.MINUS):
        raise ValueError(f"branch must be plus or minus, got {branch.value}")
    if z == 0.0:
        raise ValueError("excitation-ratio curve is undefined at z = 0")
    if not abs(z) <= 1.0:
        raise ValueError(f"|z| must be <= 1, got {z!r}")
    a = abs(detuning + coupling_ratio * z)
    disc = a * a - 4.0 * z
    if disc < 0.0:
        raise ValueError(f"(Delta + Lambda z)^2 - 4z = {disc:.3e} < 0: z not admissible")
    b = math.sqrt(disc)
    w = 1.0 - z * z
    if branch is Branch.PLUS:
        return z + w * (a + b) ** 2 / (8.0 * z * z)
    if a + b == 0.0:
        # a = b = 0 only when z = 0, excluded above
        raise ValueError("degenerate minus branch")
    return z + 2.0 * w / (a + b) ** 2


def excitation_ratio_printed(z, detuning, coupling_ratio, branch):
    """Direct transcription of the closed form, kept as an independent check."""
    sgn = 1.0 if Branch(branch) is Branch.PLUS else -1.0
    a = detuning + coupling_ratio * z
    return ((3 * z * z - 1) / (2 * z)
            + (1 - z * z) * abs(a) / (4 * z * z) * (abs(a) + sgn * math.sqrt(a * a - 4 * z)))


def stationary_phase_for(z: float, k: float, detuning: float, coupling_ratio: float,
                         tol: float = 1e-9) -> float | None:
    """Stationary phase (0 or pi) at which (z, k) zeroes Phidot, or None."""
    model = WeakRegimeModel(detuning, coupling_ratio, k)
    best, best_res = None, math.inf
    for phi in STATIONARY_PHASES:
        try:
            res = abs(model.rhs(z, phi)[1])
        except ModelError:
            continue
        if res < best_res:
            best, best_res = phi, res
    return best if best_res < tol else None


# --------------------------------------------------------------------------
# Admissible domain
# --------------------------------------------------------------------------

def admissible_domain(detuning: float, coupling_ratio: float) -> AdmissibleDomain:
    """z-values for which (Delta + Lambda z)^2 >= 4 z, i.e. a real excitation ratio exists."""
    d, lam = detuning, coupling_ratio
    if lam == 0.0:
        hi = min(1.0, d * d / 4.0)
        return AdmissibleDomain(((-1.0, hi),))
    s = 1.0 - d * lam
    if s < 0.0:
        return AdmissibleDomain(((-1.0, 1.0),))
    root = math.sqrt(s)
    z_minus = (2.0 - d * lam - 2.0 * root) / (lam * lam)
    z_plus = (2.0 - d * lam + 2.0 * root) / (lam * lam)
    pieces = []
    for lo, hi in ((-1.0, min(z_minus, 1.0)), (max(z_plus, -1.0), 1.0)):
        if lo > hi:
            continue
        if pieces and lo <= pieces[-1][1]:
            # double root: the two pieces touch
            pieces[-1] = (pieces[-1][0], hi)
        else:
            pieces.append((lo, hi))
    return AdmissibleDomain(tuple(pieces), z_minus, z_plus)


def model_admissible_domain(model) -> AdmissibleDomain:
    if isinstance(model, WeakRegimeModel):
        return admissible_domain(model.detuning, model.coupling_ratio)
    return AdmissibleDomain(((-1.0, 1.0),))


# --------------------------------------------------------------------------
# Root scanning
# --------------------------------------------------------------------------

def scan_grid(lo: float, hi: float, n: int = DEFAULT_GRID) -> np.ndarray:
    """Uniform grid on [lo, hi] plus geometric clusters at both edges and near z = 0.

    Roots of Phidot pile up against the radical singularities at the edges
    and, for large coupling ratios, within ~1/Lambda^2 of zero.
    """
    width = hi - lo
    if width <= 0.0:
        return np.array([lo])
    offsets = width * np.logspace(-12, -2, 200)
    parts = [np.linspace(lo, hi, n), lo + offsets, hi - offsets]
    if lo < 0.0 < hi:
        tiny = np.logspace(-14, -1, 400)
        parts += [tiny, -tiny, np.array([0.0])]
    grid = np.unique(np.concatenate(parts))
    return grid[(grid >= lo) & (grid <= hi)]


def _phidot(model, z: float, phi: float) -> float:
    try:
        return model.rhs(z, phi)[1]
    except ModelError:
        return math.nan


def _bisect(g, a: float, b: float, ga: float, xtol: float) -> float:
    # continue to floating-point resolution; xtol is the contract, not the stop
    while True:
        m = 0.5 * (a + b)
        if m <= a or m >= b:
            break
        gm = g(m)
        if gm == 0.0:
            return m
        if math.isnan(gm):
            break
        if (gm < 0.0) == (ga < 0.0):
            a, ga = m, gm
        else:
            b = m
    return a if abs(g(a)) <= abs(g(b)) else b


def phidot_roots(model, phi: float, n: int = DEFAULT_GRID, xtol: float = 1e-12) -> list[float]:
    """All sign-change roots of Phidot(z, phi) over the model's accessible z-range."""
    bounds = model.z_bounds()
    if bounds is None:
        return []
    grid = scan_grid(*bounds, n)
    vals = np.array([_phidot(model, z, phi) for z in grid])
    g = lambda z: _phidot(model, z, phi)  # noqa: E731
    # a run of exact zeros is one root flattened below float resolution
    roots = []
    zero = vals == 0.0
    i = 0
    while i < len(grid):
        if zero[i]:
            j = i
            while j + 1 < len(grid) and zero[j + 1]:
                j += 1
            roots.append(float(grid[(i + j) // 2]))
            i = j + 1
        else:
            i += 1
    finite = np.isfinite(vals)
    for i in range(len(grid) - 1):
        if not (finite[i] and finite[i + 1]):
            continue
        if vals[i] * vals[i + 1] < 0.0:
            roots.append(_bisect(g, float(grid[i]), float(grid[i + 1]), float(vals[i]), xtol))
    return sorted(roots)


def classify_stability(model, fp_or_z, phi: float | None = None,
                       tol: float = STABILITY_TOL) -> Stability:
    """Center / saddle / degenerate from the Jacobian at a stationary phase.

    At Phi* in {0, pi} both diagonal entries of the Jacobian vanish, so the
    eigenvalues are +/- sqrt(P) with P the product of the off-diagonal
    entries.
    """
    if isinstance(fp_or_z, FixedPoint):
        z, phi = fp_or_z.z_star, fp_or_z.phi_star
    else:
        z = fp_or_z
    p = model.slope_product(z, phi)
    if p < -tol:
        return Stability.CENTER
    if p > tol:
        return Stability.SADDLE
    return Stability.DEGENERATE


def _weak_branch(model: WeakRegimeModel, z: float) -> Branch:
    if z == 0.0:
        return Branch.PLUS
    best, err = Branch.PLUS, math.inf
    for br in (Branch.PLUS, Branch.MINUS):
        try:
            k = excitation_ratio_curve(z, model.detuning, model.coupling_ratio, br)
        except ValueError:
            continue
        e = abs(k - model.excitation_ratio)
        if e < err:
            best, err = br, e
    return best


def _label(model, z: float, phi: float) -> Branch:
    if isinstance(model, WeakRegimeModel):
        return _weak_branch(model, z)
    return Branch.DOUBLE_WELL_SYMMETRIC if z == 0.0 else Branch.DOUBLE_WELL_BROKEN


def find_fixed_points(model, n: int = DEFAULT_GRID, phases=STATIONARY_PHASES) -> list[FixedPoint]:
    """Stationary states at Phi* in {0, pi}, sorted by (Phi*, z*).

    Dense sign-change bracketing of Phidot followed by bisection; each root
    is kept only if it lies in the admissible domain and is classified by
    :func:`classify_stability`.
    """
    domain = model_admissible_domain(model)
    out = []
    for phi in phases:
        for z in phidot_roots(model, phi, n):
            if not domain.contains(z, tol=1e-9):
                continue
            try:
                stab = classify_stability(model, z, phi)
            except ModelError:
                continue
            out.append(FixedPoint(z, phi, stab, _label(model, z, phi),
                                  abs(model.rhs(z, phi)[1])))
    return sorted(out, key=FixedPoint.sort_key)


def double_well_fixed_points(model: DoubleWellModel) -> list[FixedPoint]:
    """Closed-form fixed points of the symmetric double well.

    At Phi = pi the symmetric point z = 0 turns from center into saddle at
    Lambda = 1 and two broken-symmetry centers +/- sqrt(Lambda^2 - 1)/Lambda
    appear.  At Phi = 0 the same happens for Lambda < -1.
    """
    lam = model.coupling_ratio
    out = []
    for phi, eff in ((0.0, -lam), (math.pi, lam)):
        # Phidot = z (Lambda + cos(phi) / sqrt(1 - z^2)); eff = Lambda * cos(phi)
        out.append(FixedPoint(0.0, phi, classify_stability(model, 0.0, phi),
                              Branch.DOUBLE_WELL_SYMMETRIC))
        if eff > 1.0:
            zb = math.sqrt(eff * eff - 1.0) / eff
            for z in (-zb, zb):
                out.append(FixedPoint(z, phi, classify_stability(model, z, phi),
                                      Branch.DOUBLE_WELL_BROKEN,
                                      abs(model.rhs(z, phi)[1])))
    return sorted(out, key=FixedPoint.sort_key)

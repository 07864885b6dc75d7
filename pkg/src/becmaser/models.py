"""Mean-field energy functionals, equations of motion and parameter reduction.

Three reduced Hamiltonians on the (z, Phi) cylinder are provided:

* ``DoubleWellModel``       symmetric double well, a nonrigid pendulum
* ``AsymmetricDoubleWellModel``  tilted double well (extra linear term)
* ``WeakRegimeModel``       cavity-driven two-species condensate, where the
                            pendulum length also depends on the excitation
                            ratio ``k``

Every model exposes the same small protocol used by the integrator and the
fixed-point finder: ``energy``, ``rhs``, ``radicand``, ``z_bounds``,
``slope_product`` and ``accessible``.  All methods are scalar and pure.
"""
from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field

EPS_SING = 1e-9
WEAK_THRESHOLD = 0.01


class ModelError(ValueError):
    """Base class for invalid evaluations of a model."""


class DomainError(ModelError):
    """Population imbalance outside [-1, 1]."""


class SingularityError(ModelError):
    """Radical argument inside the singularity guard band."""


class InaccessibleError(ModelError):
    """State violates k - z >= 0 for the weak-regime model."""


class WeakRegimeWarning(UserWarning):
    pass


@dataclass(frozen=True)
class PhaseState:
    """Point on the phase cylinder.

    ``phi`` is kept unwrapped; use :meth:`canonical_phi` to compare phases.
    """

    z: float
    phi: float

    def canonical_phi(self) -> float:
        return canonical_phase(self.phi)


def canonical_phase(phi: float) -> float:
    """Map ``phi`` onto (-pi, pi]."""
    out = math.remainder(phi, 2.0 * math.pi)
    if out <= -math.pi:
        out += 2.0 * math.pi
    return out


def _check_z(z: float) -> None:
    if not abs(z) <= 1.0:
        raise DomainError(f"|z| must be <= 1, got z={z!r}")


# --------------------------------------------------------------------------
# Symmetric double well
# --------------------------------------------------------------------------

@dataclass(frozen=True)
class DoubleWellModel:
    coupling_ratio: float
    eps_sing: float = EPS_SING

    def __post_init__(self):
        if not math.isfinite(self.coupling_ratio):
            raise ValueError("coupling_ratio must be finite")

    def z_bounds(self) -> tuple[float, float] | None:
        return (-1.0, 1.0)

    def accessible(self, z: float) -> bool:
        return abs(z) <= 1.0

    def radicand(self, z: float) -> float:
        return 1.0 - z * z

    def energy(self, z: float, phi: float) -> float:
        _check_z(z)
        return 0.5 * self.coupling_ratio * z * z - math.sqrt(1.0 - z * z) * math.cos(phi)

    def rhs(self, z: float, phi: float) -> tuple[float, float]:
        _check_z(z)
        q = 1.0 - z * z
        if q < self.eps_sing:
            raise SingularityError(f"1 - z^2 = {q:.3e} inside guard band")
        r = math.sqrt(q)
        return -r * math.sin(phi), self.coupling_ratio * z + z * math.cos(phi) / r

    def slope_product(self, z: float, phi: float) -> float:
        """(d zdot / d Phi) * (d Phidot / d z) at a stationary phase."""
        q = 1.0 - z * z
        if q < self.eps_sing:
            raise SingularityError(f"1 - z^2 = {q:.3e} inside guard band")
        c = math.cos(phi)
        dzdot_dphi = -math.sqrt(q) * c
        dphidot_dz = self.coupling_ratio + c / (q * math.sqrt(q))
        return dzdot_dphi * dphidot_dz


# --------------------------------------------------------------------------
# Asymmetric double well
# --------------------------------------------------------------------------

@dataclass(frozen=True)
class AsymmetricDoubleWellModel:
    detuning: float
    coupling_ratio: float
    eps_sing: float = EPS_SING

    def __post_init__(self):
        if not (math.isfinite(self.detuning) and math.isfinite(self.coupling_ratio)):
            raise ValueError("detuning and coupling_ratio must be finite")

    def z_bounds(self) -> tuple[float, float] | None:
        return (-1.0, 1.0)

    def accessible(self, z: float) -> bool:
        return abs(z) <= 1.0

    def radicand(self, z: float) -> float:
        return 1.0 - z * z

    def energy(self, z: float, phi: float) -> float:
        _check_z(z)
        return (self.detuning + 0.5 * self.coupling_ratio * z) * z - math.sqrt(1.0 - z * z) * math.cos(phi)

    def rhs(self, z: float, phi: float) -> tuple[float, float]:
        _check_z(z)
        q = 1.0 - z * z
        if q < self.eps_sing:
            raise SingularityError(f"1 - z^2 = {q:.3e} inside guard band")
        r = math.sqrt(q)
        return (-r * math.sin(phi),
                self.detuning + self.coupling_ratio * z + z * math.cos(phi) / r)

    def slope_product(self, z: float, phi: float) -> float:
        q = 1.0 - z * z
        if q < self.eps_sing:
            raise SingularityError(f"1 - z^2 = {q:.3e} inside guard band")
        c = math.cos(phi)
        return (-math.sqrt(q) * c) * (self.coupling_ratio + c / (q * math.sqrt(q)))


# --------------------------------------------------------------------------
# Weak-regime cavity model
# --------------------------------------------------------------------------

@dataclass(frozen=True)
class WeakRegimeModel:
    """Weak-regime mean-field model with parameters (Delta, Lambda, k).

    Energies are in units of hbar N lambda / 2 and time in units of 1/lambda.
    ``printed_eq19=True`` switches the phase equation to the variant with
    ``+3 z^2`` in the numerator, which is *not* the gradient of the energy;
    it exists only for side-by-side comparison.
    """

    detuning: float
    coupling_ratio: float
    excitation_ratio: float
    printed_eq19: bool = False
    eps_sing: float = EPS_SING

    def __post_init__(self):
        for name in ("detuning", "coupling_ratio", "excitation_ratio"):
            if not math.isfinite(getattr(self, name)):
                raise ValueError(f"{name} must be finite")
        if self.excitation_ratio < -1.0:
            raise ValueError("excitation_ratio must be >= -1 for any state to be accessible")

    def z_bounds(self) -> tuple[float, float] | None:
        hi = min(1.0, self.excitation_ratio)
        return (-1.0, hi) if hi >= -1.0 else None

    def accessible(self, z: float) -> bool:
        return abs(z) <= 1.0 and self.excitation_ratio - z >= 0.0

    def radicand(self, z: float) -> float:
        return 2.0 * (1.0 - z * z) * (self.excitation_ratio - z)

    def energy(self, z: float, phi: float) -> float:
        _check_z(z)
        if self.excitation_ratio - z < 0.0:
            raise InaccessibleError(f"k - z = {self.excitation_ratio - z:.3e} < 0")
        rad = 2.0 * (self.excitation_ratio - z) * (1.0 - z * z)
        return (self.detuning + 0.5 * self.coupling_ratio * z) * z + math.sqrt(rad) * math.cos(phi)

    def _root(self, z: float) -> float:
        _check_z(z)
        if self.excitation_ratio - z < 0.0:
            raise InaccessibleError(f"k - z = {self.excitation_ratio - z:.3e} < 0")
        q = self.radicand(z)
        if q < self.eps_sing:
            raise SingularityError(f"2(1-z^2)(k-z) = {q:.3e} inside guard band")
        return math.sqrt(q)

    def _numerator(self, z: float) -> float:
        cubic = 3.0 * z * z
        if self.printed_eq19:
            return 1.0 + 2.0 * self.excitation_ratio * z + cubic
        return 1.0 + 2.0 * self.excitation_ratio * z - cubic

    def rhs(self, z: float, phi: float) -> tuple[float, float]:
        r = self._root(z)
        zdot = r * math.sin(phi)
        phidot = self.detuning + self.coupling_ratio * z - self._numerator(z) * math.cos(phi) / r
        return zdot, phidot

    def slope_product(self, z: float, phi: float) -> float:
        r = self._root(z)
        c = math.cos(phi)
        num = 1.0 + 2.0 * self.excitation_ratio * z - 3.0 * z * z
        dnum = 2.0 * self.excitation_ratio - 6.0 * z
        dzdot_dphi = r * c
        dphidot_dz = self.coupling_ratio - c * (dnum / r + num * num / (r * r * r))
        return dzdot_dphi * dphidot_dz


# --------------------------------------------------------------------------
# Functional API
# --------------------------------------------------------------------------

def energy_double_well(state: PhaseState, model: DoubleWellModel) -> float:
    return model.energy(state.z, state.phi)


def eom_double_well(state: PhaseState, model: DoubleWellModel) -> tuple[float, float]:
    return model.rhs(state.z, state.phi)


def energy_asym_double_well(state: PhaseState, model: AsymmetricDoubleWellModel) -> float:
    return model.energy(state.z, state.phi)


def eom_asym_double_well(state: PhaseState, model: AsymmetricDoubleWellModel) -> tuple[float, float]:
    return model.rhs(state.z, state.phi)


def energy_weak(state: PhaseState, model: WeakRegimeModel) -> float:
    return model.energy(state.z, state.phi)


def eom_weak(state: PhaseState, model: WeakRegimeModel) -> tuple[float, float]:
    return model.rhs(state.z, state.phi)


def accessible(state: PhaseState, model: WeakRegimeModel) -> bool:
    _check_z(state.z)
    return model.excitation_ratio - state.z >= 0.0


def photon_number(state: PhaseState, model: WeakRegimeModel, ensemble_size: int) -> float:
    """Mean photon number n = N (k - z) / 2 implied by the conserved excitation."""
    _check_z(state.z)
    gap = model.excitation_ratio - state.z
    if gap < 0.0:
        raise InaccessibleError(f"k - z = {gap:.3e} < 0")
    return 0.5 * ensemble_size * gap


# --------------------------------------------------------------------------
# Physical parameters -> effective weak-regime parameters
# --------------------------------------------------------------------------

@dataclass(frozen=True)
class PhysicalParams:
    field_frequency: float
    atom_frequency: float
    coupling: float
    kerr: float
    parametric: float
    intra_ensemble: float
    ensemble_size: int = 1

    def __post_init__(self):
        if self.ensemble_size < 1:
            raise ValueError("ensemble_size must be >= 1")
        if not self.field_frequency > 0:
            raise ValueError("field_frequency must be > 0")
        if not self.atom_frequency > 0:
            raise ValueError("atom_frequency must be > 0")


@dataclass(frozen=True)
class EffectiveReduction:
    eta: float
    nu: float
    omega: float
    delta: float
    lambda_coupling: float


@dataclass(frozen=True)
class Reduction:
    effective: EffectiveReduction
    detuning: float
    coupling_ratio: float
    warnings: tuple[str, ...] = field(default=())

    def model(self, excitation_ratio: float, **kwargs) -> WeakRegimeModel:
        return WeakRegimeModel(self.detuning, self.coupling_ratio, excitation_ratio, **kwargs)


def reduce_physical(params: PhysicalParams, threshold: float = WEAK_THRESHOLD) -> Reduction:
    """Effective frequencies and dimensionless (Delta, Lambda) from raw constants.

    A squeezing transformation contributes ``eta = chi / omega0`` and a
    polariton-like rotation contributes ``nu``; the rotating frame runs at
    ``omega = omega0 - 4 chi eta``.  Weak-regime violations (``eta`` or ``nu``
    above ``threshold``) are reported in ``Reduction.warnings`` and emitted
    as :class:`WeakRegimeWarning`, never raised.
    """
    w0 = params.field_frequency
    chi = params.parametric
    eta = chi / w0
    denom = params.atom_frequency + w0 - 4.0 * chi * eta
    if denom == 0.0:
        raise ZeroDivisionError("omega_a + omega0 - 4 chi eta vanishes")
    nu = params.coupling * (1.0 - 2.0 * eta) / denom
    omega = w0 - 4.0 * chi * eta
    delta = params.atom_frequency - omega
    lam = omega * nu
    if lam == 0.0:
        raise ZeroDivisionError("effective coupling lambda vanishes")

    notes = []
    if abs(eta) > threshold:
        notes.append(f"eta={eta:.6g} exceeds weak-regime threshold {threshold:g}")
    if abs(nu) > threshold:
        notes.append(f"nu={nu:.6g} exceeds weak-regime threshold {threshold:g}")
    for note in notes:
        warnings.warn(note, WeakRegimeWarning, stacklevel=2)

    return Reduction(
        effective=EffectiveReduction(eta=eta, nu=nu, omega=omega, delta=delta, lambda_coupling=lam),
        detuning=(delta + params.kerr) / lam,
        coupling_ratio=params.intra_ensemble / lam,
        warnings=tuple(notes),
    )

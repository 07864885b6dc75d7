"""Trajectory integration on the (z, Phi) cylinder."""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .models import ModelError, PhaseState


class Termination(str, enum.Enum):
    COMPLETED = "completed"
    BOUNDARY_HIT = "boundary_hit"
    STEP_UNDERFLOW = "step_underflow"


@dataclass(frozen=True)
class IntegratorConfig:
    t_end: float
    dt: float = 1e-3
    record_stride: int = 1
    boundary_margin: float = 1e-6
    adaptive: bool = False
    rtol: float = 1e-9

    def __post_init__(self):
        if not self.dt > 0:
            raise ValueError("dt must be > 0")
        if not self.t_end > 0:
            raise ValueError("t_end must be > 0")
        if int(self.record_stride) != self.record_stride or self.record_stride < 1:
            raise ValueError("record_stride must be a positive integer")


@dataclass(frozen=True)
class Trajectory:
    times: np.ndarray
    z: np.ndarray
    phi: np.ndarray
    energies: np.ndarray
    termination: Termination = Termination.COMPLETED

    def __len__(self) -> int:
        return len(self.times)

    @property
    def states(self) -> list[PhaseState]:
        return [PhaseState(float(a), float(b)) for a, b in zip(self.z, self.phi)]


class Crossing(NamedTuple):
    t: float
    state: PhaseState
    direction: int  # sign of dPhi/dt at the crossing


def _safe(model, z: float, phi: float, margin: float) -> bool:
    return (abs(z) <= 1.0 and model.accessible(z)
            and model.radicand(z) >= max(margin, model.eps_sing))


def _rk4_step(f, z, phi, h):
    k1z, k1p = f(z, phi)
    k2z, k2p = f(z + 0.5 * h * k1z, phi + 0.5 * h * k1p)
    k3z, k3p = f(z + 0.5 * h * k2z, phi + 0.5 * h * k2p)
    k4z, k4p = f(z + h * k3z, phi + h * k3p)
    return (z + h / 6.0 * (k1z + 2.0 * k2z + 2.0 * k3z + k4z),
            phi + h / 6.0 * (k1p + 2.0 * k2p + 2.0 * k3p + k4p))


def integrate(model, initial: PhaseState, config: IntegratorConfig,
              reverse: bool = False) -> Trajectory:
    """Integrate ``model`` from ``initial`` up to ``config.t_end``.

    Fixed-step classical RK4 by default; ``config.adaptive`` switches to an
    embedded 8(5,3) pair.  Integration stops with ``BOUNDARY_HIT`` as soon as
    the next state would leave the accessible region or come within
    ``boundary_margin`` of a radical singularity.  ``reverse=True`` integrates
    the negated vector field (time reversal).
    """
    z0, phi0 = float(initial.z), float(initial.phi)
    if not _safe(model, z0, phi0, config.boundary_margin):
        raise ValueError(f"invalid initial state {initial} for {model}")
    if config.adaptive:
        return _integrate_adaptive(model, z0, phi0, config, reverse)

    sign = -1.0 if reverse else 1.0

    def f(z, phi):
        a, b = model.rhs(z, phi)
        return sign * a, sign * b

    n_steps = int(round(config.t_end / config.dt))
    stride = int(config.record_stride)
    h = config.dt
    times, zs, phis = [0.0], [z0], [phi0]
    z, phi = z0, phi0
    termination = Termination.COMPLETED
    for i in range(1, n_steps + 1):
        try:
            zn, pn = _rk4_step(f, z, phi, h)
        except ModelError:
            termination = Termination.BOUNDARY_HIT
            break
        if not _safe(model, zn, pn, config.boundary_margin):
            termination = Termination.BOUNDARY_HIT
            break
        z, phi = zn, pn
        if i % stride == 0:
            times.append(i * h)
            zs.append(z)
            phis.append(phi)
    energies = [model.energy(a, b) for a, b in zip(zs, phis)]
    return Trajectory(np.array(times), np.array(zs), np.array(phis),
                      np.array(energies), termination)


def _integrate_adaptive(model, z0, phi0, config, reverse):
    from scipy.integrate import solve_ivp

    sign = -1.0 if reverse else 1.0
    margin = max(config.boundary_margin, model.eps_sing)

    def f(t, y):
        try:
            a, b = model.rhs(y[0], y[1])
        except ModelError:
            return [math.nan, math.nan]
        return [sign * a, sign * b]

    def edge(t, y):
        z = y[0]
        if abs(z) > 1.0 or not model.accessible(z):
            return -1.0
        return model.radicand(z) - margin
    edge.terminal = True
    edge.direction = -1

    step = config.dt * config.record_stride
    n_rec = int(round(config.t_end / step))
    t_eval = step * np.arange(n_rec + 1)
    t_eval[-1] = min(t_eval[-1], config.t_end)
    sol = solve_ivp(f, (0.0, config.t_end), [z0, phi0], method="DOP853",
                    rtol=config.rtol, atol=config.rtol * 1e-3, t_eval=t_eval, events=edge)
    if sol.status == 1:
        termination = Termination.BOUNDARY_HIT
    elif sol.status < 0:
        termination = Termination.STEP_UNDERFLOW
    else:
        termination = Termination.COMPLETED
    zs, phis = sol.y[0], sol.y[1]
    keep = np.array([_safe(model, a, b, margin) for a, b in zip(zs, phis)], dtype=bool)
    if not keep.all():
        # cut at the first unsafe sample so the record stays inside the domain
        cut = int(np.argmin(keep))
        zs, phis, ts = zs[:cut], phis[:cut], sol.t[:cut]
        termination = Termination.BOUNDARY_HIT
    else:
        ts = sol.t
    energies = np.array([model.energy(a, b) for a, b in zip(zs, phis)])
    return Trajectory(np.asarray(ts, dtype=float), np.asarray(zs, dtype=float),
                      np.asarray(phis, dtype=float), energies, termination)


def energy_drift(traj: Trajectory) -> float:
    """max_t |H(t) - H(0)|."""
    if len(traj.energies) < 2:
        raise ValueError("need at least two recorded energies")
    return float(np.max(np.abs(traj.energies - traj.energies[0])))


def poincare_section(traj: Trajectory, phi_value: float) -> list[Crossing]:
    """Linear-interpolated crossings of Phi = phi_value (mod 2 pi), in time order."""
    if len(traj) < 2:
        return []
    two_pi = 2.0 * math.pi
    u = np.floor((traj.phi - phi_value) / two_pi)
    out = []
    for i in np.flatnonzero(u[1:] != u[:-1]):
        p0, p1 = traj.phi[i], traj.phi[i + 1]
        target = phi_value + two_pi * max(u[i], u[i + 1])
        s = (target - p0) / (p1 - p0)
        t = traj.times[i] + s * (traj.times[i + 1] - traj.times[i])
        zc = traj.z[i] + s * (traj.z[i + 1] - traj.z[i])
        out.append(Crossing(float(t), PhaseState(float(zc), float(target)),
                            1 if p1 > p0 else -1))
    return out

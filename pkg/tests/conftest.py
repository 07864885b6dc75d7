import math

import numpy as np
import pytest

from becmaser import AsymmetricDoubleWellModel, DoubleWellModel, WeakRegimeModel


def fd_vector_field(model, z, phi, h=1e-6):
    """(-dH/dPhi, +dH/dz) by central differences on the energy alone."""
    dh_dphi = (model.energy(z, phi + h) - model.energy(z, phi - h)) / (2 * h)
    dh_dz = (model.energy(z + h, phi) - model.energy(z - h, phi)) / (2 * h)
    return -dh_dphi, dh_dz


def relative_error(analytic, numeric):
    a = np.asarray(analytic, dtype=float)
    b = np.asarray(numeric, dtype=float)
    return float(np.max(np.abs(a - b)) / max(float(np.max(np.abs(a))), 1.0))


def random_models(rng, n):
    """Random models of every kind plus a non-singular state for each."""
    out = []
    for _ in range(n):
        kind = rng.integers(3)
        z = rng.uniform(-0.95, 0.95)
        phi = rng.uniform(-math.pi, math.pi)
        if kind == 0:
            model = DoubleWellModel(rng.uniform(-5, 5))
        elif kind == 1:
            model = AsymmetricDoubleWellModel(rng.uniform(-2, 2), rng.uniform(-5, 5))
        else:
            k = rng.uniform(-0.9, 20)
            z = rng.uniform(-0.95, min(0.95, k - 0.05))
            model = WeakRegimeModel(rng.uniform(-2, 2), rng.uniform(-10, 10), k)
        out.append((model, z, phi))
    return out


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


# one line per acceptance criterion, printed at the end of the run
ACCEPTANCE = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE:
            terminalreporter.write_line(line)

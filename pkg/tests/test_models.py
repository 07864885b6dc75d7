import math
import warnings

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from becmaser import (AsymmetricDoubleWellModel, DomainError, DoubleWellModel,
                      InaccessibleError, PhaseState, PhysicalParams, SingularityError,
                      WeakRegimeModel, accessible, energy_asym_double_well, energy_double_well,
                      energy_weak, eom_double_well, eom_weak, photon_number, reduce_physical)
from becmaser.models import WeakRegimeWarning, canonical_phase

from conftest import fd_vector_field, random_models, relative_error

PI = math.pi


class TestDoubleWell:
    def test_energy_examples(self):
        assert energy_double_well(PhaseState(0, PI), DoubleWellModel(0.5)) == 1.0
        assert energy_double_well(PhaseState(0, 0), DoubleWellModel(7)) == -1.0
        # 0.5 * 0.5 * 0.25 + sqrt(1 - 0.25)
        assert energy_double_well(PhaseState(0.5, PI), DoubleWellModel(0.5)) == pytest.approx(
            0.0625 + math.sqrt(0.75), rel=1e-15)

    def test_energy_domain(self):
        with pytest.raises(DomainError):
            energy_double_well(PhaseState(1.01, 0), DoubleWellModel(1))

    @pytest.mark.parametrize("lam", [0.1, 2.0, 17.0])
    def test_eom_examples(self, lam):
        assert eom_double_well(PhaseState(0.5, PI), DoubleWellModel(lam))[0] == pytest.approx(0, abs=1e-15)
        zdot, phidot = eom_double_well(PhaseState(0, PI), DoubleWellModel(lam))
        assert zdot == pytest.approx(0, abs=1e-15) and phidot == 0
        assert eom_double_well(PhaseState(0, PI / 2), DoubleWellModel(3)) == pytest.approx((-1, 0))

    def test_singularity_guard(self):
        with pytest.raises(SingularityError):
            eom_double_well(PhaseState(1.0, 0.3), DoubleWellModel(1))
        with pytest.raises(SingularityError):
            eom_double_well(PhaseState(1 - 1e-11, 0.3), DoubleWellModel(1))


class TestAsymmetric:
    def test_examples(self):
        assert energy_asym_double_well(PhaseState(0, 0), AsymmetricDoubleWellModel(0.3, -2)) == -1.0
        assert energy_asym_double_well(PhaseState(0.5, PI), AsymmetricDoubleWellModel(0.5, 0.5)) == pytest.approx(
            0.25 + 0.0625 + math.sqrt(0.75), rel=1e-15)

    @given(z=st.floats(-1, 1), phi=st.floats(-10, 10), lam=st.floats(-50, 50))
    def test_reduces_to_symmetric(self, z, phi, lam):
        s = PhaseState(z, phi)
        assert energy_asym_double_well(s, AsymmetricDoubleWellModel(0.0, lam)) == energy_double_well(s, DoubleWellModel(lam))


class TestWeak:
    def test_energy_examples(self):
        assert energy_weak(PhaseState(0, PI), WeakRegimeModel(0.3, 2, 10)) == pytest.approx(-math.sqrt(20), rel=1e-15)
        assert energy_weak(PhaseState(0.1, 1.0), WeakRegimeModel(-0.5, 1, 0.1)) == pytest.approx(-0.045, rel=1e-14)
        assert energy_weak(PhaseState(1.0, 2.0), WeakRegimeModel(0.5, 8, 3)) == 4.5

    def test_energy_inaccessible(self):
        with pytest.raises(InaccessibleError):
            energy_weak(PhaseState(0.5, 0), WeakRegimeModel(0, 1, 0.1))

    def test_eom_examples(self):
        m = WeakRegimeModel(-0.5, 1, 10)
        assert eom_weak(PhaseState(0.3, 0.0), m)[0] == 0.0
        assert eom_weak(PhaseState(0.3, PI), m)[0] == pytest.approx(0, abs=1e-15)
        assert eom_weak(PhaseState(0, 0), m) == pytest.approx((0, -0.5 - 1 / math.sqrt(20)), rel=1e-15)
        assert eom_weak(PhaseState(0, 0), m)[1] == pytest.approx(-0.723606, abs=1e-6)

    def test_eom_stationary_substitution(self):
        # with Delta = Lambda = 0 the stationarity condition is 1 + 2kz - 3z^2 = 0
        z = -0.5
        k = (3 * z * z - 1) / (2 * z)
        assert k == 0.25
        zdot, phidot = eom_weak(PhaseState(z, 0), WeakRegimeModel(0, 0, k))
        assert (zdot, phidot) == (0.0, 0.0)

    def test_printed_variant_differs(self):
        s = PhaseState(0.4, 0.2)
        a = eom_weak(s, WeakRegimeModel(0.1, 2, 3))
        b = eom_weak(s, WeakRegimeModel(0.1, 2, 3, printed_eq19=True))
        assert a[0] == b[0] and a[1] != b[1]

    def test_singular_near_k(self):
        with pytest.raises(SingularityError):
            eom_weak(PhaseState(0.3, 0), WeakRegimeModel(0, 1, 0.3))

    @pytest.mark.parametrize("z,k,expected", [(0.5, 0.1, False), (0.5, 10, True), (0.3, 0.3, True)])
    def test_accessible(self, z, k, expected):
        assert accessible(PhaseState(z, 0), WeakRegimeModel(0, 1, k)) is expected

    def test_photon_number(self):
        assert photon_number(PhaseState(0.1, 0), WeakRegimeModel(0, 1, 0.1), 77) == 0
        assert photon_number(PhaseState(0, 0), WeakRegimeModel(0, 1, 10), 100) == 500
        assert photon_number(PhaseState(-1, 0), WeakRegimeModel(0, 1, 0.1), 1000) == pytest.approx(550)
        with pytest.raises(InaccessibleError):
            photon_number(PhaseState(0.5, 0), WeakRegimeModel(0, 1, 0.1), 10)

    def test_k_lower_bound(self):
        with pytest.raises(ValueError):
            WeakRegimeModel(0, 1, -1.5)

    @settings(max_examples=200)
    @given(z=st.floats(-1, 1), phi=st.floats(-7, 7), k=st.floats(-1, 5))
    def test_energy_real_iff_accessible(self, z, phi, k):
        m = WeakRegimeModel(0.2, 1.5, k)
        s = PhaseState(z, phi)
        if accessible(s, m):
            assert math.isfinite(energy_weak(s, m))
            assert photon_number(s, m, 10) >= 0
        else:
            with pytest.raises(InaccessibleError):
                energy_weak(s, m)


def test_gradient_consistency_sample(rng):
    for model, z, phi in random_models(rng, 200):
        assert relative_error(model.rhs(z, phi), fd_vector_field(model, z, phi)) < 1e-6, (model, z, phi)


def test_printed_variant_is_not_gradient():
    m = WeakRegimeModel(-0.5, 8, 10, printed_eq19=True)
    assert relative_error(m.rhs(0.4, 0.3), fd_vector_field(m, 0.4, 0.3)) > 1e-3


@given(z=st.floats(-0.99, 0.99), lam=st.floats(-10, 10), d=st.floats(-2, 2))
def test_zdot_vanishes_on_stationary_lines(z, lam, d):
    for model in (DoubleWellModel(lam), AsymmetricDoubleWellModel(d, lam), WeakRegimeModel(d, lam, 2.0)):
        for phi in (0.0, PI):
            assert abs(model.rhs(z, phi)[0]) < 1e-15


def test_canonical_phase():
    assert canonical_phase(3 * PI) == pytest.approx(PI)
    assert canonical_phase(-PI) == pytest.approx(PI)
    assert canonical_phase(0.5 + 4 * PI) == pytest.approx(0.5)
    assert PhaseState(0, -2 * PI + 0.1).canonical_phi() == pytest.approx(0.1)


class TestReduce:
    def test_chi_zero(self):
        red = reduce_physical(PhysicalParams(1, 1, 0.01, 0, 0, 0))
        e = red.effective
        assert (e.eta, e.omega, e.delta) == (0, 1, 0)
        assert e.nu == pytest.approx(0.005, rel=1e-15)
        assert e.lambda_coupling == pytest.approx(0.005, rel=1e-15)
        assert red.detuning == 0 and red.coupling_ratio == 0
        assert red.warnings == ()

    def test_kerr_shift(self):
        red = reduce_physical(PhysicalParams(1, 1.002, 0.01, 0.001, 0, 0.04))
        lam = 0.01 / 2.002
        assert red.effective.delta == pytest.approx(0.002, rel=1e-12)
        assert red.effective.lambda_coupling == pytest.approx(lam, rel=1e-15)
        assert red.detuning == pytest.approx(0.003 / lam, rel=1e-12)
        assert red.coupling_ratio == pytest.approx(0.04 / lam, rel=1e-12)
        assert red.detuning == pytest.approx(0.6006, rel=1e-12)
        assert red.coupling_ratio == pytest.approx(8.008, rel=1e-12)

    def test_compensated_detuning(self):
        # 4 chi^2 / omega0 = omega0 - omega_a - kappa gives delta = -kappa
        w0, wa, kappa = 1.0, 0.99985, 0.00005
        chi = math.sqrt(w0 * (w0 - wa - kappa) / 4)
        red = reduce_physical(PhysicalParams(w0, wa, 0.01, kappa, chi, 0.05))
        assert red.effective.delta == pytest.approx(-kappa, abs=1e-15)
        assert red.detuning == pytest.approx(0, abs=1e-10)

    @given(w0=st.floats(0.5, 2), wa=st.floats(0.5, 2), g=st.floats(1e-4, 1e-2))
    def test_linear_limit(self, w0, wa, g):
        red = reduce_physical(PhysicalParams(w0, wa, g, 0, 0, 0))
        assert red.coupling_ratio == 0
        assert red.detuning == pytest.approx((wa - w0) / red.effective.lambda_coupling, rel=1e-12)

    def test_warnings(self):
        with pytest.warns(WeakRegimeWarning):
            red = reduce_physical(PhysicalParams(1, 1, 0.5, 0, 0.05, 0))
        assert len(red.warnings) == 2

    def test_zero_coupling_raises(self):
        with pytest.raises(ZeroDivisionError):
            reduce_physical(PhysicalParams(1, 1, 0.0, 0, 0, 0))

    def test_model_from_reduction(self):
        with warnings.catch_warnings():
            warnings.simplefilter("error")
            red = reduce_physical(PhysicalParams(1, 1.002, 0.01, 0.001, 0, 0.04))
        m = red.model(10)
        assert isinstance(m, WeakRegimeModel) and m.excitation_ratio == 10

    @pytest.mark.parametrize("kw", [dict(ensemble_size=0), dict(field_frequency=0), dict(atom_frequency=-1)])
    def test_invalid_params(self, kw):
        base = dict(field_frequency=1, atom_frequency=1, coupling=0.01, kerr=0, parametric=0,
                    intra_ensemble=0, ensemble_size=10)
        base.update(kw)
        with pytest.raises(ValueError):
            PhysicalParams(**base)

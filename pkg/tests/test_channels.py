"""Tests for parametrized Kraus channels and their derivatives."""

import numpy as np
import pytest

from qsense import (
    PAULI_Z,
    CptpReport,
    DimensionMismatchError,
    GeneratorSpec,
    ParamChannel,
    ParameterOutOfRangeError,
    StepTooSmallError,
    apply,
    channel_derivative,
    cptp_check,
    density_from_pure,
    depolarizing_compose,
    identity_channel,
    random_density,
    total_generator,
    unitary_channel,
)
from qsense.states import random_hermitian

PLUS = np.array([1.0, 1.0]) / np.sqrt(2)
MINUS = np.array([1.0, -1.0]) / np.sqrt(2)


def qubit_phase():
    return unitary_channel(GeneratorSpec(h=0.5 * PAULI_Z, n_sites=1))


class TestGeneratorSpec:
    def test_extreme_eigenvalues(self):
        g = GeneratorSpec(h=0.5 * PAULI_Z, n_sites=3)
        assert g.lam_max == pytest.approx(0.5, abs=1e-12)
        assert g.lam_min == pytest.approx(-0.5, abs=1e-12)
        assert g.spectral_width == pytest.approx(1.0, abs=1e-12)
        assert g.total_dim == 8

    def test_total_generator_two_sites(self):
        g = GeneratorSpec(h=0.5 * PAULI_Z, n_sites=2)
        np.testing.assert_allclose(
            total_generator(g), np.diag([1.0, 0.0, 0.0, -1.0]), atol=1e-12
        )


class TestApply:
    def test_identity_channel_fixes_everything(self):
        ch = identity_channel(4)
        rho = random_density(4, 2, 3)
        for x in (0.0, 1.3, -7.0):
            np.testing.assert_allclose(apply(ch, rho, x), rho, atol=1e-12)

    def test_bloch_rotation_half_turn(self):
        # phase rotation by pi about z maps |+> to |->
        out = apply(qubit_phase(), density_from_pure(PLUS), np.pi)
        np.testing.assert_allclose(out, density_from_pure(MINUS), atol=1e-12)

    def test_fully_depolarizing(self):
        ch = depolarizing_compose(qubit_phase(), 1.0)
        out = apply(ch, density_from_pure(PLUS), 0.7)
        np.testing.assert_allclose(out, 0.5 * np.eye(2), atol=1e-12)

    def test_dimension_mismatch(self):
        with pytest.raises(DimensionMismatchError):
            apply(qubit_phase(), np.eye(4) / 4, 0.0)

    @pytest.mark.parametrize("seed", [0, 1, 2])
    def test_linearity(self, seed):
        rng = np.random.default_rng(seed)
        ch = depolarizing_compose(qubit_phase(), 0.3)
        rho1 = random_density(2, 2, rng)
        rho2 = random_density(2, 1, rng)
        a = float(rng.uniform())
        x = float(rng.uniform(0, 2 * np.pi))
        mixed_then_applied = apply(ch, a * rho1 + (1 - a) * rho2, x)
        applied_then_mixed = a * apply(ch, rho1, x) + (1 - a) * apply(ch, rho2, x)
        assert np.max(np.abs(mixed_then_applied - applied_then_mixed)) < 1e-10


class TestUnitaryChannel:
    def test_zero_parameter_is_identity(self):
        ch = qubit_phase()
        (k,) = ch.kraus_at(0.0)
        np.testing.assert_allclose(k, np.eye(2), atol=1e-12)

    def test_two_site_diagonal_phases(self):
        ch = unitary_channel(GeneratorSpec(h=0.5 * PAULI_Z, n_sites=2))
        x = 0.9
        (u,) = ch.kraus_at(x)
        expected = np.diag(np.exp(-1j * x * np.array([1.0, 0.0, 0.0, -1.0])))
        np.testing.assert_allclose(u, expected, atol=1e-12)

    @pytest.mark.parametrize("x", [0.0, 0.5, 3.9, -2.2])
    def test_kraus_unitary(self, x):
        ch = unitary_channel(GeneratorSpec(h=random_hermitian(3, 9), n_sites=1))
        (u,) = ch.kraus_at(x)
        assert np.max(np.abs(u.conj().T @ u - np.eye(3))) < 1e-10


class TestDepolarizingCompose:
    def test_gamma_zero_identical(self):
        base = qubit_phase()
        ch = depolarizing_compose(base, 0.0)
        rho = random_density(2, 2, 12)
        for x in (0.0, 1.1):
            assert np.max(np.abs(apply(ch, rho, x) - apply(base, rho, x))) < 1e-12

    def test_bloch_radius_contraction(self):
        ch = depolarizing_compose(qubit_phase(), 0.5)
        out = apply(ch, density_from_pure(PLUS), 0.0)
        bloch_x = 2 * out[0, 1].real
        assert bloch_x == pytest.approx(0.5, abs=1e-12)

    def test_gamma_out_of_range(self):
        with pytest.raises(ParameterOutOfRangeError):
            depolarizing_compose(qubit_phase(), 1.2)


class TestChannelDerivative:
    def test_x_independent_channel_zero(self):
        ch = identity_channel(3)
        rho = random_density(3, 3, 4)
        d = channel_derivative(ch, rho, 0.4, 1e-4)
        assert np.max(np.abs(d)) < 1e-10

    @pytest.mark.parametrize("seed", [0, 1, 2, 3])
    def test_commutator_oracle(self, seed):
        rng = np.random.default_rng(seed)
        h = random_hermitian(4, rng)
        g = GeneratorSpec(h=h, n_sites=1)
        ch = unitary_channel(g)
        rho = random_density(4, 3, rng)
        x = float(rng.uniform(0, 2 * np.pi))
        d = channel_derivative(ch, rho, x, 1e-4)
        rho_x = apply(ch, rho, x)
        commutator = -1j * (h @ rho_x - rho_x @ h)
        assert np.max(np.abs(d - commutator)) < 1e-6

    def test_hermitian_traceless(self):
        ch = depolarizing_compose(qubit_phase(), 0.2)
        rho = random_density(2, 2, 6)
        d = channel_derivative(ch, rho, 0.8, 1e-4)
        assert np.max(np.abs(d - d.conj().T)) < 1e-8
        assert abs(np.trace(d)) < 1e-10

    def test_second_order_convergence(self):
        rng = np.random.default_rng(31)
        h = random_hermitian(4, rng)
        ch = unitary_channel(GeneratorSpec(h=h, n_sites=1))
        rho = random_density(4, 4, rng)
        rho_x = apply(ch, rho, 1.0)
        exact = -1j * (h @ rho_x - rho_x @ h)
        steps = [1e-4, 5e-5, 2.5e-5]
        errs = [
            np.max(np.abs(channel_derivative(ch, rho, 1.0, s) - exact)) for s in steps
        ]
        slope = np.polyfit(np.log(steps), np.log(errs), 1)[0]
        assert slope == pytest.approx(2.0, abs=0.1)

    def test_step_too_small(self):
        with pytest.raises(StepTooSmallError):
            channel_derivative(qubit_phase(), np.eye(2) / 2, 0.0, 1e-13)


class TestCptpCheck:
    def test_unitary_channel_passes(self):
        report = cptp_check(qubit_phase(), [0.0, 1.0, np.pi])
        assert isinstance(report, CptpReport)
        assert report.passed
        assert all(d < 1e-12 for d in report.deviations)

    def test_trace_decreasing_kraus_fails(self):
        bad = ParamChannel(dim=2, kraus_at=lambda x: [0.5 * np.eye(2)])
        report = cptp_check(bad, [0.0])
        assert not report.passed
        assert report.deviations[0] == pytest.approx(0.75, abs=1e-12)

    def test_depolarized_unitary_passes(self):
        ch = depolarizing_compose(qubit_phase(), 0.3)
        assert cptp_check(ch, [0.0, 0.4, 2.0]).passed

    def test_output_spectrum_stays_clean(self):
        # CPTP-checked channels never emit eigenvalues below -1e-8 pre-clamp
        from qsense.channels import apply_raw
        from qsense.linalg import eigh

        rng = np.random.default_rng(44)
        ch = depolarizing_compose(qubit_phase(), 0.1)
        for _ in range(20):
            rho = random_density(2, int(rng.integers(1, 3)), rng)
            raw = apply_raw(ch, rho, float(rng.uniform(0, 2 * np.pi)))
            assert eigh(0.5 * (raw + raw.conj().T)).eigenvalues[0] > -1e-8

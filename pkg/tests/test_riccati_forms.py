import numpy as np
import pytest

from sixvertex.functional_system import OmegaValues, riccati_coefficients, riccati_residual
from sixvertex.model_core import ModelParams
from sixvertex.riccati_forms import (AltFormN2, ClosedFormN2, PoleError, alt_riccati_residual, coeffs_n1,
                                     coeffs_n2)
from sixvertex.transfer_oracle import diagonalize_sector

from conftest import trig_params


def _close(a, b, tol=1e-8):
    return all(abs(x - y) <= tol * max(abs(x), abs(y), 1.0) for x, y in zip(a, b))


def test_n1_closed_form_matches_determinant():
    p = trig_params(4)
    rng = np.random.default_rng(3)
    for x in rng.uniform(-0.8, 0.8, 10) + 1j * rng.uniform(-0.8, 0.8, 10):
        assert _close(coeffs_n1(x, p), riccati_coefficients(1, [], x, p).astuple())


@pytest.mark.parametrize("L", [2, 3, 4])
def test_n2_closed_form_matches_determinant(L):
    p = trig_params(L, seed=L)
    rng = np.random.default_rng(L)
    u1 = complex(rng.uniform(-0.5, 0.5) + 1j * rng.uniform(-0.5, 0.5))
    for x in rng.uniform(-0.8, 0.8, 10) + 1j * rng.uniform(-0.8, 0.8, 10):
        assert _close(coeffs_n2(x, u1, p), riccati_coefficients(2, [u1], x, p).astuple())


def test_n2_pole_at_u1():
    p = trig_params(3)
    with pytest.raises(PoleError):
        ClosedFormN2(0.2 + 0.1j, p)(0.2 + 0.1j + 1j * np.pi)


def test_closed_forms_need_trig():
    with pytest.raises(ValueError):
        coeffs_n1(0.1, ModelParams("rational", L=2))


def test_n2_closed_form_riccati_residual():
    p = trig_params(4)
    for Lam in diagonalize_sector(p, 2):
        om = coeffs_n2(0.13 - 0.21j, Lam.zeroes[0], p)
        _, rel = riccati_residual(Lam, OmegaValues(*om), 0.13 - 0.21j)
        assert rel < 1e-10


@pytest.mark.parametrize("L", [2, 3, 4])
@pytest.mark.parametrize("generic", [True, False])
def test_alt_form_residual(L, generic):
    p = trig_params(L, seed=L) if generic else ModelParams("trigonometric", gamma=0.4, L=L)
    rng = np.random.default_rng(7)
    for Lam in diagonalize_sector(p, 2):
        for x in rng.uniform(-0.8, 0.8, 5) + 1j * rng.uniform(-0.8, 0.8, 5):
            assert alt_riccati_residual(Lam, x, p)[1] < 1e-6


def test_printed_j1_is_not_satisfied():
    p = trig_params(3)
    Lam = diagonalize_sector(p, 2)[0]
    assert alt_riccati_residual(Lam, 0.3 + 0.1j, p, printed_j1=True)[1] > 1e-3


def test_alt_form_k_plus_is_quadratic_coefficient():
    p = trig_params(3)
    f = AltFormN2(0.5 + 0.2j, p)
    assert np.isclose(f(0.2)[1], f.K(0.2)[0])

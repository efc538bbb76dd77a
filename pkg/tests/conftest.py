import numpy as np
import pytest

from sixvertex.model_core import MONOMIAL, Curve, ModelParams

TRIG_GAMMA = 0.3 + 0.1j


def random_mu(L, seed=0):
    rng = np.random.default_rng(seed)
    return tuple(rng.uniform(-0.1, 0.1, L) + 1j * rng.uniform(-0.1, 0.1, L))


def trig_params(L, seed=0):
    return ModelParams("trigonometric", gamma=TRIG_GAMMA, phi1=1.1, phi2=0.8, mu=random_mu(L, seed))


def rational_params(L, seed=0):
    return ModelParams("rational", phi1=1.1, phi2=0.8, mu=random_mu(L, seed))


def table_params(L):
    return ModelParams("rational", phi1=1, phi2=1, mu=(0,) * L)


def _r(k):
    return np.exp(1j * np.pi * k / 5)  # (-1)^{k/5}, principal branch


# sector-1 eigenvalues for phi1 = phi2 = 1, mu = 0 (ascending coefficients);
# row 0 is lambda_+ and is not listed
TABLE = {
    3: [[(-1 - 1j * 3 ** 0.5) / 2, 0, 3, 2],
        [(-1 + 1j * 3 ** 0.5) / 2, 0, 3, 2]],
    4: [[-1, 0, 2, 4, 2],
        [-1j, -2j, 2, 4, 2],
        [1j, 2j, 2, 4, 2]],
    5: [[_r(4), 1 - _r(3) + 3 * _r(4), 3 + _r(1) - _r(3) + 2 * _r(4), 5, 5, 2],
        [-_r(1), 1 - 3 * _r(1) + _r(2), 3 - 2 * _r(1) + _r(2) - _r(4), 5, 5, 2],
        [_r(2), 1 + 3 * _r(2) + _r(4), 3 + 2 * _r(2) + _r(3) + _r(4), 5, 5, 2],
        [-_r(3), -(-1 + _r(1) + 3 * _r(3)), -(-3 + _r(1) + _r(2) + 2 * _r(3)), 5, 5, 2]],
}


def table_curves(L):
    return [Curve(MONOMIAL, np.array(c, complex)) for c in TABLE[L]]


def table_labels(nodes, L, tol=1e-8):
    """Map node index -> table row (0 for lambda_+)."""
    out = {}
    for i, n in enumerate(nodes):
        ds = [n.curve.distance(c) for c in table_curves(L)]
        j = int(np.argmin(ds))
        out[i] = j + 1 if ds[j] < tol else 0
    return out


@pytest.fixture
def trig3():
    return trig_params(3)


@pytest.fixture
def rat3():
    return rational_params(3)

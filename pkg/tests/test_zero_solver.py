import itertools

import numpy as np
import pytest

from sixvertex.model_core import ModelParams
from sixvertex.transfer_oracle import diagonalize_sector
from sixvertex.zero_solver import (DegeneratePairError, NonConvergenceError, SingularityError,
                                   asymptotic_condition, boundary_conditions, delta_minors, heldout_checks,
                                   lambda0_from_zeroes, match_zero_sets, product_representation,
                                   quadratic_residual, quoted_half_filling_variant, quoted_phi_ratio,
                                   reconstruct_lambda, solve_zeroes)

from conftest import TRIG_GAMMA, rational_params, table_curves, table_params, trig_params


@pytest.mark.parametrize("fam", ["rational", "trigonometric"])
def test_product_representation(fam):
    p = trig_params(4) if fam == "trigonometric" else rational_params(4)
    for Lam in diagonalize_sector(p, 2):
        c = product_representation(Lam.lambda0, Lam.zeroes, p)
        assert c.distance(Lam.curve) < 1e-9


@pytest.mark.parametrize("L", [2, 3, 4, 5])
@pytest.mark.parametrize("fam", ["rational", "trigonometric"])
def test_boundary_conditions_oracle(L, fam):
    p = trig_params(L, seed=L) if fam == "trigonometric" else rational_params(L, seed=L)
    for n in range(1, L + 1):
        for Lam in diagonalize_sector(p, n):
            r0, r1 = boundary_conditions(Lam.zeroes, Lam.lambda0, p, n)
            assert abs(r0) < 1e-8 and abs(r1) < 1e-8


def test_half_filling_variant():
    p = trig_params(4)
    S_sign_flipped = []
    for Lam in diagonalize_sector(p, 2):
        assert abs(asymptotic_condition(Lam.zeroes, p, 2)) < 1e-8
        S_sign_flipped.append(abs(quoted_half_filling_variant(Lam.zeroes, p)))
    # the usual quotation of the L=4 condition has S with the wrong sign
    assert max(S_sign_flipped) > 1e-3


def test_quoted_ratio_zero():
    p = trig_params(5)
    assert abs(quoted_phi_ratio(-2 * p.gamma, p)) < 1e-14


def test_quadratic_relation_all_subsets():
    p = trig_params(4)
    for Lam in diagonalize_sector(p, 3):
        for sub in itertools.combinations(Lam.zeroes, 2):
            assert abs(quadratic_residual(Lam, sub, 0.21 + 0.17j, p, relative=True)) < 1e-9


def test_reconstruction_independent_of_pair():
    p = trig_params(4)
    Lam = diagonalize_sector(p, 2)[2]
    us = list(Lam.zeroes)
    x = 0.3 - 0.2j
    vals = [reconstruct_lambda(x, ([us[i]], [us[j]]), us, p) for i, j in [(0, 1), (1, 2), (0, 3)]]
    for v in vals:
        assert abs(v - Lam(x)) < 1e-6 * abs(Lam(x))


def test_identical_subsets_rejected():
    with pytest.raises(DegeneratePairError):
        delta_minors(0.1, [0.3], [0.3], trig_params(3))


def test_lambda0_formula():
    p = trig_params(3)
    for Lam in diagonalize_sector(p, 1):
        l0 = lambda0_from_zeroes(Lam.zeroes, p, 1)
        assert abs(l0 - Lam.lambda0) < 1e-9 * abs(Lam.lambda0)


@pytest.mark.parametrize("fam,L,n", [("trigonometric", 3, 1), ("trigonometric", 3, 2),
                                     ("trigonometric", 4, 2), ("rational", 4, 2), ("rational", 3, 3)])
def test_newton_reconverges(fam, L, n):
    p = trig_params(L) if fam == "trigonometric" else rational_params(L)
    rng = np.random.default_rng(L + n)
    for Lam in diagonalize_sector(p, n):
        us = np.asarray(Lam.zeroes)
        seed = us + 0.01 * np.maximum(np.abs(us), 0.1) * np.exp(2j * np.pi * rng.uniform(size=L))
        rep = solve_zeroes(p, n, seed)
        assert rep.converged and rep.residual < 1e-10
        assert match_zero_sets(rep.zeroes, us, p) < 1e-10
        assert rep.heldout_max < 1e-7


def test_flat_valley_is_reported():
    # untwisted half filling: the relations admit a one-parameter family of
    # roots next to this eigenvalue, and a uniform 1% scaling lands in its
    # flat valley; the solver must fail loudly rather than return it
    p = ModelParams("trigonometric", gamma=TRIG_GAMMA, phi1=1.1, phi2=0.8, L=4)
    Lam = diagonalize_sector(p, 2)[1]
    us = np.asarray(Lam.zeroes)
    with pytest.raises(NonConvergenceError):
        solve_zeroes(p, 2, us * 1.01)
    # the eigenvalue itself is an isolated root
    rng = np.random.default_rng(1)
    seed = us + 0.01 * np.abs(us) * np.exp(2j * np.pi * rng.uniform(size=4))
    rep = solve_zeroes(p, 2, seed)
    assert rep.isolated and match_zero_sets(rep.zeroes, us, p) < 1e-10


def test_rotated_retry_avoids_poorly_isolated_root():
    p = trig_params(5)
    Lam = diagonalize_sector(p, 3)[7]
    us = np.asarray(Lam.zeroes)
    seed = us + 0.01 * np.maximum(np.abs(us), 0.1) * np.exp(2j * np.pi * np.linspace(0.1, 0.9, 5))
    rep = solve_zeroes(p, 3, seed)
    assert rep.isolated and match_zero_sets(rep.zeroes, us, p) < 1e-10


def test_colliding_seed():
    p = trig_params(3)
    with pytest.raises(SingularityError):
        solve_zeroes(p, 1, [0.1, 0.1, 0.3])


def test_recovered_zeroes_give_table_row():
    p = table_params(3)
    target = table_curves(3)[0]
    Lam = next(c for c in diagonalize_sector(p, 1) if c.curve.distance(target) < 1e-8)
    rep = solve_zeroes(p, 1, np.asarray(Lam.zeroes) * 1.01)
    c = product_representation(rep.lambda0, rep.zeroes, p)
    assert c.distance(target) < 1e-8


def test_report_schema():
    p = trig_params(3)
    Lam = diagonalize_sector(p, 1)[0]
    d = solve_zeroes(p, 1, np.asarray(Lam.zeroes) * 1.005).to_dict()
    assert set(d) == {"converged", "iterations", "zeroes", "residual", "heldout_max", "isolation"}


def test_heldout_on_oracle():
    p = trig_params(4)
    for Lam in diagonalize_sector(p, 3):
        assert heldout_checks(Lam.zeroes, p, 3) < 1e-7

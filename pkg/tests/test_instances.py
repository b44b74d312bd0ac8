import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from oracles import finite_difference_jacobian
from paretodescent.instances import (FlatLogBarrier, FlatRosenbrock, LogBarrier, LogDet, PositiveOrthant,
                                     Rosenbrock, RosenbrockManifold, SPDMatrices)
from paretodescent.instances.rosenbrock import from_flat, tangent_to_flat, to_flat
from paretodescent.linalg import logdet_spd
from paretodescent.manifolds import Euclidean
from paretodescent.solver import SolverConfig, solve
from paretodescent.stepsize import ArmijoConfig, LipschitzConfig


# ---------------------------------------------------------------- Rosenbrock

def test_bicriteria_values_at_individual_minimizers():
    obj = Rosenbrock.bicriteria()
    np.testing.assert_array_equal(obj.value(np.array([1.0, 1.0])), [0.0, 1.0])
    np.testing.assert_array_equal(obj.value(np.array([2.0, 4.0])), [1.0, 0.0])


@given(st.floats(-5, 5), st.floats(-5, 5))
def test_flat_map_round_trip(a, b):
    x = np.array([a, b])
    np.testing.assert_allclose(from_flat(to_flat(x)), x, atol=1e-12)


def test_rosenbrock_exp_is_flat_line(rng):
    man = RosenbrockManifold(2)
    for _ in range(20):
        x, v, t = rng.uniform(-3, 3, 4), rng.standard_normal(4), rng.uniform(0, 2)
        np.testing.assert_allclose(to_flat(man.exp(x, v, t)), to_flat(x) + t * tangent_to_flat(x, v),
                                   atol=1e-12)


def test_pullback_is_convex_quadratic_with_known_spectrum(rng):
    a, b = rng.uniform(0.5, 50, (3, 2)), rng.uniform(-1, 1, (3, 2))
    curved, flat = Rosenbrock(a, b), FlatRosenbrock(a, b)
    for j in range(2):
        z = rng.standard_normal(6)
        np.testing.assert_allclose(flat.value(z)[j], curved.value(from_flat(z))[j], rtol=1e-12)
        H = finite_difference_jacobian(lambda w: flat.egrad(w)[j], z, h=1e-4)
        np.testing.assert_allclose(np.linalg.eigvalsh(0.5 * (H + H.T)), flat.hessian_eigenvalues(j),
                                   rtol=1e-7)
        assert curved.lipschitz_constant == pytest.approx(max(2.0, 2 * a.max()))


def test_dominating_pareto_point(rng):
    obj = Rosenbrock.bicriteria()
    for x in rng.uniform(-5, 5, (50, 2)):
        q = obj.dominating_pareto_point(x)
        assert np.all(obj.value(q) <= obj.value(x) + 1e-12)
        assert abs(q[1] - q[0] ** 2) <= 1e-12 and 1.0 <= q[0] <= 2.0


def _run_pair(curved_obj, curved_man, flat_obj, x0, z0, strategy):
    cfg = SolverConfig(strategy=strategy, max_iter=200)
    return solve(curved_obj, curved_man, x0, cfg), solve(flat_obj, Euclidean(z0.size), z0, cfg)


@pytest.mark.parametrize("strategy", [ArmijoConfig(), LipschitzConfig(200.0)], ids=["armijo", "lipschitz"])
def test_rosenbrock_isometry_commutation(rng, strategy):
    a, b = np.array([[100.0, 100.0]]), np.array([[1.0, 2.0]])
    for x0 in rng.uniform(-5, 5, (5, 2)):
        tc, tf = _run_pair(Rosenbrock(a, b), RosenbrockManifold(1), FlatRosenbrock(a, b), x0,
                           to_flat(x0), strategy)
        assert tc.iter_count == tf.iter_count
        Fc, Ff = tc.values_array(), tf.values_array()
        assert np.all(np.abs(Fc - Ff) <= 1e-8 * (1 + np.abs(Ff)))
        np.testing.assert_allclose(to_flat(tc.final_point), tf.final_point, atol=1e-6)


# ---------------------------------------------------------------- orthant

def test_orthant_derivative_at_ones(rng):
    obj = LogBarrier.random(4, 2, rng)
    e = np.ones(4)
    expected = (obj.a * obj.u / (1 + obj.b) - obj.w).T
    np.testing.assert_allclose(obj.egrad(e), expected, rtol=1e-12)


def test_orthant_flat_values_along_geodesics(rng):
    obj = LogBarrier.random(5, 3, rng)
    man = PositiveOrthant(5)
    for _ in range(20):
        x, v, t = rng.uniform(0.1, 8, 5), rng.standard_normal(5), rng.uniform(0, 2)
        z = np.log(x)
        np.testing.assert_allclose(obj.value(man.exp(x, v, t)), obj.flat_value(z + t * v / x), rtol=1e-12)


def test_orthant_flat_minimizer(rng):
    for _ in range(10):
        obj = LogBarrier.random(6, 3, rng)
        for j in range(3):
            z = obj.flat_minimizer(j)
            assert np.linalg.norm(obj.flat_gradient(z)[j]) <= 1e-10
        fs = obj.f_star()
        for _ in range(20):
            assert np.all(obj.flat_value(rng.standard_normal(6) * 3) >= fs - 1e-12)


def test_orthant_lipschitz_bound_dominates_hessian(rng):
    obj = LogBarrier.random(4, 3, rng)
    flat = FlatLogBarrier(obj)
    L = obj.lipschitz_constant
    for _ in range(30):
        z = rng.standard_normal(4) * 4
        for j in range(3):
            H = finite_difference_jacobian(lambda w: flat.egrad(w)[j], z, h=1e-5)
            assert np.abs(np.linalg.eigvalsh(0.5 * (H + H.T))).max() <= L * (1 + 1e-6)


def test_orthant_isometry_commutation(rng):
    obj = LogBarrier.random(6, 3, rng)
    for x0 in rng.uniform(0.1, 10, (5, 6)):
        tc, tf = _run_pair(obj, PositiveOrthant(6), FlatLogBarrier(obj), x0, np.log(x0), ArmijoConfig())
        assert tc.iter_count == tf.iter_count
        Fc, Ff = tc.values_array(), tf.values_array()
        assert np.all(np.abs(Fc - Ff) <= 1e-8 * (1 + np.abs(Ff)))


def test_orthant_rejects_nonpositive_points(rng):
    obj = LogBarrier.random(2, 2, rng)
    with pytest.raises(ValueError):
        obj.value(np.array([1.0, -1.0]))


# ---------------------------------------------------------------- SPD

def test_family2_critical_point():
    obj = LogDet(2, [1.0], [1.0])
    X = np.diag([np.exp(0.5), 1.0])
    assert obj.scale(logdet_spd(X))[0] == pytest.approx(0.0)
    np.testing.assert_allclose(obj.gradients(X, SPDMatrices(2)), np.zeros((1, 2, 2)), atol=1e-15)


def test_family1_scale_examples(rng):
    a, b, c = rng.uniform(0.1, 1, 3), rng.uniform(0.1, 1, 3), rng.uniform(0.1, 1, 3)
    d = 0.5 * a * b
    obj = LogDet(1, a, b, c, d)
    np.testing.assert_allclose(obj.scale(0.0), a * b / (1 + c) - d, rtol=1e-14)
    tiny = LogDet(1, a, b, np.full(3, 1e-12), d)
    np.testing.assert_allclose(tiny.scale(logdet_spd(np.eye(4) * 3)), a * b - d, rtol=1e-9)


def test_family_parameter_validation():
    with pytest.raises(ValueError):
        LogDet(1, [1.0], [1.0], [1.0], [2.0])
    with pytest.raises(ValueError):
        LogDet(3, [1.0], [1.0])
    with pytest.raises(ValueError):
        LogDet(2, [-1.0], [1.0])


def test_logdet_minimizers(rng):
    for family in (1, 2):
        obj = LogDet.random(family, 4, rng)
        ld = obj.logdet_minimizers()
        np.testing.assert_allclose([obj.scale(x)[i] for i, x in enumerate(ld)], 0.0, atol=1e-12)
        grid = np.linspace(ld.min() - 20, ld.max() + 20, 2001)
        vals = np.array([obj.of_logdet(g) for g in grid])
        assert np.all(vals >= obj.f_star() - 1e-12)


def test_spd_lipschitz_bound_along_geodesics(rng):
    # second derivative of f_i along unit-speed geodesics never exceeds the configured L
    n = 6
    S = SPDMatrices(n)
    for family in (1, 2):
        obj = LogDet.random(family, 3, rng)
        L = obj.lipschitz_constant(n)
        worst = 0.0
        for _ in range(30):
            X = S.random_point(rng, 0.1, 10)
            V = S.random_tangent(X, rng)
            V /= S.norm(X, V)
            h = 1e-3
            # central difference; the backward point is exp along -V
            fm, f0, fp = obj.value(S.exp(X, -V, h)), obj.value(X), obj.value(S.exp(X, V, h))
            worst = max(worst, np.abs((fp - 2 * f0 + fm) / h ** 2).max())
        assert worst <= L * (1 + 1e-4)


def test_spd_family2_bound_is_not_sqrt_n(rng):
    # along the direction X / sqrt(n), (ln det)'' = 0 and (ln det)' = sqrt(n), so a (ln det)^2 has
    # second derivative 2 a n, which exceeds 2 a sqrt(n) for n > 1
    n = 9
    S = SPDMatrices(n)
    obj = LogDet(2, [1.0], [0.5])
    X = S.random_point(rng, 0.5, 2.0)
    V = X / np.sqrt(n)
    assert S.norm(X, V) == pytest.approx(1.0)
    h = 1e-3
    second = (obj.value(S.exp(X, V, h)) - 2 * obj.value(X) + obj.value(S.exp(X, -V, h)))[0] / h ** 2
    assert second == pytest.approx(2 * n, rel=1e-5)
    assert obj.lipschitz_constant(n) == pytest.approx(2 * n)


def test_spd_iterates_remain_positive_definite(rng):
    S = SPDMatrices(4)
    for family in (1, 2):
        obj = LogDet.random(family, 3, rng)
        tr = solve(obj, S, S.random_point(rng), SolverConfig())
        assert tr.converged
        for X in tr.points:
            assert np.all(np.linalg.eigvalsh(X) > 0)
            np.testing.assert_array_equal(X, X.T)


def test_random_spd_point_spectrum(rng):
    S = SPDMatrices(5)
    for _ in range(10):
        w = np.linalg.eigvalsh(S.random_point(rng, 0.0, 100.0))
        assert np.all(w > 0) and np.all(w < 100 * (1 + 1e-12))

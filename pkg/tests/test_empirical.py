import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from fracentropy import (
    DiscreteUniform,
    EmptySample,
    Exponential,
    McConfig,
    OutOfDomain,
    Sample,
    SampleTooSmall,
    Uniform,
    clt_montecarlo,
    convergence_experiment,
    ecdf,
    empirical_fgce,
    exponential_sample_moments,
    make_rng,
    phi_shape,
    plane_crash_dataset,
    prefix_fgce,
    simulate_estimates,
    spacing_weights,
    stability_probe,
    thresholds,
    uniform_sample_moments,
)
from fracentropy.special import EULER_GAMMA


def _step_integral(values, alpha):
    # integrate Fn (-ln Fn)^alpha piece by piece between distinct sample points
    v = np.sort(np.asarray(values, dtype=float))
    F = ecdf(v)
    knots = np.unique(v)
    total = 0.0
    for lo, hi in zip(knots[:-1], knots[1:]):
        p = F(0.5 * (lo + hi))
        total += (hi - lo) * p * (-math.log(p)) ** alpha
    return total / math.gamma(alpha + 1.0)


def test_ecdf_steps():
    F = ecdf([3.0, 1.0, 2.0])
    assert F(1.5) == pytest.approx(1.0 / 3.0)
    assert F(0.999) == 0.0
    assert F(3.0) == 1.0
    assert F(1.0) == pytest.approx(1.0 / 3.0)
    assert np.allclose(F(np.array([0.0, 2.0, 9.0])), [0.0, 2.0 / 3.0, 1.0])
    with pytest.raises(EmptySample):
        ecdf([])


def test_three_point_example():
    v = empirical_fgce([1.0, 2.0, 3.0], 1.0).value
    assert v == pytest.approx(math.log(3.0) / 3.0 + 2.0 / 3.0 * math.log(1.5), rel=1e-14)
    assert v == pytest.approx(0.63651, abs=1e-5)


def test_needs_two_points():
    with pytest.raises(SampleTooSmall):
        empirical_fgce([1.0], 1.0)


def test_constant_sample_is_zero():
    assert empirical_fgce([4.2] * 9, 0.7).value == 0.0


@pytest.mark.parametrize("seed", range(100))
def test_sum_matches_step_integral(seed):
    rng = make_rng(1234, seed)
    n = int(rng.integers(2, 40))
    x = np.round(rng.exponential(2.0, n), 1)  # rounding creates ties
    a = float(rng.uniform(0.05, 3.0))
    assert empirical_fgce(x, a).value == pytest.approx(_step_integral(x, a), rel=1e-12, abs=1e-14)


@pytest.mark.parametrize("seed", range(20))
def test_alpha_zero_is_max_minus_mean(seed):
    x = make_rng(99, seed).normal(0.0, 3.0, 25)
    assert empirical_fgce(x, 0.0).value == pytest.approx(x.max() - x.mean(), rel=1e-12, abs=1e-12)


def test_alpha_to_zero_is_continuous():
    x = plane_crash_dataset()
    assert empirical_fgce(x, 1e-9).value == pytest.approx(empirical_fgce(x, 0.0).value, rel=1e-7)


@settings(max_examples=60, deadline=None)
@given(
    st.lists(st.floats(0.0, 100.0, allow_nan=False), min_size=2, max_size=30),
    st.floats(-50.0, 50.0),
    st.floats(0.01, 20.0),
    st.floats(0.05, 3.0),
)
def test_shift_and_scale(values, b, c, a):
    x = np.asarray(values)
    base = empirical_fgce(x, a).value
    assert empirical_fgce(x + b, a).value == pytest.approx(base, rel=1e-9, abs=1e-9)
    assert empirical_fgce(c * x, a).value == pytest.approx(c * base, rel=1e-9, abs=1e-9)
    perm = make_rng(0).permutation(x)
    assert empirical_fgce(perm, a).value == base


def test_spacing_weights():
    w = spacing_weights(4, 1.0)
    p = np.array([0.25, 0.5, 0.75])
    assert np.allclose(w, -p * np.log(p))
    assert spacing_weights(5, 0.0) == pytest.approx(np.arange(1, 5) / 5)


# exact moments


def test_uniform_moments_small_n():
    m, v = uniform_sample_moments(2, 1.0)
    assert m == pytest.approx(math.log(2.0) / 6.0, rel=1e-14)
    assert m == pytest.approx(0.11552, abs=1e-5)
    # one spacing, Beta(1, 2): variance 1/18
    assert v == pytest.approx((0.5 * math.log(2.0)) ** 2 / 18.0, rel=1e-14)


@pytest.mark.parametrize("n", [3, 10, 50])
@pytest.mark.parametrize("a", [0.5, 1.0, 2.0])
def test_uniform_mean_is_spacing_mean_times_discrete_uniform(n, a):
    m, _ = uniform_sample_moments(n, a)
    # E V = 1/(n+1) times the FGCE of the uniform law on {1, ..., n}
    assert m == pytest.approx(DiscreteUniform(n).closed_form_fgce(a) / (n + 1), rel=1e-12)


def test_uniform_moments_limit():
    m, v = uniform_sample_moments(10**6, 1.0)
    assert abs(m - 0.25) <= 1e-3
    assert v < 1e-6
    assert uniform_sample_moments(10**4, 1.0)[1] > v


def test_exponential_moments():
    m, v = exponential_sample_moments(2, 1.0, 1.0)
    assert m == pytest.approx(0.5 * math.log(2.0), rel=1e-14)
    assert m == pytest.approx(0.34657, abs=1e-5)
    m3, v3 = exponential_sample_moments(30, 3.0, 0.7)
    m1, v1 = exponential_sample_moments(30, 1.0, 0.7)
    assert m3 == pytest.approx(m1 / 3.0, rel=1e-14)
    assert v3 == pytest.approx(v1 / 9.0, rel=1e-14)


def test_exponential_mean_tends_to_fgce():
    from fracentropy import fgce

    truth = fgce(Exponential(1.0).model(), 1.0).value
    errs = [abs(exponential_sample_moments(n, 1.0, 1.0)[0] - truth) for n in (10, 100, 1000, 10000)]
    assert all(b < a for a, b in zip(errs, errs[1:]))
    means = [exponential_sample_moments(200, 1.0, a)[0] for a in (0.5, 1.0, 1.5, 2.0)]
    assert all(b < a for a, b in zip(means, means[1:]))


def test_moment_inputs():
    with pytest.raises(SampleTooSmall):
        uniform_sample_moments(1, 1.0)
    with pytest.raises(OutOfDomain):
        exponential_sample_moments(5, 0.0, 1.0)


@pytest.mark.parametrize("law,n,a", [("uniform", 20, 1.0), ("uniform", 7, 0.5), ("exponential", 20, 1.0),
                                     ("exponential", 12, 2.0)])
def test_moments_match_monte_carlo(law, n, a):
    cfg = McConfig(replications=10_000, sample_size=n, seed=7, alpha=a, rate=1.5, law=law)
    est = simulate_estimates(cfg)
    mean, var = cfg.exact_moments()
    r = cfg.replications
    assert abs(est.mean() - mean) <= 4.0 * math.sqrt(var / r)
    # variance of the sample variance from the fourth central moment
    m4 = np.mean((est - est.mean()) ** 4)
    se_var = math.sqrt((m4 - var**2) / r)
    assert abs(est.var(ddof=1) - var) <= 4.0 * se_var


def test_uniform_variance_needs_spacing_covariance():
    # dropping the negative covariance between spacings overstates the variance
    n, a = 20, 1.0
    c = spacing_weights(n, a)
    no_cov = n / ((n + 1) ** 2 * (n + 2)) * float(np.sum(c * c))
    est = simulate_estimates(McConfig(10_000, n, 11, a, law="uniform"))
    _, var = uniform_sample_moments(n, a)
    assert no_cov > 2.0 * var
    assert abs(est.var(ddof=1) - var) < abs(est.var(ddof=1) - no_cov) / 10.0


def test_mc_config_validation():
    with pytest.raises(OutOfDomain):
        McConfig(0, 10, 1, 1.0)
    with pytest.raises(SampleTooSmall):
        McConfig(10, 1, 1, 1.0)
    with pytest.raises(OutOfDomain):
        McConfig(10, 10, 1, 1.0, law="normal")


def test_simulation_is_reproducible_per_replication():
    a = simulate_estimates(McConfig(50, 30, 5, 1.0))
    b = simulate_estimates(McConfig(80, 30, 5, 1.0))
    assert np.array_equal(a, b[:50])
    c = simulate_estimates(McConfig(50, 30, 6, 1.0))
    assert not np.array_equal(a, c)


def test_clt_small_run():
    res = clt_montecarlo(McConfig(400, 200, 3, 1.0))
    assert res.z.shape == (400,)
    assert abs(res.mean) <= 4.0 / math.sqrt(400)
    assert res.ks < 0.1
    q = res.z_quantiles()
    assert q["0.01"] < q["0.5"] < q["0.99"]


# convergence, stability and the data example


def test_convergence_uniform():
    pts = convergence_experiment(Uniform(1.0), [10, 100, 10**4, 10**5], 1.0, seed=0)
    assert [p.n for p in pts] == [10, 100, 10**4, 10**5]
    assert pts[-1].truth == 0.25
    assert pts[-1].error <= 0.01


def test_convergence_exponential():
    pts = convergence_experiment(Exponential(1.0), [10**5], 1.0, seed=1)
    assert pts[0].error <= 0.05


def test_stability_shrinks_with_delta():
    x = plane_crash_dataset()
    vals = [stability_probe(x, d, 1.0, trials=50, seed=2) for d in (1e-2, 1e-4, 1e-6)]
    assert vals[0] > vals[1] > vals[2] > 0.0
    with pytest.raises(OutOfDomain):
        stability_probe(x, 0.0, 1.0)


def test_single_point_perturbation_bound():
    x = np.array(plane_crash_dataset().values, dtype=float)
    a, delta = 0.6, 1e-3
    coef = (a / math.e) ** a / math.gamma(a + 1.0)
    base = empirical_fgce(x, a).value
    for i in range(x.size):
        y = x.copy()
        y[i] += delta
        assert abs(empirical_fgce(y, a).value - base) <= coef * delta * (1 + 1e-9)


def test_phi_shape_and_thresholds():
    x_dec, x_cvx = thresholds()
    assert x_dec == pytest.approx(math.exp(-EULER_GAMMA))
    assert x_dec == pytest.approx(0.5615, abs=1e-4)
    assert x_cvx == pytest.approx(0.1557, abs=1e-4)
    assert phi_shape(1.0, 0.37) == pytest.approx(0.37)
    a = np.linspace(0.01, 2.0, 200)
    y = np.array([phi_shape(t, 0.1) for t in a])
    assert np.all(np.diff(y) < 0) and np.all(np.diff(y, 2) > 0)
    with pytest.raises(OutOfDomain):
        phi_shape(1.0, 0.0)


def test_plane_crash_data(crash_values):
    s = plane_crash_dataset()
    assert isinstance(s, Sample)
    assert s.n == 44 and s.values.max() == 85 and s.values.sum() == 786
    assert crash_values[:3].tolist() == [3.0, 77.0, 9.0]
    assert empirical_fgce(s, 0.0).value == pytest.approx(85.0 - 786.0 / 44.0, rel=1e-14)


def test_plane_crash_alpha_profile():
    s = plane_crash_dataset()
    a = np.round(np.arange(0.0, 2.0001, 0.1), 10)
    y = np.array([empirical_fgce(s, t).value for t in a])
    assert np.all(np.isfinite(y)) and np.all(y > 0)
    tail = y[a >= 0.2]
    assert np.all(np.diff(tail) < 0)
    assert np.all(np.diff(tail, 2) > 0)


def test_prefix_curve_smoother_for_larger_alpha(crash_values):
    # absolute wiggle, as seen when the curves share one axis
    def roughness(alpha):
        v = np.array([val for _, val in prefix_fgce(crash_values, alpha)])
        return float(np.sum(np.abs(np.diff(v, 2))))

    assert prefix_fgce(crash_values, 1.0, [2, 44])[0][0] == 2
    assert roughness(2.0) < roughness(1.5) < roughness(1.0)
    assert roughness(2.0) < roughness(0.5)

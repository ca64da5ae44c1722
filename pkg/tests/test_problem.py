import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from surropt.problem import (
    FUNCTIONS,
    Budget,
    BudgetExhausted,
    NoisyObjective,
    TestFunction,
    eval_noisy,
    eval_true,
    important_count,
    sigma0_from_initial,
)


def test_rosenbrock_at_ones_is_zero():
    assert eval_true(TestFunction("rosenbrock", 30), np.ones(30)) == 0.0


def test_rastrigin_at_ones():
    assert eval_true(TestFunction("rastrigin", 2), [1.0, 1.0]) == pytest.approx(2.0, abs=1e-12)


def test_rosenbrock_at_origin():
    assert eval_true(TestFunction("rosenbrock", 2), [0.0, 0.0]) == 1.0


def test_levy_ignores_unimportant_coordinates():
    fn = TestFunction("levy", 5, 0.4)
    assert fn.m == 2
    assert eval_true(fn, [1, 1, 9, 9, 9]) == pytest.approx(0.0, abs=1e-12)


def test_levy_matches_scalar_loop():
    x = np.array([0.3, -2.0, 4.5, 7.0])

    def reference(x):
        w = [1 + (v - 1) / 4 for v in x]
        total = math.sin(math.pi * w[0]) ** 2
        for wi in w[:-1]:
            total += (wi - 1) ** 2 * (1 + 10 * math.sin(math.pi * wi + 1) ** 2)
        return total + (w[-1] - 1) ** 2 * (1 + math.sin(2 * math.pi * w[-1]) ** 2)

    assert eval_true(TestFunction("levy", 4), x) == pytest.approx(reference(x), rel=1e-13)


def test_zakharov_and_ackley_spot_values():
    # zakharov(1, 1): 2 + 1.5**2 + 1.5**4
    assert eval_true(TestFunction("zakharov", 2), [1, 1]) == pytest.approx(2 + 2.25 + 5.0625)
    # at x = 1 the cosine term is exp(1), leaving 20 * (1 - exp(-0.2))
    assert eval_true(TestFunction("ackley", 3), [1, 1, 1]) == pytest.approx(20 * (1 - math.exp(-0.2)))


@pytest.mark.parametrize("name", sorted(FUNCTIONS))
@pytest.mark.parametrize("fiv", [0.1, 0.25, 0.5, 0.75, 1.0])
def test_minimizer_value_is_zero(name, fiv):
    fn = TestFunction(name, 30, fiv)
    assert abs(eval_true(fn, fn.minimizer)) <= 1e-12


@pytest.mark.parametrize("name", sorted(FUNCTIONS))
def test_bounds_shape_and_values(name):
    fn = TestFunction(name, 4)
    spec = FUNCTIONS[name]
    assert fn.bounds.shape == (4, 2)
    assert np.all(fn.bounds[:, 0] == spec.lower) and np.all(fn.bounds[:, 1] == spec.upper)


def test_important_count_rounds_up_and_clamps():
    assert important_count(0.5, 30) == 15
    assert important_count(0.5, 5) == 3
    assert important_count(0.01, 10) == 1
    assert important_count(0.07, 100) == 7
    assert important_count(1.0, 7) == 7


@given(
    name=st.sampled_from(sorted(FUNCTIONS)),
    d=st.integers(1, 12),
    fiv=st.floats(0.05, 1.0),
    data=st.data(),
)
@settings(max_examples=60, deadline=None)
def test_inert_coordinates_do_not_matter(name, d, fiv, data):
    fn = TestFunction(name, d, fiv)
    lo, hi = fn.bounds[0]
    coord = st.floats(lo, hi, allow_nan=False)
    x = np.array(data.draw(st.lists(coord, min_size=d, max_size=d)))
    z = x.copy()
    z[fn.m:] = data.draw(st.lists(coord, min_size=d - fn.m, max_size=d - fn.m))
    assert eval_true(fn, x) == eval_true(fn, z)


def test_eval_true_rejects_bad_input():
    fn = TestFunction("rastrigin", 3)
    with pytest.raises(ValueError):
        eval_true(fn, [0.0, 0.0])
    with pytest.raises(ValueError):
        eval_true(fn, [0.0, 0.0, 6.0])


def test_test_function_validation():
    with pytest.raises(ValueError):
        TestFunction("sphere", 2)
    with pytest.raises(ValueError):
        TestFunction("levy", 2, 0.0)
    with pytest.raises(ValueError):
        TestFunction("levy", 0)
    assert TestFunction("Levy", 2).name == "levy"


def test_sigma0_is_output_range():
    assert sigma0_from_initial([1, 4, 2]) == 3
    assert sigma0_from_initial([5, 5, 5]) == 0
    with pytest.raises(ValueError):
        sigma0_from_initial([])


def test_sigma0_on_a_latin_design():
    from surropt.doe import lhd

    fn = TestFunction("rosenbrock", 30)
    X = lhd(31, fn.bounds, np.random.default_rng(3))
    values = [fn(x) for x in X]
    assert sigma0_from_initial(values) == max(values) - min(values)


def test_zero_noise_returns_true_value_exactly():
    fn = TestFunction("ackley", 4)
    obj = NoisyObjective(fn, 0.0, 10.0, np.random.default_rng(0))
    budget = Budget(5)
    x = np.full(4, 0.3)
    assert eval_noisy(obj, x, budget) == eval_true(fn, x)
    assert budget.used == 1


def test_noise_mean_and_variance():
    fn = TestFunction("rastrigin", 2)
    obj = NoisyObjective(fn, 0.1, 10.0, np.random.default_rng(11))
    n = 10**5
    budget = Budget(n)
    x = np.array([0.5, -0.5])
    draws = np.array([obj(x, budget) for _ in range(n)]) - fn(x)
    std = 0.1 * 10.0
    assert abs(draws.mean()) <= 3 * std / math.sqrt(n)
    assert abs(draws.var() / std**2 - 1) < 0.05
    assert budget.used == obj.calls == n


def test_noise_stream_is_reproducible():
    fn = TestFunction("levy", 3)
    x = np.zeros(3)

    def draws(seed):
        obj = NoisyObjective(fn, 0.25, 4.0, np.random.default_rng(seed))
        budget = Budget(20)
        return [obj(x, budget) for _ in range(20)]

    assert draws(5) == draws(5)
    assert draws(5) != draws(6)


def test_budget_exhaustion_and_accounting():
    fn = TestFunction("levy", 2)
    obj = NoisyObjective(fn, 0.1, 1.0, np.random.default_rng(0))
    budget = Budget(3)
    for _ in range(3):
        obj(np.zeros(2), budget)
    assert budget.exhausted and budget.remaining == 0
    with pytest.raises(BudgetExhausted):
        obj(np.zeros(2), budget)
    assert budget.used == 3
    with pytest.raises(ValueError):
        Budget(0)


def test_noisy_objective_validation():
    fn = TestFunction("levy", 2)
    with pytest.raises(ValueError):
        NoisyObjective(fn, 1.0, 1.0)
    with pytest.raises(ValueError):
        NoisyObjective(fn, 0.1, -1.0)

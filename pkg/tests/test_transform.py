import cmath
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from oracles import plastic_orbit
from pisot_ifs import fixtures
from pisot_ifs.errors import EmptyBatch
from pisot_ifs.transform import (
    NuEvaluator,
    empirical_nu_hat,
    nu_hat,
    sample_nu,
    self_similarity_check,
)


@pytest.fixture(scope="module")
def plastic():
    return fixtures.plastic_system()


@pytest.fixture(scope="module")
def orbit():
    return plastic_orbit(top=40)


@pytest.mark.parametrize("k", [-5, 0, 1, 3, 10, 25])
def test_nu_hat_matches_recurrence_oracle(plastic, orbit, k):
    v = nu_hat(plastic, 1, k, 1e-12)
    assert v.rad <= 1e-12
    assert abs(complex(v) - orbit[k]) <= v.rad + 1e-14


def test_nu_hat_field_alpha(plastic):
    F = plastic.field
    ref = plastic_orbit(top=10)
    # alpha = theta shifts the orbit by one
    v = nu_hat(plastic, F.theta_power(1), 4, 1e-12)
    assert abs(complex(v) - ref[5]) <= v.rad + 1e-14


def test_normalization_and_symmetry(plastic):
    ev = NuEvaluator(plastic)
    assert ev.nu_hat(0, 0, 1e-12).contains(1)
    for k in (0, 4, 9):
        a = ev.nu_hat(1, k, 1e-10)
        b = ev.nu_hat(-1, k, 1e-10)
        assert a.conjugate().overlaps(b)
        assert a.abs_lower() <= 1


def test_uniform_sinc():
    S = fixtures.uniform_system(1)
    ev = NuEvaluator(S)
    for a, k in [(1, -1), (3, -2), (1, -4)]:
        t = a * 2.0**k
        ref = (cmath.exp(2j * math.pi * t) - 1) / (2j * math.pi * t)
        v = ev.nu_hat(a, k, 1e-12)
        assert abs(complex(v) - ref) <= v.rad + 1e-15


def test_precision_nesting(plastic):
    coarse = NuEvaluator(plastic, precision=128).nu_hat(1, 7, 1e-8)
    fine = NuEvaluator(plastic, precision=256).nu_hat(1, 7, 1e-12)
    assert coarse.contains_ball(fine)


def test_sampling_is_deterministic_per_seed(plastic):
    a = sample_nu(plastic, 70_000, depth=60, seed=42)
    b = sample_nu(plastic, 70_000, depth=60, seed=42)
    c = sample_nu(plastic, 70_000, depth=60, seed=43)
    assert np.array_equal(a.samples, b.samples)
    assert not np.array_equal(a.samples, c.samples)


def test_samples_inside_support(plastic):
    batch = sample_nu(plastic, 20_000, depth=80, seed=1)
    bound = float(plastic.support_bound())
    assert batch.samples.min() >= 0
    assert batch.samples.max() <= bound + batch.truncation_bound


def test_empirical_transform_close_to_certified(plastic):
    batch = sample_nu(plastic, 200_000, depth=80, seed=7)
    F = plastic.field
    for k in (0, 2):
        t = float(F.real_value(F.theta_power(k)))
        emp = empirical_nu_hat(batch, t)
        det = nu_hat(plastic, 1, k, 1e-10)
        assert abs(complex(emp) - complex(det)) <= 4 * batch.statistical_error + emp.rad


def test_self_similarity_ks(plastic):
    batch = sample_nu(plastic, 50_000, depth=80, seed=3)
    good = self_similarity_check(batch, plastic)
    assert good.passed
    bad = self_similarity_check(batch, plastic, p=[0.9, 0.1])
    assert not bad.passed


def test_self_similarity_explicit_maps():
    S = fixtures.uniform_system(1)
    a = sample_nu(S, 20_000, seed=5)
    b = sample_nu(S, 20_000, seed=6)
    assert self_similarity_check(a, [(0.5, 0.0), (0.5, 0.5)], other=b).passed


def test_empty_batch(plastic):
    batch = sample_nu(plastic, 0)
    with pytest.raises(EmptyBatch):
        empirical_nu_hat(batch, 1.0)


@settings(max_examples=15, deadline=None)
@given(st.integers(-8, 30), st.integers(1, 20))
def test_modulus_at_most_one(k, a):
    S = fixtures.plastic_system()
    v = nu_hat(S, a, k, 1e-8)
    assert v.abs_lower() <= 1


@pytest.mark.parametrize("k", [-2, 0, 2])
def test_nu_hat_matches_truncated_tree(plastic, k):
    from oracles import plastic_tree

    t = float(plastic.field.real_value(plastic.field.theta_power(k)))
    ref, bound = plastic_tree(t)
    v = nu_hat(plastic, 1, k, 1e-10)
    assert bound < 1e-2
    assert abs(complex(v) - ref) <= v.rad + bound

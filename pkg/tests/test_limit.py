import io
from fractions import Fraction

import pytest

from oracles import plastic_orbit
from pisot_ifs import fixtures
from pisot_ifs.errors import PisotIFSError
from pisot_ifs.ifs import ProbabilityVector
from pisot_ifs.limit import (
    LimitEvaluator,
    M_hat,
    k_invariance_check,
    line_grid,
    m_hat,
    mc_limit_check,
    parse_grid,
    simplex_grid,
    sweep,
)


@pytest.fixture(scope="module")
def plastic():
    return fixtures.plastic_system()


@pytest.fixture(scope="module")
def headline_oracle():
    # nu_hat(theta^K) converges to m_hat(1) at rate |alpha|^K; K = 300 is far past 1e-15
    return plastic_orbit(top=300)[300]


def test_frozen_headline_matches_oracle(headline_oracle):
    assert abs(fixtures.HEADLINE_M_HAT - headline_oracle) < 1e-16


def test_m_hat_encloses_oracle(plastic, headline_oracle):
    v = m_hat(plastic, 1, 1e-10)
    assert v.rad <= 1e-10
    assert abs(complex(v) - headline_oracle) <= v.rad + 1e-16


@pytest.mark.parametrize("p1", ["1/5", "2/3", "9/10"])
def test_m_hat_other_weights(plastic, p1):
    p1 = Fraction(p1)
    ref = plastic_orbit(top=400, p=(float(1 - p1), float(p1)), dps=120)[400]
    v = m_hat(plastic.with_p([1 - p1, p1]), 1, 1e-9)
    # convergence of the oracle in K is slower for lopsided p; allow 1e-12 for it
    assert abs(complex(v) - ref) <= v.rad + 1e-12


def test_n_zero_and_conjugate(plastic):
    assert m_hat(plastic, 0).contains(1)
    a, b = m_hat(plastic, 1, 1e-9), m_hat(plastic, -1, 1e-9)
    assert a.conjugate().overlaps(b)


def test_endpoints(plastic):
    for p in ([1, 0], [0, 1]):
        v = m_hat(plastic.with_p(p), 1, 1e-12)
        assert abs(complex(v) - 1) + v.rad <= 1e-10
    d = LimitEvaluator(plastic.with_p([0, 1])).delta(None, 1e-12)
    assert d.contains(2)


def test_k_invariance(plastic):
    rep = k_invariance_check(plastic, 1)
    assert rep.passed
    rep3 = k_invariance_check(plastic.with_p(["3/10", "7/10"]), 3, tol=1e-9)
    assert rep3.passed


def test_k_above_bound_rejected(plastic):
    ev = LimitEvaluator(plastic)
    with pytest.raises(PisotIFSError):
        ev.delta(5, 1e-8)


def test_multidimensional_coefficient(plastic):
    m1 = m_hat(plastic, 1, 1e-9)
    for nvec in ((1, 0, 0), (0, 1, 0)):
        assert M_hat(plastic, nvec, 1e-9).overlaps(m1)
    assert M_hat(plastic, (0, 0, 0)).contains(1)


def test_with_p_shares_tables(plastic):
    base = LimitEvaluator(plastic)
    other = base.with_p(ProbabilityVector(["1/3", "2/3"], plastic.field))
    fresh = LimitEvaluator(plastic.with_p(["1/3", "2/3"]))
    assert other.m_hat(1e-9).overlaps(fresh.m_hat(1e-9))


def test_golden_identity():
    S = fixtures.golden_degenerate_system()
    from pisot_ifs.transform import NuEvaluator
    delta = LimitEvaluator(S).delta(None, 1e-11)
    nu = NuEvaluator(S)
    f1, f2 = nu.nu_hat(1, -1, 1e-11), nu.nu_hat(1, -2, 1e-11)
    rhs = abs(complex(f1)) ** 2 + abs(complex(f2)) ** 2 / 2
    assert abs(complex(delta) - rhs) <= delta.rad + 4 * (f1.rad + f2.rad)
    assert abs(complex(delta).real - 0.685108256353299) < 1e-12


@pytest.mark.parametrize("N", [1, 2])
def test_uniform_limit_vanishes(N):
    S = fixtures.uniform_system(N)
    for n in range(1, 6):
        assert m_hat(S, n, 1e-10).contains(0)


def test_second_system_zero_at_special_point():
    S = fixtures.plastic_23_system()
    for n in range(1, 6):
        assert m_hat(S, n, 1e-9).contains(0)
    off = m_hat(fixtures.plastic_23_system(["1/2", "1/2"]), 1, 1e-9)
    assert not off.contains(0)


def test_grids():
    g = line_grid(0, 1, 3)
    assert g == [(1, 0), (Fraction(1, 2), Fraction(1, 2)), (0, 1)]
    assert parse_grid("0:1/2:5") == (0, Fraction(1, 2), 5)
    pts = simplex_grid(2, 0, 1, 3)
    assert all(sum(p) == 1 and min(p) >= 0 for p in pts)
    assert len(pts) == 6
    with pytest.raises(ValueError):
        line_grid(0, 2, 3)


def test_sweep_endpoints_and_csv(plastic):
    table = sweep(plastic, 1, line_grid(0, 1, 2), 1e-9, grid_spec="0:1:2")
    assert table.success_fraction == 1
    assert all(r.value.contains(1) or abs(complex(r.value) - 1) < 1e-9 for r in table.rows)
    text = table.to_csv()
    header = text.splitlines()[0]
    assert header == "index,p_0,p_1,re,im,abs,radius,status"
    buf = io.StringIO()
    table.to_csv(buf)
    assert buf.getvalue() == text
    meta = table.metadata("abc")
    assert meta["system_hash"] == "abc" and meta["grid"] == "0:1:2"


def test_sweep_is_deterministic(plastic):
    g = line_grid(Fraction(1, 10), Fraction(9, 10), 9)
    a = sweep(plastic, 1, g, 1e-8).to_csv()
    b = sweep(plastic, 1, g, 1e-8).to_csv()
    assert a == b


def test_mc_limit_small(plastic):
    rep = mc_limit_check(plastic, 1, 30, 100_000, seed=99)
    assert rep.passed
    assert rep.allowed < 0.02

import math

import pytest

from conftest import matches_printed
from cutvol import elliptope as el

TABLE1_I = {3: "0.617", 4: "0.183", 5: "0.022", 6: "9.50e-04", 7: "1.33e-05"}


def test_lgamma_exact_points():
    assert el.lgamma(1.0) == pytest.approx(0.0, abs=1e-13)
    assert el.lgamma(0.5) == pytest.approx(math.log(math.sqrt(math.pi)), abs=1e-13)
    assert el.lgamma(10.0) == pytest.approx(math.log(362880.0), abs=1e-12)


def test_lgamma_against_libm():
    for x in (0.1, 0.31, 0.9, 2.5, 3.7, 12.0, 55.5, 301.25, 4096.0):
        assert el.lgamma(x) == pytest.approx(math.lgamma(x), rel=1e-13, abs=2e-12)
    with pytest.raises(ValueError):
        el.lgamma(0.0)
    with pytest.raises(ValueError):
        el.lgamma(-3.2)


@pytest.mark.parametrize("x", [0.5, 1.5, 7.3, 40.0])
def test_lgamma_recurrence(x):
    assert el.lgamma(x + 1.0) - el.lgamma(x) == pytest.approx(math.log(x), abs=1e-12)


def test_lgamma_factorials():
    for k in range(0, 21):
        assert el.lgamma(k + 1.0) == pytest.approx(
            math.log(math.factorial(k)), abs=1e-12
        )


def test_lgamma_error_bound_honored():
    import mpmath as mp

    mp.mp.dps = 40
    for x in (8.5, 12.0, 26.0, 100.0):
        err = abs(el.lgamma(x) - float(mp.loggamma(x)))
        assert err <= el.lgamma_error_bound(x) + 1e-14


def test_stirling_params_validation():
    with pytest.raises(ValueError):
        el.StirlingParams(terms=0)
    with pytest.raises(ValueError):
        el.StirlingParams(terms=4)
    with pytest.raises(ValueError):
        el.StirlingParams(shift_threshold=5.0)
    loose = el.StirlingParams(terms=1, shift_threshold=9.0)
    assert el.lgamma(3.0, loose) == pytest.approx(math.lgamma(3.0), abs=1e-5)


def test_lbeta():
    assert el.lbeta(1.0, 1.0) == pytest.approx(0.0, abs=1e-13)
    assert el.lbeta(1.5, 1.5) == pytest.approx(math.log(math.pi / 8), abs=1e-13)
    for a, b in ((0.7, 2.3), (4.0, 9.5)):
        assert el.lbeta(a, b) == el.lbeta(b, a)
    with pytest.raises(ValueError):
        el.lbeta(0.0, 1.0)


def test_joe_log_volume_small():
    assert el.joe_log_volume(2).log_value == pytest.approx(math.log(2.0), abs=1e-15)
    assert el.joe_log_volume(3).log_value == pytest.approx(
        math.log(math.pi**2 / 2), abs=1e-12
    )
    assert el.joe_log_volume(5).exact is True


def test_joe_recursion_identity():
    for n in (3, 4, 10, 37):
        step = (n - 1) ** 2 * math.log(2.0) + (n - 1) * el.lbeta(n / 2, n / 2)
        assert el.joe_log_volume(n).log_value == pytest.approx(
            el.joe_log_volume(n - 1).log_value + step, rel=1e-15, abs=1e-12
        )


def test_i_log_volume_closed_form_at_3():
    assert abs(el.i_log_volume(3).log_value - math.log(math.pi**2 / 16)) < 1e-10


def test_i_reproduces_reference_values():
    for n, printed in TABLE1_I.items():
        ours = math.exp(el.i_log_volume(n).log_value)
        assert matches_printed(ours, printed)
    assert math.exp(el.i_log_volume(8).log_value) == pytest.approx(5.54e-08, rel=1e-3)
    assert math.exp(el.i_log_volume(25).log_value) == pytest.approx(9.08e-150, rel=2e-3)


def test_monotone_decay():
    vals = [el.i_log_volume(n).log_value for n in range(3, 60)]
    assert all(b < a for a, b in zip(vals, vals[1:]))


def test_asymptotic_band():
    ds = [
        el.joe_log_volume(n).log_value - el.asymptotic_log_volume(n).log_value
        for n in range(20, 501)
    ]
    assert max(ds) - min(ds) < 0.5
    d500 = el.joe_log_volume(500).log_value - el.asymptotic_log_volume(500).log_value
    d400 = el.joe_log_volume(400).log_value - el.asymptotic_log_volume(400).log_value
    assert abs(d500 - d400) < 0.02


def test_asymptotic_flags_and_direct_value():
    lv = el.asymptotic_log_volume(10)
    assert lv.exact is False
    logn = math.log(10)
    half = math.log(math.sqrt(2 * math.pi))
    want = (
        -100 * logn / 4
        + 100 * (0.125 + half / 2)
        + 10 * logn / 4
        - 10 * (0.25 + half / 2)
        - logn / 24
    )
    assert lv.log_value == pytest.approx(want, rel=1e-15)


def test_asymptotic_leading_term_dominates():
    n = 100_000
    ratio = el.asymptotic_log_volume(n).log_value / (-n * n * math.log(n) / 4)
    assert 0.75 < ratio < 1.25


def test_barnes_g_small_reference():
    # G(4) = 1! 2! = 2 exactly; the expansion at n=3 carries O(1/n^2) error
    assert el.barnes_g_log(3) == pytest.approx(math.log(2.0), abs=5e-3)
    # G(3) = 1! = 1; even the smallest argument stays within its error budget
    assert el.barnes_g_log(2) == pytest.approx(0.0, abs=2e-2)


def test_barnes_g_against_exact_product():
    n = 50
    exact = math.fsum(math.lgamma(i + 1) for i in range(1, n))  # log prod i!
    assert el.barnes_g_log(n) == pytest.approx(exact, abs=1e-6)


def test_barnes_g_sum_identity():
    # log G(n+1) = n log Gamma(n) - sum_{j<n} j log j
    n = 50
    direct = math.fsum(j * math.log(j) for j in range(1, n))
    via_g = n * math.lgamma(n) - el.barnes_g_log(n)
    assert via_g == pytest.approx(direct, abs=1e-6)


def test_ratio_i_over_rmet():
    assert el.ratio_log_i_over_rmet(6) == pytest.approx(-0.108, abs=2e-3)
    assert el.ratio_log_i_over_rmet(5) > 0
    assert all(el.ratio_log_i_over_rmet(n) < 0 for n in range(6, 201))


def test_logvol_validation():
    with pytest.raises(ValueError):
        el.LogVol(math.inf)


def test_upper_bound_constant_is_finite():
    assert math.isfinite(el.upper_bound_constant())

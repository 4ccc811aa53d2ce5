"""Halting-probability engine: capped sums, the oracle, block normality."""

import pytest

from omegalab.bits import Dyadic, dyadic_bits
from omegalab.complexity import STRUCTURAL
from omegalab.omega import (
    borel_normality,
    decided_halting_set,
    omega_double_prime,
    omega_exact_capped,
    omega_lower_bound,
    oracle_halting_from_omega,
)


def test_lower_bound_examples():
    assert omega_lower_bound("sd", 15, 100).value == Dyadic.zero()
    lo = omega_lower_bound("sd", 16, 100)
    assert lo.value == Dyadic.pow2(16) and lo.contributing == 1
    assert omega_lower_bound("total", 0, 100).value == Dyadic.zero()
    with pytest.raises(ValueError):
        omega_lower_bound("c2", 16, 100)


def test_exact_capped_values():
    assert omega_exact_capped(15).value == Dyadic.zero()
    ex24 = omega_exact_capped(24)
    assert ex24.value == Dyadic.pow2(16) and ex24.contributing == 1
    # 2^-16 + 2*2^-25, by hand
    assert omega_exact_capped(25).value == Dyadic(257, 24)


def test_exact_agrees_with_lower_bound_at_structural_budget():
    ex = omega_exact_capped(24)
    lo = omega_lower_bound("total", 24, 3)  # 3 subexpressions suffice for 3-char prefixes
    assert ex.value == lo.value
    assert ex.value == omega_lower_bound("total", 24, 10**4).value


def test_monotone_in_cap():
    values = [omega_exact_capped(L).value for L in (15, 16, 20, 24, 25, 32)]
    for a, b in zip(values, values[1:]):
        assert a <= b
    assert all(v <= Dyadic.one() for v in values)


def test_double_monotonicity_grid():
    values = {}
    for L in (16, 20, 24):
        for B in (1, 10, 100):
            values[L, B] = omega_lower_bound("total", L, B).value
    for L1, B1 in values:
        for L2, B2 in values:
            if L1 <= L2 and B1 <= B2:
                assert values[L1, B1] <= values[L2, B2]


def test_double_prime():
    assert omega_double_prime("total", 0, 56, STRUCTURAL)["value_dyadic"] == Dyadic.pow2(16)
    rep = omega_double_prime("total", 1, 56, STRUCTURAL)
    # encode(0)="" has h=16, encode(1)="1" has h=25: 2^-16 + 2^-25 = 513/2^25
    assert rep["value_dyadic"] == Dyadic(513, 25)
    assert rep["missing"] == []
    prev = Dyadic.zero()
    for n in (0, 1, 3):
        cur = omega_double_prime("total", n, 56, STRUCTURAL)["value_dyadic"]
        assert prev <= cur
        prev = cur


def test_double_prime_missing_skipped():
    rep = omega_double_prime("total", 3, 24, STRUCTURAL)
    assert 2 in rep["missing"] and 3 in rep["missing"]  # "10"/"11" have no <=24-bit program


def test_oracle_trivial_and_exact():
    res = oracle_halting_from_omega("", 24)
    assert not res.tripped and res.halting_set == ()
    res = oracle_halting_from_omega("0" * 12, 24)
    assert not res.tripped and res.halting_set == decided_halting_set(24, 12)
    kbits = dyadic_bits(omega_exact_capped(24).value, 16)
    res = oracle_halting_from_omega(kbits, 24)
    assert not res.tripped
    assert res.halting_set == decided_halting_set(24, 16)
    assert len(res.halting_set) == 1


def test_oracle_completeness_l25():
    val = omega_exact_capped(25).value
    for k in (16, 20, 25):
        res = oracle_halting_from_omega(dyadic_bits(val, k), 25)
        assert not res.tripped
        assert res.halting_set == decided_halting_set(25, k)


def test_oracle_corrupted_bits_trip_guard():
    res = oracle_halting_from_omega("0" * 11 + "1", 24)
    assert res.tripped and "exhausted" in res.reason
    with pytest.raises(ValueError):
        oracle_halting_from_omega("0" * 30, 24)  # k exceeds the cap


def test_normality_examples():
    assert borel_normality("000000", 1, "0.1")["verdict"] == "fail"
    assert borel_normality("01010101", 1, "0.1")["verdict"] == "pass"
    rep = borel_normality("01010101", 2, "0.1")
    assert rep["verdict"] == "fail"
    assert rep["frequencies"]["01"]["count"] == 4
    assert rep["blocks"] == 4


def test_normality_domain_errors():
    with pytest.raises(ValueError):
        borel_normality("01", 0, "0.1")
    with pytest.raises(ValueError):
        borel_normality("0", 2, "0.1")


def test_conversion_failure_mass_reported():
    ex = omega_exact_capped(32)
    assert ex.conv_fail_mass > Dyadic.zero()  # (qa)-style programs halt without output
    assert ex.conv_fail_mass <= ex.value

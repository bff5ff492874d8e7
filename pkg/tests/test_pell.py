from math import isqrt

import pytest
from hypothesis import given, settings, strategies as st

from closefact.pell import (
    DEFAULT_MODULI,
    FundamentalUnit,
    PellEquation,
    auto_obstruct,
    bounded_search,
    classify_equation,
    fundamental_solution,
    prime_power_obstruction,
    qnr_obstruction,
    residue_obstruction,
    sqrt_cf_terms,
    unit_power,
)


def test_equation_validation():
    with pytest.raises(ValueError):
        PellEquation(0, 1, 2)
    with pytest.raises(ValueError):
        PellEquation(1, 0, 2)
    with pytest.raises(ValueError):
        PellEquation(1, 1, 0)
    assert PellEquation(1, 1, -3).tau == -3


def test_default_moduli_are_ascending_prime_powers():
    assert DEFAULT_MODULI[0] == 2 and DEFAULT_MODULI[-1] == 64
    assert list(DEFAULT_MODULI) == sorted(DEFAULT_MODULI)
    assert {4, 8, 9, 25, 27, 49, 61} <= set(DEFAULT_MODULI)
    assert 6 not in DEFAULT_MODULI and 81 not in DEFAULT_MODULI


# ---------------------------------------------------------------------------
# residue sweeps
# ---------------------------------------------------------------------------

def test_residue_obstruction_mod4():
    cert = residue_obstruction(PellEquation(12, 1, 2), 4)
    assert cert is not None and cert.modulus == 4
    assert cert.verify(PellEquation(12, 1, 2))


def test_residue_obstruction_mod3():
    assert residue_obstruction(PellEquation(6, 2, 2), 3) is not None


def test_residue_obstruction_none_when_solvable():
    eq = PellEquation(6, 4, 2)  # witness (1, 1)
    for m in (3, 4, 5, 8):
        assert residue_obstruction(eq, m) is None


def test_residue_obstruction_requires_modulus_ge_2():
    with pytest.raises(ValueError):
        residue_obstruction(PellEquation(1, 1, 1), 1)


# ---------------------------------------------------------------------------
# the two lemma-style certificates
# ---------------------------------------------------------------------------

def test_prime_power_obstruction_fires():
    cert = prime_power_obstruction(PellEquation(18, 1, 3), 3)
    assert cert is not None and cert.prime == 3 and dict(cert.detail)["exponent"] == 1
    assert prime_power_obstruction(PellEquation(9, 8, 3), 3) is not None


def test_prime_power_obstruction_declines():
    assert prime_power_obstruction(PellEquation(6, 4, 2), 3) is None
    with pytest.raises(ValueError):
        prime_power_obstruction(PellEquation(6, 4, 2), 4)


def test_qnr_obstruction_fires():
    cert = qnr_obstruction(PellEquation(15, 2, 3), 3)
    assert cert is not None and dict(cert.detail)["forced_residue"] == 2
    assert qnr_obstruction(PellEquation(15, 8, 3), 3) is not None


def test_qnr_obstruction_declines():
    assert qnr_obstruction(PellEquation(5, 2, 5), 5) is None  # (19, 30) solves it
    with pytest.raises(ValueError):
        qnr_obstruction(PellEquation(5, 2, 5), 2)


@pytest.mark.parametrize("K,M,tau,p", [(18, 1, 3, 3), (9, 8, 3, 3), (9, 2, 3, 3)])
def test_prime_power_subsumed_by_residue_sweep(K, M, tau, p):
    eq = PellEquation(K, M, tau)
    cert = prime_power_obstruction(eq, p)
    assert cert is not None
    b = dict(cert.detail)["exponent"]
    assert residue_obstruction(eq, p ** (b + 1)) is not None


@pytest.mark.parametrize("K,M,tau,p", [(15, 2, 3, 3), (15, 8, 3, 3), (10, 1, 5, 5)])
def test_qnr_subsumed_by_residue_sweep(K, M, tau, p):
    eq = PellEquation(K, M, tau)
    assert qnr_obstruction(eq, p) is not None
    assert residue_obstruction(eq, p * p) is not None


# ---------------------------------------------------------------------------
# auto dispatch
# ---------------------------------------------------------------------------

def test_auto_obstruct_two_step_descent():
    # neither lemma applies to 10x^2 - 3y^2 = 3; a two-step descent is
    # captured by prime-power sweeps (mod 9 works, mod 8 is minimal)
    eq = PellEquation(10, 3, 3)
    assert residue_obstruction(eq, 9) is not None
    for m in (2, 3, 4, 5, 7):
        assert residue_obstruction(eq, m) is None
    cert = auto_obstruct(eq)
    assert cert.kind == "residue-sweep" and cert.modulus == 8


def test_auto_obstruct_reports_minimal_modulus():
    # 120x^2 - 2y^2 = 4: mod 4 does not obstruct, mod 5 and mod 8 both do;
    # the sweep order guarantees the smallest one is reported
    eq = PellEquation(120, 2, 4)
    assert residue_obstruction(eq, 4) is None
    assert residue_obstruction(eq, 8) is not None
    cert = auto_obstruct(eq)
    assert cert.modulus == 5


@pytest.mark.parametrize("K,M", [(10, 4), (2, 2), (20, 2), (6, 20)])
def test_auto_obstruct_parity(K, M):
    cert = auto_obstruct(PellEquation(K, M, 5))
    assert cert is not None and cert.modulus == 2


def test_auto_obstruct_none_for_solvable():
    assert auto_obstruct(PellEquation(6, 4, 2)) is None


def test_auto_obstruct_custom_moduli():
    eq = PellEquation(10, 3, 3)
    assert auto_obstruct(eq, moduli=[4, 5]) is None
    assert auto_obstruct(eq, moduli=[9]) is not None


# ---------------------------------------------------------------------------
# bounded search and classification
# ---------------------------------------------------------------------------

def test_bounded_search_examples():
    assert (17, 8) in bounded_search(PellEquation(4, 18, 4), 20)
    assert (19, 15) in bounded_search(PellEquation(5, 8, 5), 20)
    assert bounded_search(PellEquation(12, 1, 2), 1000) == []


def test_bounded_search_ascending_in_x():
    hits = bounded_search(PellEquation(1, 2, 1), 600)  # x^2 - 2y^2 = 1
    assert hits[:3] == [(3, 2), (17, 12), (99, 70)]
    assert hits == sorted(hits)


def test_classify_solvable():
    verdict = classify_equation(PellEquation(6, 4, 2))
    assert verdict.status == "solvable" and verdict.witnesses[0] == (1, 1)


def test_classify_unknown_negative_pell():
    # x^2 - 34y^2 = -1 has no solutions but also no congruence obstruction
    verdict = classify_equation(PellEquation(1, 34, -1))
    assert verdict.status == "unknown" and verdict.search_bound == 10_000


@settings(max_examples=60, deadline=None)
@given(
    st.integers(min_value=1, max_value=30),
    st.integers(min_value=1, max_value=30),
    st.integers(min_value=-30, max_value=30).filter(lambda t: t != 0),
)
def test_classification_is_sound(K, M, tau):
    eq = PellEquation(K, M, tau)
    verdict = classify_equation(eq, bound=300)
    if verdict.status == "obstructed":
        assert verdict.certificate.verify(eq)
        assert bounded_search(eq, 300) == []
    elif verdict.status == "solvable":
        for x, y in verdict.witnesses:
            assert eq.evaluate(x, y) == tau


# ---------------------------------------------------------------------------
# fundamental units
# ---------------------------------------------------------------------------

def test_fundamental_solution_examples():
    assert fundamental_solution(6) == FundamentalUnit(6, 5, 2)
    assert fundamental_solution(2) == FundamentalUnit(2, 3, 2)
    assert fundamental_solution(3) == FundamentalUnit(3, 2, 1)


def test_fundamental_solution_rejects_squares():
    for D in (1, 4, 9, 49):
        with pytest.raises(ValueError):
            fundamental_solution(D)


def test_fundamental_solution_matches_brute_force_small():
    def brute(D, cap=200000):
        for x in range(2, cap):
            q, r = divmod(x * x - 1, D)
            if r == 0 and isqrt(q) ** 2 == q and q > 0:
                return (x, isqrt(q))
        raise AssertionError(f"no solution below {cap} for D={D}")

    for D in range(2, 21):
        if isqrt(D) ** 2 == D:
            continue
        f = fundamental_solution(D)
        assert (f.x, f.y) == brute(D)


def test_sqrt_cf_terms():
    assert sqrt_cf_terms(6) == (2, [2, 4])
    assert sqrt_cf_terms(19) == (4, [2, 1, 3, 1, 2, 8])
    with pytest.raises(ValueError):
        sqrt_cf_terms(16)


def test_unit_power_examples():
    u6 = FundamentalUnit(6, 5, 2)
    assert unit_power(u6, 1) == (5, 2)
    assert unit_power(u6, 2) == (49, 20)
    assert unit_power(u6, 3) == (485, 198)
    with pytest.raises(ValueError):
        unit_power(u6, 0)


@given(st.integers(min_value=1, max_value=40), st.sampled_from([2, 3, 6, 7, 13, 29]))
def test_unit_power_satisfies_pell_identity(i, D):
    fund = fundamental_solution(D)
    x, y = unit_power(fund, i)
    assert x * x - D * y * y == 1

import random
from fractions import Fraction

import pytest
import sympy

from conftest import raw
from oracles import nonzero_cubics
from cubix.cubics import BinaryCubic, LinearForm, big_omega, form_exact_div, form_mul, qn
from cubix.errors import GenericInput, Irreducible, MultipleRoot, ZeroCubic
from cubix.factor import (
    cardano_root, factor_multiple_root, full_factor, is_reducible, linear_factor,
    linear_factor_traced, normed_sum_basis, three_linear_factors,
)
from cubix.fields import parse_field, rational_roots, sqrt_in_field
from cubix.orbits import DOUBLE, GEN_SQUARE, TRIPLE, classify, same_sl2_orbit
from cubix.verify import random_cubic

X, Y = sympy.symbols("x y")


def has_root_scan(P):
    """Linear factor over a finite field by scanning the projective line."""
    F = P.field
    if not P.a:
        return True
    return any(not P(t, F.one) for t in F.elements())


def expected_pattern(P):
    kind = classify(P).kind
    if kind == TRIPLE:
        return ((1, 3),)
    if kind == DOUBLE:
        return ((1, 1), (1, 2))
    if not is_reducible(P):
        return ((3, 1),)
    return None  # (1,1)^3 or (1,1),(2,1)


def sympy_pattern(P):
    expr = sum(sympy.Rational(c.raw.numerator, c.raw.denominator) * m
               for c, m in zip(P.raw(), (X**3, X**2 * Y, X * Y**2, Y**3)))
    _, facs = sympy.factor_list(expr)
    return tuple(sorted((sympy.Poly(f, X, Y).total_degree(), e) for f, e in facs))


# --- multiple roots -------------------------------------------------------

def test_multiple_root_examples(Q):
    fac = factor_multiple_root(raw(Q, 0, 3, 0, 0))
    assert fac.unit == 1
    assert [(f.coeffs, f.multiplicity) for f in fac.factors] == [
        ((Q(1), Q(0)), 2), ((Q(0), Q(3)), 1)]
    fac = factor_multiple_root(raw(Q, 1, 3, 3, 1))
    assert fac.pattern() == ((1, 3),) and fac.factors[0].coeffs == (Q(1), Q(1))
    fac = factor_multiple_root(raw(Q, 1, 3, 0, 0))
    assert {f.coeffs for f in fac.factors} == {(Q(1), Q(0)), (Q(1), Q(3))}
    assert fac.expand() == raw(Q, 1, 3, 0, 0)
    fac = factor_multiple_root(raw(Q, 0, 0, 3, 2))
    assert fac.expand() == raw(Q, 0, 0, 3, 2) and fac.pattern() == ((1, 1), (1, 2))


def test_multiple_root_errors(Q):
    with pytest.raises(GenericInput):
        factor_multiple_root(raw(Q, 1, 0, 0, 1))
    with pytest.raises(ZeroCubic):
        factor_multiple_root(raw(Q, 0, 0, 0, 0))


# --- reducibility ---------------------------------------------------------

def test_reducibility_examples(Q):
    assert is_reducible(raw(Q, 1, 0, 6, -7))
    assert not is_reducible(raw(Q, 1, 0, 0, 2))
    assert rational_roots([1, 0, 0, 2]) == []
    assert is_reducible(raw(Q, 1, 0, 0, 1))
    with pytest.raises(ZeroCubic):
        is_reducible(raw(Q, 0, 0, 0, 0))


@pytest.mark.parametrize("desc", ["fp:5", "fp:7"])
def test_reducibility_matches_root_scan(desc):
    F = parse_field(desc)
    for P in nonzero_cubics(F):
        assert is_reducible(P) == has_root_scan(P)


def test_reducibility_matches_rational_roots(Q):
    rng = random.Random(2)
    for _ in range(400):
        P = random_cubic(Q, rng, height=12)
        if P.is_zero():
            continue
        oracle = not P.a or bool(rational_roots([c.raw for c in P.raw()]))
        assert is_reducible(P) == oracle


# --- linear factors -------------------------------------------------------

def test_linear_factor_examples(Q):
    P = raw(Q, 1, 0, 6, -7)
    phi, method = linear_factor_traced(P)
    assert method.startswith("ii") and phi.proportional_to(LinearForm(Q(1), Q(-1)))
    P = raw(Q, 2, 0, 0, 54)
    phi, method = linear_factor_traced(P)
    assert method.startswith("i/") and form_exact_div(P.raw(), phi.coeffs()) is not None
    assert linear_factor(raw(Q, 0, 1, 2, 3)).proportional_to(LinearForm.y(Q))
    assert linear_factor(raw(Q, 1, 2, 3, 0)).proportional_to(LinearForm.x(Q))


def test_linear_factor_errors(Q):
    with pytest.raises(Irreducible):
        linear_factor(raw(Q, 1, 0, 0, 2))
    with pytest.raises(MultipleRoot):
        linear_factor(raw(Q, 0, 3, 0, 0))


def test_linear_factor_constructed_rational(Q):
    rng = random.Random(3)
    methods = set()
    done = 0
    while done < 100:
        t = Q(Fraction(rng.randint(-20, 20), rng.randint(1, 9)))
        quad = [Q(rng.randint(-9, 9)) for _ in range(3)]
        P = BinaryCubic.from_raw(Q, form_mul([Q(1), -t], quad))
        if not qn(P):
            continue
        phi, method = linear_factor_traced(P)
        methods.add(method.split("/")[0])
        assert form_exact_div(P.raw(), phi.coeffs()) is not None
        done += 1
    assert {"ii", "iii"} <= methods or "ii" in methods


def test_closed_forms_carry_the_load(Q, F7):
    # the scan fallback should not be needed on generic inputs
    rng = random.Random(4)
    for F in (Q, F7):
        for _ in range(200):
            P = random_cubic(F, rng, height=12)
            if P.is_zero() or not qn(P) or not is_reducible(P):
                continue
            _, method = linear_factor_traced(P)
            assert method != "scan"


# --- complete factorization -----------------------------------------------------

def test_full_factor_examples(Q, F7):
    fac = full_factor(raw(Q, 1, 0, 0, 1))
    assert fac.pattern() == ((1, 1), (2, 1))
    quad = next(f for f in fac.factors if f.degree == 2)
    A, B, C = quad.coeffs
    assert sqrt_in_field(B * B - 4 * A * C) is None and quad.irreducible
    assert {f.coeffs for f in fac.factors} == {(Q(1), Q(1)), (Q(1), Q(-1), Q(1))}
    fac = full_factor(raw(F7, 1, 0, 0, 1))
    assert fac.pattern() == ((1, 1), (1, 1), (1, 1))
    roots = {t for t in F7.elements() if t**3 + 1 == 0}
    assert {-f.coeffs[1] for f in fac.factors} == roots
    fac = full_factor(raw(Q, 1, 0, 0, 2))
    assert fac.pattern() == ((3, 1),)


def test_full_factor_round_trip_f5(F5):
    for P in nonzero_cubics(F5):
        fac = full_factor(P)
        assert fac.expand() == P
        assert sum(f.degree * f.multiplicity for f in fac.factors) == 3
        exp = expected_pattern(P)
        if exp is not None:
            assert fac.pattern() == exp


def test_full_factor_matches_sympy(Q):
    rng = random.Random(6)
    for _ in range(150):
        P = random_cubic(Q, rng, height=10)
        if P.is_zero():
            continue
        fac = full_factor(P)
        assert fac.expand() == P
        assert fac.pattern() == sympy_pattern(P)


def test_quadratic_cofactor_certificates(F7):
    for P in nonzero_cubics(F7)[::3]:
        for f in full_factor(P).factors:
            if f.degree == 2:
                A, B, C = f.coeffs
                assert sqrt_in_field(B * B - 4 * A * C) is None


def test_reducible_equal_discriminant_same_orbit(F5):
    groups = {}
    for P in nonzero_cubics(F5):
        M = qn(P)
        if M and is_reducible(P):
            groups.setdefault(M, []).append(P)
    for members in groups.values():
        first = members[0]
        assert all(same_sl2_orbit(first, P) for P in members)


def test_normed_sum_basis(Q, F7):
    rng = random.Random(7)
    for F in (Q, F7):
        done = 0
        while done < 40:
            P = random_cubic(F, rng, height=9)
            if P.is_zero() or classify(P).kind != GEN_SQUARE or not is_reducible(P):
                continue
            p1, p2, q = normed_sum_basis(P)
            assert (p1.cube() + p2.cube()) / q == P and big_omega(p1, p2) == q
            done += 1


def test_three_linear_factors(F7, Q):
    P = raw(F7, 1, 0, 0, 1)
    forms = three_linear_factors(P)
    prod = form_mul(form_mul(forms[0].coeffs(), forms[1].coeffs()), forms[2].coeffs())
    _, _, q = normed_sum_basis(P)
    assert BinaryCubic.from_raw(F7, prod) / q == P
    assert three_linear_factors(raw(Q, 1, 0, 0, 1)) is None


# --- depressed cubics ---------------------------------------------------------------

def test_cardano_examples(Q):
    assert cardano_root(Q(6), Q(-7)) == 1
    assert cardano_root(Q(-7), Q(6)) in (Q(1), Q(2), Q(-3))
    assert cardano_root(Q(3), Q(2)) is None


@pytest.mark.parametrize("p", [5, 7, 13])
def test_cardano_against_root_scan(p):
    F = parse_field(f"fp:{p}")
    for a in F.nonzero_elements():
        for b in F.nonzero_elements():
            roots = [t for t in F.elements() if t**3 + a * t + b == 0]
            got = cardano_root(a, b)
            assert (got is not None) == bool(roots)
            if got is not None:
                assert got in roots


def test_cardano_against_rational_roots(Q):
    for a in range(-15, 16):
        for b in range(-15, 16):
            if not a or not b:
                continue
            roots = rational_roots([1, 0, a, b])
            got = cardano_root(Q(a), Q(b))
            assert (got is not None) == bool(roots)
            if got is not None:
                assert got.raw in roots

import itertools
import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from cubix.errors import (
    DivisionByZero, FactorizationBoundExceeded, FieldMismatch, InvalidField,
    NotAnExtension, ParseError, ZeroElement,
)
from cubix.fields import (
    RationalField, cbrt_in_field, cube_class, hilbert_membership, hilbert_symbol,
    is_cube, is_pure_imaginary, norm_form_witness, parse_field,
    quad_conjugate, quad_norm, rational_roots, splitting_extension, sqrt_in_field,
    square_class,
)

rationals = st.fractions(max_denominator=60).filter(lambda x: abs(x.numerator) < 10**6)
nonzero_rationals = rationals.filter(lambda x: x != 0)


# --- arithmetic ------------------------------------------------------------

def test_rational_sum(Q):
    assert Q(Fraction(2, 3)) + Q(Fraction(1, 6)) == Q(Fraction(5, 6))


def test_prime_field_product(F7):
    assert F7(3) * F7(5) == F7(1)


def test_quadratic_norm_product():
    K = parse_field("quad:rat:2")
    assert K("1+1*w") * K("1-w") == K(-1)


def test_lowest_terms_and_residues(Q, F7):
    assert Q(Fraction(6, -4)).raw == Fraction(-3, 2)
    assert str(Q(Fraction(6, -4))) == "-3/2"
    assert F7(-1).raw == 6


def test_division_by_zero(Q, F7):
    with pytest.raises(DivisionByZero):
        Q(1) / Q(0)
    with pytest.raises(DivisionByZero):
        F7(0).inverse()


def test_field_mismatch(F5, F7):
    with pytest.raises(FieldMismatch):
        F5(1) + F7(1)


def test_invalid_fields():
    for desc in ("fp:4", "fp:3", "fp:2", "quad:rat:4", "quad:fp:7:2", "bogus"):
        with pytest.raises((InvalidField, ParseError)):
            parse_field(desc)


def test_element_grammar():
    K = parse_field("quad:rat:-3")
    assert K("-3/2+-1*w") == K("-3/2") - K.gen
    assert K("w") * K("w") == K(-3)
    assert K("5*w") == 5 * K.gen
    assert str(K("1-w")) == "1+-1*w"


def _axioms(F, xs):
    x, y, z = xs
    assert (x + y) + z == x + (y + z)
    assert (x * y) * z == x * (y * z)
    assert x * (y + z) == x * y + x * z
    assert x + (-x) == F.zero
    if x:
        assert x * x.inverse() == F.one


@pytest.mark.parametrize("desc", ["rat", "fp:7", "quad:rat:-3", "quad:fp:5:2"])
def test_field_axioms_sampled(desc):
    F = parse_field(desc)
    rng = random.Random(11)
    for _ in range(1000):
        if F.is_extension:
            xs = [F(rng.randint(-40, 40)) + F(rng.randint(-40, 40)) * F.gen for _ in range(3)]
        else:
            xs = [F(Fraction(rng.randint(-50, 50), rng.randint(1, 50))) if F.order is None
                  else F(rng.randrange(F.order)) for _ in range(3)]
        _axioms(F, xs)


# --- roots -----------------------------------------------------------------

def test_sqrt_examples(Q, F7):
    assert sqrt_in_field(Q(81)) == Q(9)
    assert sqrt_in_field(F7(2)) == F7(4)
    assert sqrt_in_field(Q(2)) is None
    assert sqrt_in_field(Q(0)) == Q(0)


def test_sqrt_in_f7_matches_enumeration(F7):
    for x in F7.elements():
        roots = [r for r in F7.elements() if r * r == x]
        got = sqrt_in_field(x)
        assert (got is None) == (not roots)
        if got is not None:
            assert got in roots


def test_cbrt_examples(Q, F5, F7):
    assert cbrt_in_field(Q(27)) == Q(3)
    assert cbrt_in_field(F5(2)) == F5(3)
    assert cbrt_in_field(F7(2)) is None
    assert [r for r in F7.elements() if r**3 == F7(2)] == []


@pytest.mark.parametrize("p", [5, 7, 11, 13, 31, 37, 97, 101])
def test_cbrt_criterion_over_fp(p):
    F = parse_field(f"fp:{p}")
    cubes = {r**3 for r in F.elements()}
    for x in F.elements():
        r = cbrt_in_field(x)
        assert (r is not None) == (x in cubes)
        if p % 3 == 2:
            assert r == x ** ((2 * p - 1) // 3)
        elif x:
            assert (r is not None) == (x ** ((p - 1) // 3) == F.one)


@given(rationals)
def test_sqrt_of_square(x):
    Q = RationalField()
    r = sqrt_in_field(Q(x) ** 2)
    assert r in (Q(x), -Q(x))


@given(rationals)
def test_cbrt_of_cube(x):
    Q = RationalField()
    r = cbrt_in_field(Q(x) ** 3)
    assert r**3 == Q(x) ** 3


def test_roots_in_rational_extension():
    K = parse_field("quad:rat:-3")
    rng = random.Random(3)
    for _ in range(200):
        z = K(rng.randint(-9, 9)) + K(Fraction(rng.randint(-9, 9), rng.randint(1, 4))) * K.gen
        assert sqrt_in_field(z * z) in (z, -z)
        assert cbrt_in_field(z**3) ** 3 == z**3
    assert sqrt_in_field(K.gen) is None


def test_roots_in_finite_extension():
    K = parse_field("quad:fp:7:3")
    elems = list(K.elements())
    assert len(elems) == 49
    squares = {z * z for z in elems}
    cubes = {z**3 for z in elems}
    for z in elems:
        s, c = sqrt_in_field(z), cbrt_in_field(z)
        assert (s is not None) == (z in squares)
        assert (c is not None) == (z in cubes)
        if s is not None:
            assert s * s == z
        if c is not None:
            assert c**3 == z


# --- classes ---------------------------------------------------------------

def test_class_examples(Q, F5, F7):
    assert cube_class(Q(8)) == cube_class(Q(1))
    assert cube_class(F7(2)) != cube_class(F7(4))
    assert square_class(F5(-1)) == square_class(F5(4))
    with pytest.raises(ZeroElement):
        cube_class(Q(0))


@pytest.mark.parametrize("p", [5, 7, 11, 13])
def test_cube_class_image_size(p):
    F = parse_field(f"fp:{p}")
    classes = {cube_class(x).key for x in F.nonzero_elements()}
    assert len(classes) == (3 if p % 3 == 1 else 1)


@pytest.mark.parametrize("p", [7, 13])
def test_cube_class_homomorphism(p):
    F = parse_field(f"fp:{p}")
    one = cube_class(F.one)
    for x, y in itertools.product(list(F.nonzero_elements()), repeat=2):
        assert cube_class(x * y) == cube_class(x) * cube_class(y)
        assert (cube_class(x) == one) == is_cube(x)
    for x in F.nonzero_elements():
        assert (cube_class(x) ** 3).is_identity()


@settings(max_examples=60)
@given(nonzero_rationals, nonzero_rationals)
def test_rational_cube_class_homomorphism(x, y):
    Q = RationalField()
    a, b = Q(x), Q(y)
    assert cube_class(a * b) == cube_class(a) * cube_class(b)
    assert (cube_class(a) == cube_class(b)) == (cbrt_in_field(a / b) is not None)
    assert (square_class(a) == square_class(b)) == (sqrt_in_field(a / b) is not None)


def test_factorization_bound():
    Q = RationalField(factor_bound=100)
    big = Q(1000003 * 1000033)
    with pytest.raises(FactorizationBoundExceeded):
        cube_class(big)


# --- quadratic extensions ----------------------------------------------------

def test_conjugate_norm_imaginary():
    Ki = parse_field("quad:rat:-1")
    assert quad_conjugate(Ki("3+2*w")) == Ki("3-2*w")
    assert quad_norm(parse_field("quad:rat:2")("1+w")) == RationalField()(-1)
    assert is_pure_imaginary(parse_field("quad:rat:-3")("5*w"))
    with pytest.raises(NotAnExtension):
        quad_norm(RationalField()(2))


def test_splitting_extension(Q, F7):
    K = splitting_extension(Q(12))
    assert K == parse_field("quad:rat:3")
    K7 = splitting_extension(F7(3))
    assert sqrt_in_field(K7.embed(F7(3))) is not None
    assert K7 == parse_field("quad:fp:7:3")


# --- Hilbert membership ----------------------------------------------------

def test_hilbert_examples(Q):
    assert hilbert_membership(Q(5), Q(-4))
    a, b = norm_form_witness(Q(5), Q(-4))
    assert a * a + b * b * Q(-4) == Q(5)
    assert hilbert_membership(Q(7), Q(-1))
    assert not hilbert_membership(Q(3), Q(0))


@pytest.mark.parametrize("p", [5, 7])
def test_hilbert_membership_finite_exhaustive(p):
    F = parse_field(f"fp:{p}")
    elems = list(F.elements())
    for delta in elems:
        reps = {a * a + b * b * delta for a in elems for b in elems}
        group = [x for x in F.nonzero_elements() if hilbert_membership(x, delta)]
        assert set(group) == {x for x in reps if x}
        for x in group:
            for y in group:
                assert hilbert_membership(x * y, delta)


def test_hilbert_membership_rational_against_search(Q):
    # brute force: look for a^2 + b^2 D = x with small numerators over a common denominator
    def found(x, D):
        for n in range(1, 13):
            for u in range(0, 40):
                for v in range(0, 40):
                    if Fraction(u * u + v * v * D, n * n) == x:
                        return True
        return False

    for D in (-1, -2, -3, -5, 2, 3, 5, -4, 6):
        for x in (1, 2, 3, 5, 6, 7, 10, 11, 13, -1, -3, Fraction(1, 2)):
            member = hilbert_membership(Q(x), Q(D))
            if found(x, D):
                assert member
            if member:
                w = norm_form_witness(Q(x), Q(D))
                assert w[0] ** 2 + w[1] ** 2 * Q(D) == Q(x)


def test_hilbert_symbol_known_values():
    assert hilbert_symbol(-1, -1, 2) == -1
    assert hilbert_symbol(-1, -1, 0) == -1
    assert hilbert_symbol(2, 5, 5) == -1
    assert hilbert_symbol(1, 7, 7) == 1


def test_rational_roots():
    assert sorted(rational_roots([1, 0, -7, 6])) == [-3, 1, 2]
    assert rational_roots([1, 0, 0, 2]) == []
    assert rational_roots([2, -1]) == [Fraction(1, 2)]


def test_norm_form_witness_rational_stress(Q):
    rng = random.Random(41)

    def rand_q(h):
        return Q(Fraction(rng.randint(-h, h), rng.randint(1, 60)))

    found = 0
    for i in range(400):
        delta = rand_q(400)
        if i % 2:
            x = rand_q(400)
        else:
            x = rand_q(30) ** 2 + rand_q(30) ** 2 * delta
        if not x:
            continue
        w = norm_form_witness(x, delta)
        assert (w is not None) == hilbert_membership(x, delta)
        if w is not None:
            assert w[0] ** 2 + w[1] ** 2 * delta == x
            found += 1
    assert found >= 200

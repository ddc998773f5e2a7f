"""Factorization of binary cubics by symplectic criteria.

Multiple roots come from the moment map (its kernel is the double root),
reducibility of a generic cubic is a single cube test, and a linear factor is
given by the Cardano-Tartaglia closed forms.  Every closed form is validated by
exact division before it is returned.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterator, Optional

from .cubics import (
    BinaryCubic,
    LinearForm,
    big_omega,
    form_exact_div,
    form_mul,
    form_str,
    moment,
    omega,
    qn,
)
from .errors import GenericInput, Irreducible, MultipleRoot, ZeroCubic
from .fields import (
    Field,
    FieldElement,
    QuadraticExtension,
    RationalField,
    cbrt_in_field,
    in_base_field,
    rational_roots,
    splitting_extension,
    sqrt_in_field,
    to_base,
)
from .orbits import (
    DOUBLE,
    GEN_SQUARE,
    TRIPLE,
    classify,
    double_root_form,
    generic_setting,
    scaled_cube_form,
    sum_of_cubes,
)


@dataclass(frozen=True)
class Factor:
    coeffs: tuple  # FieldElements from x^n down to y^n
    multiplicity: int
    irreducible: bool = True

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def to_json(self) -> dict:
        return {
            "coeffs": [str(c) for c in self.coeffs],
            "degree": self.degree,
            "multiplicity": self.multiplicity,
            "irreducible": self.irreducible,
        }

    def __str__(self):
        return form_str(self.coeffs)


@dataclass(frozen=True)
class Factorization:
    unit: FieldElement
    factors: tuple = field(default_factory=tuple)

    def expand(self) -> BinaryCubic:
        prod = [self.unit]
        for f in self.factors:
            for _ in range(f.multiplicity):
                prod = form_mul(prod, list(f.coeffs))
        return BinaryCubic.from_raw(self.unit.field, prod)

    def pattern(self) -> tuple:
        """Sorted (degree, multiplicity) pairs, e.g. ((1, 1), (2, 1))."""
        return tuple(sorted((f.degree, f.multiplicity) for f in self.factors))

    def to_json(self) -> dict:
        return {"unit": str(self.unit), "factors": [f.to_json() for f in self.factors]}

    def __str__(self):
        parts = [] if self.unit == 1 else [str(self.unit)]
        for f in self.factors:
            s = f"({f})"
            parts.append(s if f.multiplicity == 1 else f"{s}^{f.multiplicity}")
        return "*".join(parts)


def _monic(coeffs) -> tuple[FieldElement, tuple]:
    lead = next(c for c in coeffs if c)
    return lead, tuple(c / lead for c in coeffs)


def _build(P: BinaryCubic, pieces) -> Factorization:
    """Normalize factors to leading coefficient 1, then fold the unit into
    the first simple factor so that 3x^2y reads x^2 * (3y)."""
    unit = P.field.one
    out = []
    for coeffs, mult, irred in pieces:
        lead, monic = _monic(coeffs)
        unit = unit * lead**mult
        out.append(Factor(monic, mult, irred))
    out.sort(key=lambda f: (f.degree, -f.multiplicity, tuple(c.sort_key() for c in f.coeffs)))
    for i, f in enumerate(out):
        if f.multiplicity == 1:
            out[i] = Factor(tuple(unit * c for c in f.coeffs), 1, f.irreducible)
            unit = P.field.one
            break
    fac = Factorization(unit, tuple(out))
    if fac.expand() != P:
        raise AssertionError(f"factorization {fac} does not reproduce {P}")
    return fac


# --------------------------------------------------------------------------
# multiple roots


def factor_multiple_root(P: BinaryCubic) -> Factorization:
    s = classify(P)
    if s.kind == "Zero":
        raise ZeroCubic("cannot factor the zero cubic")
    if s.kind not in (TRIPLE, DOUBLE):
        raise GenericInput(f"{P} has Q_n = {s.qn} != 0")
    if s.kind == TRIPLE:
        lam, phi = scaled_cube_form(P)
        if P.b and P.c:
            # closed form (1/bc)(bx + cy)^3
            alt = LinearForm(P.b, P.c)
            assert alt.proportional_to(phi) and alt.cube() / (P.b * P.c) == P
        return _build_triple(P, lam, phi)
    phi, xi = double_root_form(P)
    if not P.c and not P.d:
        # x^2 (ax + 3by)
        assert phi.proportional_to(LinearForm.x(P.field))
    if not P.a and not P.b:
        # y^2 (3cx + dy)
        assert phi.proportional_to(LinearForm.y(P.field))
        assert xi.proportional_to(LinearForm(3 * P.c, P.d))
    return _build(P, [(phi.coeffs(), 2, True), (xi.coeffs(), 1, True)])


def _build_triple(P: BinaryCubic, lam: FieldElement, phi: LinearForm) -> Factorization:
    lead, monic = _monic(phi.coeffs())
    fac = Factorization(lam * lead**3, (Factor(monic, 3, True),))
    assert fac.expand() == P
    return fac


# --------------------------------------------------------------------------
# reducibility and linear factors


def is_reducible(P: BinaryCubic) -> bool:
    """P has a linear factor over its field.

    Generic cubics are reducible iff q * lambda1 is a cube, computed over k^
    when Q_n(P) is not a square in k.
    """
    if P.is_zero():
        raise ZeroCubic("reducibility of the zero cubic")
    if not qn(P):
        return True
    _, PK, q = generic_setting(P)
    sc = sum_of_cubes(PK, q)
    return cbrt_in_field(q * sc.lambda1) is not None


def _divides(phi: LinearForm, P: BinaryCubic) -> bool:
    return not phi.is_zero() and form_exact_div(P.raw(), phi.coeffs()) is not None


def _cube_roots_of_unity(F: Field) -> list[FieldElement]:
    s = sqrt_in_field(F(-3))
    if s is None:
        return [F.one]
    j = (s - 1) / 2
    return [F.one, j, j * j]


def _cube_roots(x: FieldElement) -> list[FieldElement]:
    r = cbrt_in_field(x)
    if r is None or not r:
        return []
    return [r * z for z in _cube_roots_of_unity(x.field)]


def cardano_candidates(P: BinaryCubic) -> Iterator[tuple[str, LinearForm]]:
    """Closed-form linear factor candidates over the field where Q_n(P) is a square.

    Both sign choices of q and both normalizations of r (with and without the
    halving) are produced; callers validate by division.
    """
    _, PK, q0 = generic_setting(P)
    a, b, c, d = PK.abcd()
    M = moment(PK)
    al, be, ga = M.alpha, M.beta, M.gamma
    for q in (q0, -q0):
        for half in (True, False):
            k = 2 if half else 1
            tag = "proof" if half else "statement"
            if not be and not ga:
                for r in _cube_roots(q * a):
                    yield f"i/{tag}", LinearForm(r, q / r)
                continue
            if ga:
                for r in _cube_roots(((al + q) * a + ga * b) / k):
                    s = -ga / (k * r)
                    yield f"ii/{tag}", LinearForm(PK.field.one, (r - s + b) / a)
            if be:
                for r in _cube_roots((be * c - (al - q) * d) / k):
                    s = be / (k * r)
                    yield f"iii/{tag}", LinearForm((s - r + c) / d, PK.field.one)


def _descend(phi: LinearForm, F: Field) -> Optional[LinearForm]:
    """phi rescaled into the base field F, when it is proportional to an F-form."""
    if phi.field == F:
        return phi
    n = phi.normalized()
    if in_base_field(n.e) and in_base_field(n.f):
        return LinearForm(to_base(n.e), to_base(n.f))
    return None


def _root_scan(P: BinaryCubic) -> Optional[LinearForm]:
    F = P.field
    if F.order is not None:
        if not P.a:
            return LinearForm.y(F)
        for t in F.elements():
            if not P(t, F.one):
                return LinearForm(F.one, -t)
        return None
    if isinstance(F, RationalField):
        if not P.a:
            return LinearForm.y(F)
        roots = rational_roots([t.raw for t in P.raw()])
        return LinearForm(F.one, -F(roots[0])) if roots else None
    return None


def linear_factor_traced(P: BinaryCubic) -> tuple[LinearForm, str]:
    """(phi, method) where phi divides P and method names the formula used."""
    if P.is_zero():
        raise ZeroCubic("cannot factor the zero cubic")
    if not qn(P):
        raise MultipleRoot(f"{P} has a multiple root; use factor_multiple_root")
    if not is_reducible(P):
        raise Irreducible(f"{P} has no linear factor over {P.field}")
    F = P.field
    if not P.a:
        return LinearForm.y(F), "a=0"
    if not P.d:
        return LinearForm.x(F), "d=0"
    for method, cand in cardano_candidates(P):
        phi = _descend(cand, F)
        if phi is not None and _divides(phi, P):
            return phi, method
    phi = _root_scan(P)
    if phi is not None and _divides(phi, P):
        return phi, "scan"
    raise AssertionError(f"no linear factor found for reducible {P}")


def linear_factor(P: BinaryCubic) -> LinearForm:
    return linear_factor_traced(P)[0]


# --------------------------------------------------------------------------
# normed sums and the three-factor form


def normed_sum_basis(P: BinaryCubic) -> tuple[LinearForm, LinearForm, FieldElement]:
    """(phi1', phi2', q) with P = (phi1'^3 + phi2'^3)/q and Omega(phi1', phi2') = q.

    Requires a reducible cubic with Q_n(P) a nonzero square.
    """
    s, PK, q = generic_setting(P)
    if s.kind != GEN_SQUARE or not is_reducible(P):
        raise Irreducible(f"{P} is not a reducible cubic with square Q_n")
    sc = sum_of_cubes(PK, q)
    pairs = [(sc.lambda1, sc.phi1), (sc.lambda2, sc.phi2)]
    if omega(sc.T1, sc.T2) != q:
        pairs.reverse()
    (l1, f1), (l2, f2) = pairs
    r1, r2 = cbrt_in_field(q * l1), cbrt_in_field(q * l2)
    p1, p2 = f1 * r1, f2 * r2
    z = big_omega(p1, p2) / q
    assert z**3 == 1
    p2 = p2 / z
    assert (p1.cube() + p2.cube()) / q == PK and big_omega(p1, p2) == q
    return p1, p2, q


def three_linear_factors(P: BinaryCubic) -> Optional[list[LinearForm]]:
    """phi1' + phi2', phi1' + j phi2', phi1' + j^2 phi2' when -3 is a square; else None."""
    units = _cube_roots_of_unity(P.field)
    if len(units) == 1:
        return None
    p1, p2, _ = normed_sum_basis(P)
    return [p1 + p2 * u for u in units]


# --------------------------------------------------------------------------
# complete factorization


def _split_quadratic(A, B, C):
    """Linear factors of Ax^2 + Bxy + Cy^2, or None when its discriminant is not a square."""
    disc = B * B - 4 * A * C
    s = sqrt_in_field(disc)
    if s is None:
        return None
    F = A.field
    if not A:
        return [LinearForm.y(F), LinearForm(B, C)]
    return [LinearForm(F.one, (B - s) / (2 * A)), LinearForm(A, (B + s) / 2)]


def full_factor(P: BinaryCubic) -> Factorization:
    """Factorization of P into irreducibles over its field."""
    if P.is_zero():
        raise ZeroCubic("cannot factor the zero cubic")
    if not qn(P):
        return factor_multiple_root(P)
    if not is_reducible(P):
        return _build(P, [(P.raw(), 1, True)])
    phi = linear_factor(P)
    quad = form_exact_div(P.raw(), phi.coeffs())
    A, B, C = quad
    split = _split_quadratic(A, B, C)
    if split is None:
        # irreducible: B^2 - 4AC is a non-square
        return _build(P, [(phi.coeffs(), 1, True), (quad, 1, True)])
    l1, l2 = split
    fac = _build(P, [(phi.coeffs(), 1, True), (l1.coeffs(), 1, True), (l2.coeffs(), 1, True)])
    if classify(P).kind == GEN_SQUARE:
        three = three_linear_factors(P)
        if three is not None:
            mine = {_monic(f.coeffs)[1] for f in fac.factors}
            theirs = {_monic(t.coeffs())[1] for t in three}
            assert mine == theirs, (mine, theirs)
    return fac


# --------------------------------------------------------------------------
# the depressed cubic t^3 + p t + q


def cardano_root(p: FieldElement, q: FieldElement) -> Optional[FieldElement]:
    """A root t = s - r of t^3 + p t + q in k, with r^3 = q/2 + sqrt(q^2/4 + p^3/27) and s = p/(3r).

    When the square root is missing from k the same formula is evaluated in the
    quadratic extension it generates; a root is returned only if it lies in k.
    Returns None when t^3 + p t + q has no root in k.
    """
    F = p.field
    q = F(q)
    if not q:
        return F.zero
    if not p:
        return cbrt_in_field(-q)
    disc = q * q / 4 + p * p * p / 27
    root = sqrt_in_field(disc)
    if root is None:
        if isinstance(F, QuadraticExtension):
            return None
        K = splitting_extension(disc)
        # disc = t^2 * d with d the adjoined square
        t = sqrt_in_field(disc / K.d)
        lift = K.embed
        pK, qK, root = lift(p), lift(q), lift(t) * K.gen
    else:
        K, pK, qK = F, p, q
    for sign in (1, -1):
        R = qK / 2 + root * sign
        for r in _cube_roots(R):
            s = pK / (3 * r)
            t = s - r
            if in_base_field(t):
                t = to_base(t) if K != F else t
                if t * t * t + p * t + q == 0:
                    return t
    return None

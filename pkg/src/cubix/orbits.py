"""Strata, orbit invariants and the orbit calculus for Sl(2,k) and Gl(2,k).

Nonzero cubics fall into four Sl(2,k)-stable strata:

* ``TripleRoot``: moment(P) = 0.
* ``DoubleRoot``: moment(P) nonzero and nilpotent.
* ``GenericSquare``: Q_n(P) a nonzero square q^2 in k.
* ``GenericNonSquare``: Q_n(P) a non-square, split by a quadratic extension k^.

Generic cubics are sums of two coprime scaled cubes T1 + T2, and the pair
[omega(T1, T2), I_T(T1)/I_T(T2)], taken modulo (q, c) ~ (-q, 1/c), is a
complete Sl(2,k) invariant.  Over a non-square discriminant the same pair is
computed over k^.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Optional

from .cubics import (
    BinaryCubic,
    LinearForm,
    Matrix2,
    TracelessMatrix,
    act_algebra_form,
    act_group,
    big_omega,
    form_exact_div,
    form_mul,
    moment,
    omega,
    psi,
    qn,
)
from .errors import (
    DiscriminantMismatch,
    FieldMismatch,
    InvalidField,
    MixedStrata,
    NotDoubleRoot,
    NotGeneric,
    NotGenericNonSquare,
    NotGenericSquare,
    NotTripleRoot,
    QMismatch,
    ZeroCubic,
    ZeroMatrix,
)
from .fields import (
    CubeClass,
    Field,
    FieldElement,
    PrimeField,
    QuadraticExtension,
    RationalField,
    cbrt_in_field,
    cube_class,
    hilbert_membership,
    norm_form_witness,
    quad_conjugate,
    quad_norm,
    splitting_extension,
    sqrt_in_field,
    to_base,
)

ZERO = "Zero"
TRIPLE = "TripleRoot"
DOUBLE = "DoubleRoot"
GEN_SQUARE = "GenericSquare"
GEN_NONSQUARE = "GenericNonSquare"


# --------------------------------------------------------------------------
# square roots with a deterministic choice


def canonical_sqrt(x: FieldElement) -> Optional[FieldElement]:
    """The preferred square root: positive over Q, the smaller residue over F_p."""
    r = sqrt_in_field(x)
    if r is None or not r:
        return r
    F = x.field
    if isinstance(F, RationalField):
        return r if r.raw > 0 else -r
    if isinstance(F, PrimeField):
        return r if r.raw <= F.p - r.raw else -r
    return min(r, -r, key=lambda t: t.sort_key())


def is_canonical_root(q: FieldElement) -> bool:
    return canonical_sqrt(q * q) == q


# --------------------------------------------------------------------------
# strata


@dataclass(frozen=True)
class Stratum:
    kind: str
    qn: Optional[FieldElement] = None
    q: Optional[FieldElement] = None
    extension: Optional[QuadraticExtension] = None

    @property
    def generic(self) -> bool:
        return self.kind in (GEN_SQUARE, GEN_NONSQUARE)

    def __str__(self):
        return self.kind


def classify(P: BinaryCubic) -> Stratum:
    if P.is_zero():
        return Stratum(ZERO, P.field.zero)
    M = moment(P)
    Q = qn(P)
    if M.is_zero():
        return Stratum(TRIPLE, Q)
    if not Q:
        return Stratum(DOUBLE, Q)
    q = canonical_sqrt(Q)
    if q is not None:
        return Stratum(GEN_SQUARE, Q, q)
    K, qhat = split_discriminant(Q)
    return Stratum(GEN_NONSQUARE, Q, qhat, K)


def split_discriminant(Q: FieldElement) -> tuple[QuadraticExtension, FieldElement]:
    """The canonical k^ with Q = qhat^2, qhat = t*w pure imaginary, t a canonical root."""
    try:
        K = splitting_extension(Q)
    except InvalidField as exc:
        raise InvalidField(f"non-square discriminant over {Q.field} is not supported") from exc
    t = canonical_sqrt(Q / K.d)
    assert t is not None
    return K, K.embed(t) * K.gen


def generic_setting(P: BinaryCubic) -> tuple[Stratum, BinaryCubic, FieldElement]:
    """Stratum plus P and the canonical q, both over the field where Q_n(P) is a square."""
    s = classify(P)
    if not s.generic:
        raise NotGeneric(f"{P} is in the {s.kind} stratum")
    if s.kind == GEN_SQUARE:
        return s, P, s.q
    return s, P.lift(s.extension), s.q


def to_base_cubic(P: BinaryCubic, F: Field) -> BinaryCubic:
    if P.field == F:
        return P
    return BinaryCubic(*(to_base(t) for t in P.abcd()))


# --------------------------------------------------------------------------
# triple roots


def scaled_cube_form(T: BinaryCubic) -> tuple[FieldElement, LinearForm]:
    """(lam, phi) with T = lam * phi^3, phi = x + (b/a) y or phi = y."""
    F = T.field
    if T.a:
        lam, phi = T.a, LinearForm(F.one, T.b / T.a)
    else:
        lam, phi = T.d, LinearForm.y(F)
    if not lam or lam * phi.cube() != T:
        raise NotTripleRoot(f"{T} is not a scaled cube")
    return lam, phi


def triple_root_form(P: BinaryCubic) -> tuple[FieldElement, LinearForm]:
    s = classify(P)
    if s.kind != TRIPLE:
        raise NotTripleRoot(f"{P} is in the {s.kind} stratum")
    return scaled_cube_form(P)


def i_t(P: BinaryCubic) -> CubeClass:
    """Cube class of lam where P = lam * phi^3."""
    lam, _ = triple_root_form(P)
    return cube_class(lam)


# --------------------------------------------------------------------------
# double roots


def moment_kernel(M: Matrix2) -> LinearForm:
    """A nonzero linear form killed by the nilpotent M (Lie algebra action)."""
    al, be, ga = M.m11, M.m12, M.m21
    # M . (ex + fy) = (-al e - ga f) x + (-be e + al f) y
    if al or ga:
        phi = LinearForm(-ga, al)
    else:
        phi = LinearForm(al, be)
    if phi.is_zero() or not act_algebra_form(M, phi).is_zero():
        raise NotDoubleRoot(f"{M} has no one-dimensional kernel")
    return phi


def double_root_form(P: BinaryCubic) -> tuple[LinearForm, LinearForm]:
    """The unique (phi, xi) with P = phi^2 xi and Omega(phi, xi) = 1."""
    s = classify(P)
    if s.kind != DOUBLE:
        raise NotDoubleRoot(f"{P} is in the {s.kind} stratum")
    phi1 = moment_kernel(moment(P))
    quot = form_exact_div(P.raw(), form_mul(phi1.coeffs(), phi1.coeffs()))
    if quot is None:
        raise AssertionError(f"kernel form {phi1} is not a double root of {P}")
    xi1 = LinearForm(*quot)
    lam = big_omega(phi1, xi1)
    phi, xi = phi1 * lam, xi1 / (lam * lam)
    assert big_omega(phi, xi) == 1
    return phi, xi


def linear_product(phi: LinearForm, psi_: LinearForm, xi: LinearForm) -> BinaryCubic:
    F = phi.field
    return BinaryCubic.from_raw(F, form_mul(form_mul(phi.coeffs(), psi_.coeffs()), xi.coeffs()))


@dataclass(frozen=True)
class DoubleFibre:
    """moment^-1(moment(P)) = {P + a Psi(P)} union {-P + b Psi(P)} for P with a double root."""

    P: BinaryCubic
    direction: BinaryCubic
    phi: LinearForm

    @property
    def base_points(self) -> tuple[BinaryCubic, BinaryCubic]:
        return self.P, -self.P

    def contains(self, Q: BinaryCubic) -> bool:
        for base in self.base_points:
            diff = Q - base
            if _proportional(diff, self.direction):
                return True
        return False

    def point(self, sign: int, t) -> BinaryCubic:
        base = self.P if sign > 0 else -self.P
        return base + self.direction * t


def _proportional(A: BinaryCubic, B: BinaryCubic) -> bool:
    """A lies on the line k*B (B nonzero)."""
    a, b = A.raw(), B.raw()
    i = next(i for i, t in enumerate(b) if t)
    s = a[i] / b[i]
    return all(x == s * y for x, y in zip(a, b))


def mu_fibre_double(P: BinaryCubic) -> DoubleFibre:
    phi, _ = double_root_form(P)
    direction = psi(P)
    # the direction is a multiple of the cube of the double root
    assert _proportional(direction, phi.cube())
    return DoubleFibre(P, direction, phi)


# --------------------------------------------------------------------------
# sums of cubes


@dataclass(frozen=True)
class SumOfCubes:
    T1: BinaryCubic
    T2: BinaryCubic
    lambda1: FieldElement
    phi1: LinearForm
    lambda2: FieldElement
    phi2: LinearForm
    q: FieldElement

    def pair(self):
        return (self.T1, self.T2)


def sum_of_cubes(P: BinaryCubic, q) -> SumOfCubes:
    """T1 = (P + Psi(P)/(3q))/2 and T2 = (P - Psi(P)/(3q))/2."""
    if isinstance(q, FieldElement) and q.field != P.field:
        if not isinstance(q.field, QuadraticExtension) or q.field.base != P.field:
            raise FieldMismatch(f"q lives in {q.field}, P in {P.field}")
        P = P.lift(q.field)
    q = P.field(q)
    if not q:
        raise NotGeneric("q must be nonzero")
    if q * q != qn(P):
        raise QMismatch(f"q^2 = {q * q} but Q_n(P) = {qn(P)}")
    shift = psi(P) / (3 * q)
    T1 = (P + shift) / 2
    T2 = (P - shift) / 2
    l1, p1 = scaled_cube_form(T1)
    l2, p2 = scaled_cube_form(T2)
    return SumOfCubes(T1, T2, l1, p1, l2, p2, q)


def mu_eigenbasis(P: BinaryCubic, q: Optional[FieldElement] = None):
    """(lambda1, phi1, lambda2, phi2) with P = lambda1 phi1^3 + lambda2 phi2^3.

    Eigenvectors satisfy moment(P).phi1 = -q phi1 and moment(P).phi2 = q phi2.
    When beta = gamma = 0 the roles of x and y follow the sign of q relative to ad.
    """
    if q is None:
        _, P, q = generic_setting(P)
    elif q.field != P.field:
        P = P.lift(q.field)
    if q * q != qn(P) or not q:
        raise QMismatch(f"q^2 = {q * q} but Q_n(P) = {qn(P)}")
    F = P.field
    a, b, c, d = P.abcd()
    M = moment(P)
    al, be, ga = M.alpha, M.beta, M.gamma
    if not be and not ga:
        x, y = LinearForm.x(F), LinearForm.y(F)
        out = (a, x, d, y) if q == al else (d, y, a, x)
        omega_12 = big_omega(out[1], out[3])
    elif ga:
        l1 = (al + q) * a / (2 * q) + ga * b / (2 * q)
        f1 = LinearForm(F.one, -(al - q) / ga)
        l2 = -(al - q) * a / (2 * q) - ga * b / (2 * q)
        f2 = LinearForm(F.one, -(al + q) / ga)
        out = (l1, f1, l2, f2)
        omega_12 = -2 * q / ga
    else:
        l1 = be * c / (2 * q) - (al - q) * d / (2 * q)
        f1 = LinearForm((al + q) / be, F.one)
        l2 = -be * c / (2 * q) + (al + q) * d / (2 * q)
        f2 = LinearForm((al - q) / be, F.one)
        out = (l1, f1, l2, f2)
        omega_12 = 2 * q / be
    l1, f1, l2, f2 = out
    assert big_omega(f1, f2) == omega_12
    assert act_algebra_form(M, f1) == f1 * (-q) and act_algebra_form(M, f2) == f2 * q
    assert l1 * f1.cube() + l2 * f2.cube() == P
    return out


# --------------------------------------------------------------------------
# invariants


class OrbitInvariant:
    """Tagged orbit invariant with the twisted equality of the generic strata.

    ``group`` is "sl2" or "gl2".  For the Gl variants of the generic strata the
    q component is compared by cube class (of q itself over k, of q/w over k^)
    and c is compared up to inversion.
    """

    __slots__ = ("kind", "group", "q", "c", "c_elem", "extension")

    def __init__(self, kind, group="sl2", q=None, c=None, c_elem=None, extension=None):
        self.kind = kind
        self.group = group
        self.q = q
        self.c = c
        self.c_elem = c_elem
        self.extension = extension

    def _q_base(self):
        """q over k, or t with q = t*w over k^."""
        if self.kind == GEN_NONSQUARE:
            return to_base(self.q / self.q.field.gen)
        return self.q

    def __eq__(self, other):
        if not isinstance(other, OrbitInvariant):
            return NotImplemented
        if (self.kind, self.group) != (other.kind, other.group):
            return False
        if self.kind == DOUBLE:
            return True
        if self.kind == TRIPLE:
            return self.c == other.c
        if self.q.field != other.q.field:
            return False
        if self.group == "sl2":
            if self.q == other.q:
                return self.c == other.c
            if self.q == -other.q:
                return self.c == other.c.inverse()
            return False
        if cube_class(self._q_base()) != cube_class(other._q_base()):
            return False
        return self.c == other.c or self.c == other.c.inverse()

    def key(self):
        """Hashable canonical form (finite fields only; None otherwise)."""
        if self.kind == DOUBLE:
            return (self.kind, self.group)
        if self.kind == TRIPLE:
            return (self.kind, self.group, self.c.key)
        if self.c.key is None:
            return None
        ci = self.c.inverse().key
        if self.group == "sl2":
            pairs = frozenset({(self.q.raw, self.c.key), ((-self.q).raw, ci)})
            return (self.kind, self.group, pairs)
        qk = cube_class(self._q_base()).key
        return (self.kind, self.group, qk, frozenset({self.c.key, ci}))

    def __hash__(self):
        k = self.key()
        return hash(k if k is not None else (self.kind, self.group))

    def to_json(self) -> dict:
        return {
            "kind": self.kind,
            "group": self.group,
            "q": None if self.q is None else str(self.q),
            "cube_class": None if self.c is None else str(self.c.rep),
        }

    def __repr__(self):
        return f"OrbitInvariant({self.kind}, {self.group}, q={self.q}, c={self.c})"


def _generic_invariant(P: BinaryCubic, kind: str) -> OrbitInvariant:
    s, PK, q = generic_setting(P)
    if s.kind != kind:
        err = NotGenericSquare if kind == GEN_SQUARE else NotGenericNonSquare
        raise err(f"{P} is in the {s.kind} stratum")
    sc = sum_of_cubes(PK, q)
    w = omega(sc.T1, sc.T2)
    ratio = sc.lambda1 / sc.lambda2
    if w == q:
        c_elem = ratio
    else:
        assert w == -q
        c_elem = 1 / ratio
    return OrbitInvariant(kind, "sl2", q, cube_class(c_elem), c_elem, s.extension)


def i_o1(P: BinaryCubic) -> OrbitInvariant:
    """[omega(T1, T2), I_T(T1) I_T(T2)^-1] normalized to the canonical root q."""
    return _generic_invariant(P, GEN_SQUARE)


def i_o1_hat(P: BinaryCubic) -> OrbitInvariant:
    """The same pair computed over k^; q is pure imaginary and c is unitary."""
    return _generic_invariant(P, GEN_NONSQUARE)


@lru_cache(maxsize=1 << 16)
def invariant(P: BinaryCubic) -> OrbitInvariant:
    """The complete Sl(2,k) invariant of a nonzero cubic."""
    s = classify(P)
    if s.kind == ZERO:
        raise ZeroCubic("the zero cubic has no orbit invariant")
    if s.kind == TRIPLE:
        return OrbitInvariant(TRIPLE, c=i_t(P))
    if s.kind == DOUBLE:
        return OrbitInvariant(DOUBLE)
    return _generic_invariant(P, s.kind)


@lru_cache(maxsize=1 << 16)
def gl_invariant(P: BinaryCubic) -> OrbitInvariant:
    inv = invariant(P)
    return OrbitInvariant(inv.kind, "gl2", inv.q, inv.c, inv.c_elem, inv.extension)


def scale_invariant(inv: OrbitInvariant, lam: FieldElement) -> OrbitInvariant:
    """The k*-action lam . [q, c] = [lam q, c]."""
    return OrbitInvariant(inv.kind, inv.group, inv.q * lam, inv.c, inv.c_elem, inv.extension)


def _check_pair(P: BinaryCubic, P2: BinaryCubic):
    if P.field != P2.field:
        raise FieldMismatch(f"{P.field} vs {P2.field}")
    if P.is_zero() or P2.is_zero():
        raise ZeroCubic("orbit comparison needs nonzero cubics")


def same_sl2_orbit(P: BinaryCubic, P2: BinaryCubic) -> bool:
    _check_pair(P, P2)
    return invariant(P) == invariant(P2)


def same_gl2_orbit(P: BinaryCubic, P2: BinaryCubic) -> bool:
    _check_pair(P, P2)
    return gl_invariant(P) == gl_invariant(P2)


# --------------------------------------------------------------------------
# the group of orbits with fixed discriminant


def square_representative(q: FieldElement, alpha: FieldElement) -> BinaryCubic:
    """(1/(q alpha)) x^3 + q^2 alpha y^3, whose invariant is [q, [alpha]]."""
    F = q.field
    return BinaryCubic(1 / (q * alpha), F.zero, F.zero, q * q * alpha)


def unitary_representative(q: FieldElement, mu: FieldElement) -> BinaryCubic:
    """A cubic over k with invariant [q, [mu]] for pure imaginary q and mu * conj(mu) = 1.

    Built as (lam/q) a^3 - (conj(lam)/q) conj(a)^3 with lam/conj(lam) = mu and
    a = -(q/(2r)) x + y, where r = N(lam) makes omega(T1, T2) = q.
    """
    K = q.field
    lam0 = mu + 1 if mu != -1 else K.gen
    r = quad_norm(lam0)
    lam = lam0 * K.embed(r)
    alpha = LinearForm(-q / (2 * K.embed(r)), K.one)
    alpha_bar = LinearForm(quad_conjugate(alpha.e), quad_conjugate(alpha.f))
    P = alpha.cube() * (lam / q) - alpha_bar.cube() * (quad_conjugate(lam) / q)
    return to_base_cubic(P, K.base)


def orbit_representative(inv: OrbitInvariant) -> BinaryCubic:
    if inv.kind == GEN_SQUARE:
        return square_representative(inv.q, inv.c_elem)
    if inv.kind == GEN_NONSQUARE:
        return unitary_representative(inv.q, inv.c_elem)
    raise NotGeneric(f"no composition law on the {inv.kind} stratum")


def orbit_compose(M: FieldElement, P1: BinaryCubic, P2: BinaryCubic) -> BinaryCubic:
    """A representative of the product of the orbits of P1 and P2 in Q_n^-1(M)."""
    if P1.field != P2.field:
        raise FieldMismatch(f"{P1.field} vs {P2.field}")
    M = P1.field(M)
    if not M:
        raise DiscriminantMismatch("the discriminant M must be nonzero")
    if qn(P1) != M or qn(P2) != M:
        raise DiscriminantMismatch(f"Q_n values {qn(P1)}, {qn(P2)} differ from {M}")
    inv1, inv2 = invariant(P1), invariant(P2)
    if inv1.kind != inv2.kind:
        raise MixedStrata(f"{inv1.kind} vs {inv2.kind}")
    # both invariants use the same canonical q, so classes multiply directly
    assert inv1.q == inv2.q
    prod = inv1.c_elem * inv2.c_elem
    target = OrbitInvariant(inv1.kind, "sl2", inv1.q, cube_class(prod), prod, inv1.extension)
    rep = orbit_representative(target)
    assert invariant(rep) == target and qn(rep) == M
    return rep


def identity_representative(M: FieldElement) -> BinaryCubic:
    """A reducible cubic with Q_n = M; its orbit is the identity of the orbit group."""
    q = canonical_sqrt(M)
    if q is not None:
        return square_representative(q, M.field.one)
    K, qhat = split_discriminant(M)
    return unitary_representative(qhat, K.one)


# --------------------------------------------------------------------------
# adjoint orbits and the image of the moment map


class NuClass:
    """The class of a nonzero element in k* / k*_delta, k*_delta = {a^2 + b^2 delta}."""

    __slots__ = ("value", "delta")

    def __init__(self, value: FieldElement, delta: FieldElement):
        if not value:
            raise ZeroMatrix("class of zero")
        self.value = value
        self.delta = value.field(delta)

    def __eq__(self, other):
        if not isinstance(other, NuClass):
            return NotImplemented
        if self.delta != other.delta:
            return False
        return hilbert_membership(self.value / other.value, self.delta)

    def __hash__(self):
        return hash(str(self.delta))

    def __repr__(self):
        return f"NuClass({self.value}, delta={self.delta})"


_CANDIDATES = ((1, 0), (0, 1), (1, 1))


def nu_delta(X: Matrix2, v: Optional[LinearForm] = None) -> NuClass:
    """[Omega(v, X.v)] for the first non-eigenvector v among x, y, x + y."""
    if X.is_zero():
        raise ZeroMatrix("nu is undefined at 0")
    F = X.field
    delta = X.det()
    forms = [v] if v is not None else [LinearForm(F(e), F(f)) for e, f in _CANDIDATES]
    for phi in forms:
        val = big_omega(phi, act_algebra_form(X, phi))
        if val:
            return NuClass(val, delta)
    raise AssertionError(f"no non-eigenvector found for {X}")


def in_moment_image(X: Matrix2) -> bool:
    """X is moment(P) for some cubic P iff nu(X) = [2]."""
    return nu_delta(X) == NuClass(X.field(2), X.det())


def moment_preimage(X: Matrix2) -> Optional[BinaryCubic]:
    """A cubic P with moment(P) = X, or None when X is not in the image."""
    F = X.field
    X = TracelessMatrix.from_matrix(X)
    if X.is_zero():
        return BinaryCubic.from_raw(F, [1, 0, 0, 0])
    # move X to [[0, b], [g, 0]] with b != 0 using h in Sl(2, k)
    for v in _CANDIDATES:
        v = (F(v[0]), F(v[1]))
        Xv = X.apply_vector(v)
        det = Xv[0] * v[1] - Xv[1] * v[0]
        if det:
            break
    s = 1 / det
    h = Matrix2(s * Xv[0], v[0], s * Xv[1], v[1])
    Xp = h.inverse() * X * h
    assert not Xp.m11 and Xp.m12 and h.det() == 1
    be, ga = Xp.m12, Xp.m21
    delta = X.det()
    wit = norm_form_witness(-be / 2, delta)
    if wit is None:
        return None
    p, qq = wit
    Pp = BinaryCubic(ga * p / be, ga * qq, p, be * qq)
    P = act_group(h, Pp)
    assert moment(P) == X
    return P


# --------------------------------------------------------------------------
# the image of Psi


def psi_preimage(P: BinaryCubic) -> Optional[BinaryCubic]:
    """A cubic B with Psi(B) = P, or None."""
    F = P.field
    if P.is_zero():
        return BinaryCubic.zero(F)
    Q = qn(P)
    if Q:
        lam = cbrt_in_field(9 * Q)
        if lam is None:
            return None
        B = psi(P) * (-1 / (lam * lam))
    else:
        if not moment(P).is_zero():
            return None
        lam, phi0 = scaled_cube_form(P)
        rho = cbrt_in_field(-9 * lam / 2)
        if rho is None:
            return None
        phi = phi0 * rho
        xi = LinearForm(F.zero, 1 / phi.e) if phi.e else LinearForm(-1 / phi.f, F.zero)
        B = linear_product(phi, phi, xi)
    return B if psi(B) == P else None

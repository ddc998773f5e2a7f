"""Binary cubics ax^3 + 3bx^2y + 3cxy^2 + dy^3 and their symplectic covariants.

Coefficients are stored in the (a, b, c, d) convention, with the binomial
threes baked into the middle terms.  Raw coefficients p0..p3 of
p0 x^3 + p1 x^2 y + p2 x y^2 + p3 y^3 are converted at the boundary.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from .errors import FieldMismatch, NotSl2, NotTraceless, ParseError, SingularMatrix
from .fields import Field, FieldElement, QuadraticExtension


def _same_field(*xs: FieldElement) -> Field:
    F = xs[0].field
    for x in xs[1:]:
        if x.field != F:
            raise FieldMismatch(f"{F} vs {x.field}")
    return F


# --------------------------------------------------------------------------
# homogeneous polynomial helpers (coefficient lists from x^n down to y^n)


def form_mul(A: Sequence[FieldElement], B: Sequence[FieldElement]) -> list[FieldElement]:
    F = A[0].field
    out = [F.zero] * (len(A) + len(B) - 1)
    for i, u in enumerate(A):
        if not u:
            continue
        for j, v in enumerate(B):
            out[i + j] = out[i + j] + u * v
    return out


def form_exact_div(A: Sequence[FieldElement], B: Sequence[FieldElement]):
    """Quotient A / B of homogeneous forms when B divides A exactly, else None."""
    A, B = list(A), list(B)
    if not any(B):
        raise ZeroDivisionError("division by the zero form")
    while not B[0]:
        # B is divisible by y, so A must be as well
        if A[0]:
            return None
        A, B = A[1:], B[1:]
    n, m = len(A) - 1, len(B) - 1
    if n < m:
        return None if any(A) else [A[0].field.zero]
    Q = []
    R = A[:]
    for i in range(n - m + 1):
        t = R[i] / B[0]
        Q.append(t)
        if t:
            for j, bj in enumerate(B):
                R[i + j] = R[i + j] - t * bj
    if any(R[n - m + 1:]):
        return None
    return Q


def form_str(cs: Sequence[FieldElement]) -> str:
    n = len(cs) - 1
    terms = []
    for i, c in enumerate(cs):
        if not c:
            continue
        mono = "".join(
            v if e == 1 else f"{v}^{e}" for v, e in (("x", n - i), ("y", i)) if e)
        coef = str(c)
        if mono and coef == "1":
            coef = ""
        elif mono and coef == "-1":
            coef = "-"
        elif mono and ("+" in coef[1:] or "-" in coef[1:]):
            coef = f"({coef})"
        terms.append(f"{coef}{'*' if coef not in ('', '-') and mono else ''}{mono}")
    return " + ".join(terms).replace("+ -", "- ") if terms else "0"


# --------------------------------------------------------------------------
# value types


@dataclass(frozen=True)
class LinearForm:
    """The linear form e*x + f*y."""

    e: FieldElement
    f: FieldElement

    @property
    def field(self) -> Field:
        return _same_field(self.e, self.f)

    @classmethod
    def x(cls, F: Field) -> "LinearForm":
        return cls(F.one, F.zero)

    @classmethod
    def y(cls, F: Field) -> "LinearForm":
        return cls(F.zero, F.one)

    def coeffs(self) -> list[FieldElement]:
        return [self.e, self.f]

    def is_zero(self) -> bool:
        return not self.e and not self.f

    def __mul__(self, s) -> "LinearForm":
        return LinearForm(self.e * s, self.f * s)

    __rmul__ = __mul__

    def __truediv__(self, s) -> "LinearForm":
        return LinearForm(self.e / s, self.f / s)

    def __add__(self, other: "LinearForm") -> "LinearForm":
        return LinearForm(self.e + other.e, self.f + other.f)

    def __neg__(self) -> "LinearForm":
        return LinearForm(-self.e, -self.f)

    def cube(self) -> "BinaryCubic":
        e, f = self.e, self.f
        return BinaryCubic(e * e * e, e * e * f, e * f * f, f * f * f)

    def __call__(self, v1, v2) -> FieldElement:
        return self.e * v1 + self.f * v2

    def normalized(self) -> "LinearForm":
        """Scaled so the first nonzero coefficient is 1."""
        lead = self.e if self.e else self.f
        return self / lead

    def proportional_to(self, other: "LinearForm") -> bool:
        return not (self.e * other.f - self.f * other.e)

    def lift(self, K: QuadraticExtension) -> "LinearForm":
        return LinearForm(K.embed(self.e), K.embed(self.f))

    def __str__(self):
        return form_str(self.coeffs())


def big_omega(l1: LinearForm, l2: LinearForm) -> FieldElement:
    """Area form on linear forms: Omega(ex+fy, e'x+f'y) = ef' - fe'."""
    return l1.e * l2.f - l1.f * l2.e


@dataclass(frozen=True)
class BinaryCubic:
    """The cubic a x^3 + 3b x^2 y + 3c x y^2 + d y^3."""

    a: FieldElement
    b: FieldElement
    c: FieldElement
    d: FieldElement

    def __post_init__(self):
        _same_field(self.a, self.b, self.c, self.d)

    @property
    def field(self) -> Field:
        return self.a.field

    @classmethod
    def from_raw(cls, F: Field, raw: Sequence) -> "BinaryCubic":
        if len(raw) != 4:
            raise ParseError("a cubic needs exactly four coefficients")
        p0, p1, p2, p3 = (F(v) for v in raw)
        return cls(p0, p1 / 3, p2 / 3, p3)

    @classmethod
    def from_abcd(cls, F: Field, abcd: Sequence) -> "BinaryCubic":
        return cls(*(F(v) for v in abcd))

    @classmethod
    def parse(cls, F: Field, text: str) -> "BinaryCubic":
        parts = [t for t in text.split(",")]
        if len(parts) != 4:
            raise ParseError(f"expected p0,p1,p2,p3 but got {text!r}")
        return cls.from_raw(F, parts)

    @classmethod
    def zero(cls, F: Field) -> "BinaryCubic":
        z = F.zero
        return cls(z, z, z, z)

    def raw(self) -> list[FieldElement]:
        return [self.a, 3 * self.b, 3 * self.c, self.d]

    def abcd(self) -> list[FieldElement]:
        return [self.a, self.b, self.c, self.d]

    def is_zero(self) -> bool:
        return not (self.a or self.b or self.c or self.d)

    def __bool__(self):
        return not self.is_zero()

    def __add__(self, other: "BinaryCubic") -> "BinaryCubic":
        return BinaryCubic(self.a + other.a, self.b + other.b, self.c + other.c, self.d + other.d)

    def __sub__(self, other: "BinaryCubic") -> "BinaryCubic":
        return BinaryCubic(self.a - other.a, self.b - other.b, self.c - other.c, self.d - other.d)

    def __neg__(self) -> "BinaryCubic":
        return BinaryCubic(-self.a, -self.b, -self.c, -self.d)

    def __mul__(self, s) -> "BinaryCubic":
        return BinaryCubic(self.a * s, self.b * s, self.c * s, self.d * s)

    __rmul__ = __mul__

    def __truediv__(self, s) -> "BinaryCubic":
        return BinaryCubic(self.a / s, self.b / s, self.c / s, self.d / s)

    def __call__(self, v1, v2) -> FieldElement:
        return evaluate(self, (v1, v2))

    def lift(self, K: QuadraticExtension) -> "BinaryCubic":
        if self.field == K:
            return self
        return BinaryCubic(*(K.embed(t) for t in self.abcd()))

    def sort_key(self):
        return tuple(t.sort_key() for t in self.raw())

    def to_json(self) -> dict:
        return {
            "raw": [str(t) for t in self.raw()],
            "abcd": [str(t) for t in self.abcd()],
            "field": str(self.field),
        }

    def __str__(self):
        return form_str(self.raw())


@dataclass(frozen=True)
class Matrix2:
    """A 2x2 matrix [[m11, m12], [m21, m22]]."""

    m11: FieldElement
    m12: FieldElement
    m21: FieldElement
    m22: FieldElement

    @property
    def field(self) -> Field:
        return _same_field(self.m11, self.m12, self.m21, self.m22)

    @classmethod
    def of(cls, F: Field, rows) -> "Matrix2":
        (p, q), (r, s) = rows
        return cls(F(p), F(q), F(r), F(s))

    @classmethod
    def identity(cls, F: Field) -> "Matrix2":
        return cls(F.one, F.zero, F.zero, F.one)

    @classmethod
    def weyl(cls, F: Field) -> "Matrix2":
        """The element J = [[0, -1], [1, 0]] of Sl(2, k)."""
        return cls(F.zero, -F.one, F.one, F.zero)

    def __eq__(self, other):
        if not isinstance(other, Matrix2):
            return NotImplemented
        return self.rows() == other.rows()

    def __hash__(self):
        return hash((self.m11, self.m12, self.m21, self.m22))

    def det(self) -> FieldElement:
        return self.m11 * self.m22 - self.m12 * self.m21

    def trace(self) -> FieldElement:
        return self.m11 + self.m22

    def __mul__(self, o):
        if not isinstance(o, Matrix2):
            return self.scale(o)
        return Matrix2(
            self.m11 * o.m11 + self.m12 * o.m21,
            self.m11 * o.m12 + self.m12 * o.m22,
            self.m21 * o.m11 + self.m22 * o.m21,
            self.m21 * o.m12 + self.m22 * o.m22,
        )

    def __add__(self, o: "Matrix2") -> "Matrix2":
        return Matrix2(self.m11 + o.m11, self.m12 + o.m12, self.m21 + o.m21, self.m22 + o.m22)

    def __sub__(self, o: "Matrix2") -> "Matrix2":
        return Matrix2(self.m11 - o.m11, self.m12 - o.m12, self.m21 - o.m21, self.m22 - o.m22)

    def scale(self, s) -> "Matrix2":
        return Matrix2(self.m11 * s, self.m12 * s, self.m21 * s, self.m22 * s)

    def __rmul__(self, s) -> "Matrix2":
        return self.scale(s)

    def inverse(self) -> "Matrix2":
        det = self.det()
        if not det:
            raise SingularMatrix("matrix is not invertible")
        return Matrix2(self.m22 / det, -self.m12 / det, -self.m21 / det, self.m11 / det)

    def cofactor(self) -> "Matrix2":
        return Matrix2(self.m22, -self.m21, -self.m12, self.m11)

    def apply_vector(self, v):
        v1, v2 = v
        return (self.m11 * v1 + self.m12 * v2, self.m21 * v1 + self.m22 * v2)

    def is_zero(self) -> bool:
        return not (self.m11 or self.m12 or self.m21 or self.m22)

    def rows(self):
        return [[self.m11, self.m12], [self.m21, self.m22]]

    def __str__(self):
        return "[[{}, {}], [{}, {}]]".format(self.m11, self.m12, self.m21, self.m22)


class TracelessMatrix(Matrix2):
    """[[alpha, beta], [gamma, -alpha]]."""

    def __init__(self, alpha: FieldElement, beta: FieldElement, gamma: FieldElement):
        super().__init__(alpha, beta, gamma, -alpha)

    @classmethod
    def from_matrix(cls, m: Matrix2) -> "TracelessMatrix":
        if m.trace():
            raise NotTraceless(f"trace of {m} is {m.trace()}")
        return cls(m.m11, m.m12, m.m21)

    @classmethod
    def of(cls, F: Field, rows) -> "TracelessMatrix":
        return cls.from_matrix(Matrix2.of(F, rows))

    @property
    def alpha(self) -> FieldElement:
        return self.m11

    @property
    def beta(self) -> FieldElement:
        return self.m12

    @property
    def gamma(self) -> FieldElement:
        return self.m21

    def to_json(self) -> list:
        return [[str(self.m11), str(self.m12)], [str(self.m21), str(self.m22)]]


def bracket(X: Matrix2, Y: Matrix2) -> TracelessMatrix:
    return TracelessMatrix.from_matrix(X * Y - Y * X)


# --------------------------------------------------------------------------
# the symplectic pairing and evaluation


def omega(P: BinaryCubic, P2: BinaryCubic) -> FieldElement:
    """omega(P, P') = ad' - da' - 3bc' + 3cb'."""
    _same_field(P.a, P2.a)
    return P.a * P2.d - P.d * P2.a - 3 * P.b * P2.c + 3 * P.c * P2.b


def tilde(v) -> LinearForm:
    """The linear form v~ = -v2 x + v1 y, so that P(v) = omega(P, v~^3)."""
    v1, v2 = v
    return LinearForm(-v2, v1)


def evaluate(P: BinaryCubic, v) -> FieldElement:
    """P(v1, v2), cross-checked against the symplectic pairing with v~^3."""
    F = P.field
    v1, v2 = F(v[0]), F(v[1])
    direct = ((P.a * v1 + 3 * P.b * v2) * v1 + 3 * P.c * v2 * v2) * v1 + P.d * v2 * v2 * v2
    paired = omega(P, tilde((v1, v2)).cube())
    if direct != paired:
        raise AssertionError(f"evaluation mismatch for {P} at {v}: {direct} != {paired}")
    return direct


# --------------------------------------------------------------------------
# covariants


def moment(P: BinaryCubic) -> TracelessMatrix:
    a, b, c, d = P.abcd()
    return TracelessMatrix(a * d - b * c, 2 * (b * d - c * c), 2 * (b * b - a * c))


def b_mu(P: BinaryCubic, P2: BinaryCubic) -> TracelessMatrix:
    """Symmetric bilinear form with b_mu(P, P) = moment(P)."""
    _same_field(P.a, P2.a)
    a, b, c, d = P.abcd()
    a2, b2, c2, d2 = P2.abcd()
    alpha = (a * d2 + d * a2 - b * c2 - c * b2) / 2
    beta = b * d2 + d * b2 - 2 * c * c2
    gamma = 2 * b * b2 - (a * c2 + c * a2)
    return TracelessMatrix(alpha, beta, gamma)


def psi(P: BinaryCubic) -> BinaryCubic:
    """The cubic covariant moment(P) . P, written out coefficientwise."""
    a, b, c, d = P.abcd()
    M = moment(P)
    al, be, ga = M.alpha, M.beta, M.gamma
    raw0 = -3 * a * al - 3 * b * ga
    raw1 = -3 * a * be - 3 * b * al - 6 * c * ga
    raw2 = -6 * b * be + 3 * c * al - 3 * d * ga
    raw3 = -3 * c * be + 3 * d * al
    return BinaryCubic(raw0, raw1 / 3, raw2 / 3, raw3)


def qn(P: BinaryCubic) -> FieldElement:
    """The normalized quartic, computed as -det moment(P) and by its closed form."""
    a, b, c, d = P.abcd()
    closed = a * a * d * d - 3 * b * b * c * c - 6 * a * b * c * d + 4 * b * b * b * d + 4 * a * c * c * c
    via_moment = -moment(P).det()
    if closed != via_moment:
        raise AssertionError(f"quartic mismatch for {P}")
    return closed


def j_involution(P: BinaryCubic) -> BinaryCubic:
    return BinaryCubic(-P.d, P.c, -P.b, P.a)


# --------------------------------------------------------------------------
# actions


def act_group_form(g: Matrix2, phi: LinearForm) -> LinearForm:
    """Transpose-inverse action: g . x = (delta x - beta y)/det g, g . y = (-gamma x + alpha y)/det g."""
    al, be, ga, de = g.m11, g.m12, g.m21, g.m22
    det = g.det()
    if not det:
        raise SingularMatrix(f"{g} is singular")
    return LinearForm((phi.e * de - phi.f * ga) / det, (-phi.e * be + phi.f * al) / det)


def act_algebra_form(X: Matrix2, phi: LinearForm) -> LinearForm:
    """X . x = -alpha x - beta y and X . y = -gamma x + alpha y."""
    if X.trace():
        raise NotTraceless(f"trace of {X} is {X.trace()}")
    al, be, ga = X.m11, X.m12, X.m21
    return LinearForm(-al * phi.e - ga * phi.f, -be * phi.e + al * phi.f)


def substitute(P: BinaryCubic, lx: LinearForm, ly: LinearForm) -> BinaryCubic:
    """P(lx, ly): replace x by the form lx and y by ly."""
    X, Y = lx.coeffs(), ly.coeffs()
    X2, Y2 = form_mul(X, X), form_mul(Y, Y)
    terms = (form_mul(X2, X), form_mul(X2, Y), form_mul(X, Y2), form_mul(Y2, Y))
    out = [P.field.zero] * 4
    for coef, t in zip(P.raw(), terms):
        if coef:
            out = [o + coef * u for o, u in zip(out, t)]
    return BinaryCubic.from_raw(P.field, out)


def act_group(g: Matrix2, P: BinaryCubic) -> BinaryCubic:
    if not g.det():
        raise SingularMatrix(f"{g} is singular")
    F = P.field
    return substitute(P, act_group_form(g, LinearForm.x(F)), act_group_form(g, LinearForm.y(F)))


def act_algebra(X: Matrix2, P: BinaryCubic) -> BinaryCubic:
    """The derivation X.P = P_x (X.x) + P_y (X.y)."""
    F = P.field
    lx, ly = act_algebra_form(X, LinearForm.x(F)), act_algebra_form(X, LinearForm.y(F))
    p0, p1, p2, p3 = P.raw()
    # partial derivatives as quadratic forms in x^2, xy, y^2
    Px = [3 * p0, 2 * p1, p2]
    Py = [p1, 2 * p2, 3 * p3]
    out = [s + t for s, t in zip(form_mul(Px, lx.coeffs()), form_mul(Py, ly.coeffs()))]
    return BinaryCubic.from_raw(F, out)


def require_sl2(g: Matrix2) -> Matrix2:
    if g.det() != 1:
        raise NotSl2(f"det {g} = {g.det()}")
    return g


class CubicLinearMap:
    """A linear endomorphism of the cubic space, as a 4x4 matrix on raw coefficients.

    Column i holds the raw coefficients of the image of the i-th monomial
    x^3, x^2y, xy^2, y^3.
    """

    def __init__(self, images: Sequence[BinaryCubic]):
        self.images = list(images)

    def __call__(self, Q: BinaryCubic) -> BinaryCubic:
        out = BinaryCubic.zero(Q.field)
        for coef, img in zip(Q.raw(), self.images):
            if coef:
                out = out + img * coef
        return out

    def matrix(self) -> list[list[FieldElement]]:
        cols = [img.raw() for img in self.images]
        return [[cols[j][i] for j in range(4)] for i in range(4)]

    def is_zero(self) -> bool:
        return all(img.is_zero() for img in self.images)


def sym_cube_matrix(M: Matrix2) -> CubicLinearMap:
    """M tensor-cubed: substitute x -> M.x and y -> M.y multiplicatively."""
    F = M.field
    lx = act_algebra_form(M, LinearForm.x(F))
    ly = act_algebra_form(M, LinearForm.y(F))
    monomials = [
        BinaryCubic.from_raw(F, [1, 0, 0, 0]),
        BinaryCubic.from_raw(F, [0, 1, 0, 0]),
        BinaryCubic.from_raw(F, [0, 0, 1, 0]),
        BinaryCubic.from_raw(F, [0, 0, 0, 1]),
    ]
    return CubicLinearMap([substitute(m, lx, ly) for m in monomials])


def omega_gram(F: Field) -> list[list[FieldElement]]:
    """Gram matrix of omega on the monomial basis x^3, x^2y, xy^2, y^3."""
    basis = [BinaryCubic.from_raw(F, [int(i == j) for j in range(4)]) for i in range(4)]
    return [[omega(u, v) for v in basis] for u in basis]


def det4(m) -> FieldElement:
    """Determinant by cofactor expansion; fine for 4x4."""
    n = len(m)
    if n == 1:
        return m[0][0]
    total = m[0][0].field.zero
    for j in range(n):
        if not m[0][j]:
            continue
        minor = [row[:j] + row[j + 1:] for row in m[1:]]
        term = m[0][j] * det4(minor)
        total = total + term if j % 2 == 0 else total - term
    return total

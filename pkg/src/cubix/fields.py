"""Exact arithmetic over Q, F_p (p != 2, 3) and quadratic extensions of either.

A field is a small immutable descriptor object; calling it builds elements::

    >>> Q = RationalField()
    >>> Q("2/3") + Q("1/6")
    FieldElement(5/6, rat)
    >>> F7 = PrimeField(7)
    >>> F7(3) * 5
    FieldElement(1, fp:7)

Elements of a quadratic extension ``k(w)``, ``w*w = d``, are written ``u+v*w``.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property, lru_cache
from typing import Iterator, Optional

from .errors import (
    DivisionByZero,
    FactorizationBoundExceeded,
    FieldMismatch,
    InvalidField,
    NotAnExtension,
    ParseError,
    ZeroElement,
)

DEFAULT_FACTOR_BOUND = 10**6
EXHAUSTIVE_ROOT_LIMIT = 10**4

# --------------------------------------------------------------------------
# integer helpers


def is_probable_prime(n: int) -> bool:
    """Miller-Rabin with fixed bases; deterministic below 3.3e24."""
    if n < 2:
        return False
    small = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41)
    for p in small:
        if n % p == 0:
            return n == p
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in small:
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def factor_integer(n: int, bound: int = DEFAULT_FACTOR_BOUND) -> dict[int, int]:
    """Factor ``|n|`` by trial division up to ``bound``.

    A leftover cofactor is accepted when it is certainly prime (below
    ``bound**2`` or passing Miller-Rabin); otherwise
    :class:`FactorizationBoundExceeded` is raised.
    """
    n = abs(n)
    if n == 0:
        raise ZeroElement("cannot factor 0")
    out: dict[int, int] = {}

    def strip(p):
        nonlocal n
        while n % p == 0:
            out[p] = out.get(p, 0) + 1
            n //= p

    strip(2)
    strip(3)
    d = 5
    while d * d <= n and d <= bound:
        strip(d)
        strip(d + 2)
        d += 6
    if n > 1:
        if d * d > n or is_probable_prime(n):
            out[n] = out.get(n, 0) + 1
        else:
            raise FactorizationBoundExceeded(
                f"cofactor {n} has no prime factor <= {bound}")
    return out


def iroot(n: int, k: int) -> int:
    """Floor of the k-th root of a non-negative integer."""
    if n < 0:
        raise ValueError("negative radicand")
    if n < 2:
        return n
    if k == 2:
        return math.isqrt(n)
    x = 1 << ((n.bit_length() + k - 1) // k)
    while True:
        y = ((k - 1) * x + n // x ** (k - 1)) // k
        if y >= x:
            break
        x = y
    while x**k > n:
        x -= 1
    while (x + 1) ** k <= n:
        x += 1
    return x


def _exact_root_int(n: int, k: int) -> Optional[int]:
    if n < 0:
        if k % 2 == 0:
            return None
        r = _exact_root_int(-n, k)
        return None if r is None else -r
    r = iroot(n, k)
    return r if r**k == n else None


def _power_free_part(n: int, k: int, bound: int) -> int:
    """Smallest |m| with n/m a k-th power; keeps the sign when k is even."""
    if n == 0:
        raise ZeroElement("zero has no power class")
    out = 1
    for p, e in factor_integer(n, bound).items():
        out *= p ** (e % k)
    if k % 2 == 0 and n < 0:
        out = -out
    return out


def _ceil_sqrt(n: int) -> int:
    r = math.isqrt(n)
    return r if r * r == n else r + 1


def _integer_roots_monic_cubic(A: int, B: int, C: int) -> list[int]:
    """Integer roots of W^3 + A W^2 + B W + C, found by bisection on monotone pieces."""

    def f(w):
        return ((w + A) * w + B) * w + C

    M = 1 + max(abs(A), abs(B), abs(C))
    disc = 4 * A * A - 12 * B
    pieces: list[tuple[int, int, bool]]
    if disc <= 0:
        pieces = [(-M, M, True)]
    else:
        s = _ceil_sqrt(disc)
        lo = (-2 * A - s) // 6  # floor of the smaller critical point
        hi = -((2 * A - s) // 6)  # ceil of the larger critical point
        pieces = [(-M, lo, True), (lo + 1, hi - 1, False), (hi, M, True)]
    roots = set()
    for lo, hi, increasing in pieces:
        if lo > hi:
            continue
        sign = 1 if increasing else -1
        flo, fhi = sign * f(lo), sign * f(hi)
        if flo > 0 or fhi < 0:
            continue
        while lo < hi:
            mid = (lo + hi) // 2
            if sign * f(mid) < 0:
                lo = mid + 1
            else:
                hi = mid
        if f(lo) == 0:
            roots.add(lo)
    return sorted(roots)


def rational_roots(coeffs: list) -> list[Fraction]:
    """Distinct rational roots of a polynomial of degree <= 3.

    ``coeffs`` are rationals from the leading coefficient down.
    """
    cs = [Fraction(c) for c in coeffs]
    while cs and cs[0] == 0:
        cs.pop(0)
    if len(cs) <= 1:
        if not cs:
            raise ZeroElement("zero polynomial")
        return []
    if len(cs) > 4:
        raise ValueError("degree > 3 not supported")
    deg = len(cs) - 1
    padded = cs + [Fraction(0)] * (3 - deg)  # multiply by a power of t
    monic = [c / padded[0] for c in padded[1:]]
    L = 1
    for c in monic:
        L = L * c.denominator // math.gcd(L, c.denominator)
    A = monic[0] * L
    B = monic[1] * L * L
    C = monic[2] * L**3
    roots = {Fraction(w, L) for w in _integer_roots_monic_cubic(int(A), int(B), int(C))}
    if deg < 3:
        roots = {r for r in roots if _horner(cs, r) == 0}
    return sorted(roots)


def _horner(cs, x):
    acc = 0
    for c in cs:
        acc = acc * x + c
    return acc


def _legendre(a: int, p: int) -> int:
    a %= p
    if a == 0:
        return 0
    return 1 if pow(a, (p - 1) // 2, p) == 1 else -1


def _valuation(n: int, p: int) -> tuple[int, int]:
    v = 0
    while n % p == 0:
        n //= p
        v += 1
    return v, n


def hilbert_symbol(a: int, b: int, p: int) -> int:
    """Hilbert symbol (a, b)_p over Q for nonzero integers; ``p == 0`` is the real place."""
    if a == 0 or b == 0:
        raise ZeroElement("Hilbert symbol of zero")
    if p == 0:
        return -1 if (a < 0 and b < 0) else 1
    alpha, u = _valuation(a, p)
    beta, v = _valuation(b, p)
    if p == 2:
        def eps(x):
            return ((x - 1) // 2) % 2

        def omg(x):
            return ((x * x - 1) // 8) % 2

        e = eps(u) * eps(v) + alpha * omg(v) + beta * omg(u)
        return -1 if e % 2 else 1
    s = (-1) ** (alpha * beta * ((p - 1) // 2) % 2)
    if beta % 2:
        s *= _legendre(u, p)
    if alpha % 2:
        s *= _legendre(v, p)
    return s


# --------------------------------------------------------------------------
# fields


class Field:
    """Common behaviour of the three field kinds.

    Subclasses operate on *raw payloads* (Fraction, int residue, or a pair of
    base payloads); :class:`FieldElement` wraps a payload with its field.
    """

    order: Optional[int] = None
    is_extension = False

    # construction -------------------------------------------------------

    def __call__(self, value) -> "FieldElement":
        if isinstance(value, FieldElement):
            if value.field == self:
                return value
            raise FieldMismatch(f"{value.field} element given to {self}")
        if isinstance(value, str):
            return self.parse(value)
        return FieldElement(self, self._coerce(value))

    @cached_property
    def zero(self) -> "FieldElement":
        return self(0)

    @cached_property
    def one(self) -> "FieldElement":
        return self(1)

    def _wrap(self, raw) -> "FieldElement":
        return FieldElement(self, raw)

    @property
    def characteristic(self) -> int:
        raise NotImplementedError

    # finite-field enumeration --------------------------------------------

    def elements(self) -> Iterator["FieldElement"]:
        raise TypeError(f"{self} is infinite")

    def nonzero_elements(self) -> Iterator["FieldElement"]:
        return (x for x in self.elements() if x)

    # roots and classes ---------------------------------------------------

    def _root(self, raw, r: int):
        raise NotImplementedError

    def _class_key(self, raw, r: int):
        """Hashable canonical key of the class of ``raw`` modulo r-th powers, or None."""
        return None

    def _class_rep(self, raw, r: int):
        return raw


@dataclass(frozen=True)
class RationalField(Field):
    factor_bound: int = DEFAULT_FACTOR_BOUND

    def __str__(self):
        return "rat"

    def __eq__(self, other):
        return isinstance(other, RationalField)

    def __hash__(self):
        return hash("rat")

    @property
    def characteristic(self):
        return 0

    def _coerce(self, value):
        if isinstance(value, (int, Fraction)):
            return Fraction(value)
        raise FieldMismatch(f"cannot coerce {value!r} into {self}")

    def parse(self, s: str) -> "FieldElement":
        try:
            return FieldElement(self, Fraction(s.strip()))
        except (ValueError, ZeroDivisionError) as exc:
            raise ParseError(f"bad rational {s!r}") from exc

    def fmt(self, raw) -> str:
        return str(raw)

    # raw arithmetic
    def add(self, a, b):
        return a + b

    def sub(self, a, b):
        return a - b

    def mul(self, a, b):
        return a * b

    def neg(self, a):
        return -a

    def inv(self, a):
        if a == 0:
            raise DivisionByZero("inverse of 0")
        return 1 / a

    def is_zero(self, a):
        return a == 0

    def random_raw(self, rng: random.Random, height: int = 50):
        return Fraction(rng.randint(-height, height), rng.randint(1, height))

    def _root(self, raw, r):
        n = _exact_root_int(raw.numerator, r)
        d = _exact_root_int(raw.denominator, r)
        if n is None or d is None:
            return None
        return Fraction(n, d)

    def _class_key(self, raw, r):
        # n/m ~ n*m^(r-1) modulo r-th powers
        return _power_free_part(raw.numerator * raw.denominator ** (r - 1), r, self.factor_bound)

    def _class_rep(self, raw, r):
        return Fraction(self._class_key(raw, r))


@dataclass(frozen=True)
class PrimeField(Field):
    p: int

    def __post_init__(self):
        if self.p in (2, 3) or not is_probable_prime(self.p):
            raise InvalidField(f"p={self.p} must be a prime other than 2 and 3")

    def __str__(self):
        return f"fp:{self.p}"

    @property
    def order(self):
        return self.p

    @property
    def characteristic(self):
        return self.p

    def _coerce(self, value):
        if isinstance(value, int):
            return value % self.p
        if isinstance(value, Fraction):
            if value.denominator % self.p == 0:
                raise DivisionByZero(f"{value} has denominator divisible by {self.p}")
            return value.numerator * pow(value.denominator, -1, self.p) % self.p
        raise FieldMismatch(f"cannot coerce {value!r} into {self}")

    def parse(self, s: str) -> "FieldElement":
        try:
            return FieldElement(self, self._coerce(Fraction(s.strip())))
        except (ValueError, ZeroDivisionError) as exc:
            raise ParseError(f"bad residue {s!r}") from exc

    def fmt(self, raw) -> str:
        return str(raw)

    def add(self, a, b):
        return (a + b) % self.p

    def sub(self, a, b):
        return (a - b) % self.p

    def mul(self, a, b):
        return a * b % self.p

    def neg(self, a):
        return -a % self.p

    def inv(self, a):
        if a == 0:
            raise DivisionByZero("inverse of 0")
        return pow(a, -1, self.p)

    def is_zero(self, a):
        return a == 0

    def pow_raw(self, a, e):
        return pow(a, e, self.p)

    def random_raw(self, rng: random.Random, height: int = 50):
        return rng.randrange(self.p)

    def elements(self):
        return (FieldElement(self, i) for i in range(self.p))

    def raw_elements(self):
        return range(self.p)

    def _root(self, raw, r):
        return _finite_root(self, raw, r)

    def _class_key(self, raw, r):
        return _finite_class_key(self, raw, r)

    def _class_rep(self, raw, r):
        return _finite_class_rep(self, raw, r)

    @cached_property
    def least_nonresidue(self) -> int:
        return next(z for z in range(2, self.p) if _legendre(z, self.p) == -1)


@dataclass(frozen=True)
class QuadraticExtension(Field):
    """The field base(w) with w*w = d, d a non-square of the base field."""

    base: Field
    d: object  # raw payload of the base field

    is_extension = True

    def __post_init__(self):
        if isinstance(self.base, QuadraticExtension):
            raise InvalidField("only quadratic extensions of Q or F_p are supported")
        d = self.base._coerce(self.d) if not isinstance(self.d, FieldElement) else self.d.raw
        object.__setattr__(self, "d", d)
        if self.base.is_zero(d) or self.base._root(d, 2) is not None:
            raise InvalidField(f"{d} is a square in {self.base}")

    def __str__(self):
        if isinstance(self.base, PrimeField):
            return f"quad:fp:{self.base.p}:{self.d}"
        return f"quad:rat:{self.base.fmt(self.d)}"

    @property
    def order(self):
        return None if self.base.order is None else self.base.order**2

    @property
    def characteristic(self):
        return self.base.characteristic

    def _coerce(self, value):
        if isinstance(value, tuple):
            return (self.base._coerce(value[0]), self.base._coerce(value[1]))
        return (self.base._coerce(value), self.base._coerce(0))

    def embed(self, x: "FieldElement") -> "FieldElement":
        if x.field != self.base:
            raise FieldMismatch(f"cannot embed {x.field} element into {self}")
        return FieldElement(self, (x.raw, self.base._coerce(0)))

    @property
    def gen(self) -> "FieldElement":
        return FieldElement(self, (self.base._coerce(0), self.base._coerce(1)))

    def parse(self, s: str) -> "FieldElement":
        text = s.replace(" ", "")
        zero = self.base._coerce(0)
        if not text.endswith("w"):
            return FieldElement(self, (self.base.parse(text).raw, zero))
        body = text[:-1]
        if body.endswith("*"):
            body = body[:-1]
        cut = next((i for i in range(1, len(body))
                    if body[i] in "+-" and body[i - 1] not in "+-*/"), None)
        u_txt, v_txt = ("", body) if cut is None else (body[:cut], body[cut:])
        if v_txt.startswith("+"):
            v_txt = v_txt[1:]
        if v_txt in ("", "-"):
            v_txt += "1"
        u = self.base.parse(u_txt).raw if u_txt else zero
        return FieldElement(self, (u, self.base.parse(v_txt).raw))

    def fmt(self, raw) -> str:
        u, v = raw
        return f"{self.base.fmt(u)}+{self.base.fmt(v)}*w"

    def add(self, a, b):
        B = self.base
        return (B.add(a[0], b[0]), B.add(a[1], b[1]))

    def sub(self, a, b):
        B = self.base
        return (B.sub(a[0], b[0]), B.sub(a[1], b[1]))

    def mul(self, a, b):
        B = self.base
        u = B.add(B.mul(a[0], b[0]), B.mul(self.d, B.mul(a[1], b[1])))
        v = B.add(B.mul(a[0], b[1]), B.mul(a[1], b[0]))
        return (u, v)

    def neg(self, a):
        return (self.base.neg(a[0]), self.base.neg(a[1]))

    def conj_raw(self, a):
        return (a[0], self.base.neg(a[1]))

    def norm_raw(self, a):
        B = self.base
        return B.sub(B.mul(a[0], a[0]), B.mul(self.d, B.mul(a[1], a[1])))

    def inv(self, a):
        n = self.norm_raw(a)
        if self.base.is_zero(n):
            raise DivisionByZero("inverse of 0")
        ni = self.base.inv(n)
        c = self.conj_raw(a)
        return (self.base.mul(c[0], ni), self.base.mul(c[1], ni))

    def is_zero(self, a):
        return self.base.is_zero(a[0]) and self.base.is_zero(a[1])

    def pow_raw(self, a, e):
        result = self._coerce(1)
        while e:
            if e & 1:
                result = self.mul(result, a)
            a = self.mul(a, a)
            e >>= 1
        return result

    def random_raw(self, rng: random.Random, height: int = 50):
        return (self.base.random_raw(rng, height), self.base.random_raw(rng, height))

    def raw_elements(self):
        if self.base.order is None:
            raise TypeError(f"{self} is infinite")
        return ((u, v) for v in self.base.raw_elements() for u in self.base.raw_elements())

    def elements(self):
        return (FieldElement(self, r) for r in self.raw_elements())

    def _root(self, raw, r):
        if self.base.order is not None:
            return _finite_root(self, raw, r)
        if r == 2:
            return self._rational_quad_sqrt(raw)
        if r == 3:
            return self._rational_quad_cbrt(raw)
        raise ValueError(r)

    def _class_key(self, raw, r):
        if self.base.order is not None:
            return _finite_class_key(self, raw, r)
        return None

    def _class_rep(self, raw, r):
        if self.base.order is not None:
            return _finite_class_rep(self, raw, r)
        return raw

    # square and cube roots in Q(sqrt D), no ring-of-integers machinery

    def _rational_quad_sqrt(self, raw):
        u, v = raw
        if v == 0:
            s = self.base._root(u, 2)
            if s is not None:
                return (s, Fraction(0))
            t = self.base._root(u / self.d, 2)
            return None if t is None else (Fraction(0), t)
        n = self.base._root(self.norm_raw(raw), 2)
        if n is None:
            return None
        for sgn in (1, -1):
            s = self.base._root((u + sgn * n) / 2, 2)
            if s:
                cand = (s, v / (2 * s))
                if self.mul(cand, cand) == raw:
                    return cand
        return None

    def _rational_quad_cbrt(self, raw):
        u, v = raw
        if raw == (0, 0):
            return raw
        n = self.base._root(self.norm_raw(raw), 3)
        if n is None:
            return None
        # w = 2s solves w^3 - 3 n w - 2 u = 0 where (s + t*sqrt(d))^3 = u + v*sqrt(d)
        for w in rational_roots([1, 0, -3 * n, -2 * u]):
            s = w / 2
            t2 = (s * s - n) / self.d
            t = self.base._root(t2, 2)
            if t is None:
                continue
            for cand in ((s, t), (s, -t)):
                if self.mul(cand, self.mul(cand, cand)) == raw:
                    return cand
        return None


# --------------------------------------------------------------------------
# root extraction in finite fields (generalised Tonelli-Shanks / AMM)


def _nonresidue(F, r: int):
    N = F.order - 1
    gen = F.raw_elements()
    for z in gen:
        if F.is_zero(z):
            continue
        if F.pow_raw(z, N // r) != F._coerce(1):
            return z
    raise AssertionError("no non-residue found")


@lru_cache(maxsize=None)
def _root_setup(F, r: int):
    N = F.order - 1
    k, u = 0, N
    while u % r == 0:
        u //= r
        k += 1
    if k == 0:
        return N, k, u, None
    z = _nonresidue(F, r)
    return N, k, u, F.pow_raw(z, u)


def _finite_root(F, x, r: int):
    if F.is_zero(x):
        return x
    one = F._coerce(1)
    N, k, u, c = _root_setup(F, r)
    if k == 0:
        return F.pow_raw(x, pow(r, -1, u))
    if F.pow_raw(x, N // r) != one:
        return None
    e = pow(r, -1, u) if u > 1 else 0
    # R^r = x * err with err in the r-Sylow subgroup generated by c
    R = F.pow_raw(x, e) if u > 1 else one
    err = F.mul(F.pow_raw(R, r), F.inv(x))
    gamma = F.pow_raw(c, r ** (k - 1))
    m = 0
    cinv = F.inv(c)
    for i in range(k):
        h = F.pow_raw(F.mul(err, F.pow_raw(cinv, m)), r ** (k - 1 - i))
        digit = next(dg for dg in range(r) if F.pow_raw(gamma, dg) == h)
        m += digit * r**i
    # err = c^m and m = 0 mod r since x is an r-th power
    root = F.mul(R, F.pow_raw(cinv, m // r))
    if F.pow_raw(root, r) == x:
        return root
    if F.order < EXHAUSTIVE_ROOT_LIMIT:
        for y in F.raw_elements():
            if F.pow_raw(y, r) == x:
                return y
    raise AssertionError(f"root extraction failed for {x} in {F}")


def _finite_class_key(F, x, r):
    N = F.order - 1
    if N % r:
        return F._coerce(1)
    return F.pow_raw(x, N // r)


def _finite_class_rep(F, x, r):
    key = _finite_class_key(F, x, r)
    for y in F.raw_elements():
        if not F.is_zero(y) and _finite_class_key(F, y, r) == key:
            return y
    raise AssertionError("unreachable")


# --------------------------------------------------------------------------
# elements


class FieldElement:
    """An immutable element of one of the supported fields."""

    __slots__ = ("field", "raw")

    def __init__(self, field: Field, raw):
        object.__setattr__(self, "field", field)
        object.__setattr__(self, "raw", raw)

    def __setattr__(self, name, value):
        raise AttributeError("FieldElement is immutable")

    def _other(self, other):
        if isinstance(other, FieldElement):
            if other.field is not self.field and other.field != self.field:
                raise FieldMismatch(f"{self.field} vs {other.field}")
            return other.raw
        if isinstance(other, (int, Fraction)):
            return self.field._coerce(other)
        return NotImplemented

    def __add__(self, other):
        o = self._other(other)
        if o is NotImplemented:
            return o
        return FieldElement(self.field, self.field.add(self.raw, o))

    __radd__ = __add__

    def __sub__(self, other):
        o = self._other(other)
        if o is NotImplemented:
            return o
        return FieldElement(self.field, self.field.sub(self.raw, o))

    def __rsub__(self, other):
        o = self._other(other)
        if o is NotImplemented:
            return o
        return FieldElement(self.field, self.field.sub(o, self.raw))

    def __mul__(self, other):
        o = self._other(other)
        if o is NotImplemented:
            return o
        return FieldElement(self.field, self.field.mul(self.raw, o))

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = self._other(other)
        if o is NotImplemented:
            return o
        return FieldElement(self.field, self.field.mul(self.raw, self.field.inv(o)))

    def __rtruediv__(self, other):
        o = self._other(other)
        if o is NotImplemented:
            return o
        return FieldElement(self.field, self.field.mul(o, self.field.inv(self.raw)))

    def __neg__(self):
        return FieldElement(self.field, self.field.neg(self.raw))

    def __pos__(self):
        return self

    def __pow__(self, e: int):
        if e < 0:
            return self.inverse() ** (-e)
        result = self.field.one
        base = self
        while e:
            if e & 1:
                result = result * base
            base = base * base
            e >>= 1
        return result

    def inverse(self) -> "FieldElement":
        return FieldElement(self.field, self.field.inv(self.raw))

    def __eq__(self, other):
        if isinstance(other, FieldElement):
            return (other.field is self.field or other.field == self.field) and other.raw == self.raw
        if isinstance(other, (int, Fraction)):
            try:
                return self.raw == self.field._coerce(other)
            except DivisionByZero:
                return False
        return NotImplemented

    def __hash__(self):
        return hash((str(self.field), self.raw))

    def __bool__(self):
        return not self.field.is_zero(self.raw)

    def __str__(self):
        return self.field.fmt(self.raw)

    def __repr__(self):
        return f"FieldElement({self}, {self.field})"

    def sort_key(self):
        """Deterministic ordering key (not a field order)."""
        raw = self.raw
        if isinstance(raw, tuple):
            return tuple(_raw_key(r) for r in raw)
        return _raw_key(raw)

    # extension helpers

    def conjugate(self) -> "FieldElement":
        return quad_conjugate(self)

    def norm(self) -> "FieldElement":
        return quad_norm(self)


def _raw_key(r):
    if isinstance(r, Fraction):
        return (abs(r.numerator) + r.denominator, r.denominator, -r.numerator if r < 0 else r.numerator, r < 0)
    return r


# --------------------------------------------------------------------------
# public operations


def sqrt_in_field(x: FieldElement) -> Optional[FieldElement]:
    """A square root of ``x`` in its own field, or None."""
    r = x.field._root(x.raw, 2)
    return None if r is None else FieldElement(x.field, r)


def cbrt_in_field(x: FieldElement) -> Optional[FieldElement]:
    """A cube root of ``x`` in its own field, or None."""
    r = x.field._root(x.raw, 3)
    return None if r is None else FieldElement(x.field, r)


def is_square(x: FieldElement) -> bool:
    return sqrt_in_field(x) is not None


def is_cube(x: FieldElement) -> bool:
    return cbrt_in_field(x) is not None


class _PowerClass:
    exponent: int

    __slots__ = ("field", "rep", "key")

    def __init__(self, x: FieldElement):
        if not x:
            raise ZeroElement("class of zero is undefined")
        F = x.field
        key = F._class_key(x.raw, self.exponent)
        rep = F._class_rep(x.raw, self.exponent) if key is not None else x.raw
        object.__setattr__(self, "field", F)
        object.__setattr__(self, "rep", FieldElement(F, rep))
        object.__setattr__(self, "key", key)

    def __setattr__(self, name, value):
        raise AttributeError("classes are immutable")

    def _root_of(self, x):
        return self.field._root(x.raw, self.exponent)

    def __eq__(self, other):
        if type(other) is not type(self):
            return NotImplemented
        if other.field != self.field:
            return False
        if self.key is not None and other.key is not None:
            return self.key == other.key
        return self._root_of(self.rep / other.rep) is not None

    def __hash__(self):
        if self.key is None:
            return hash((type(self).__name__, str(self.field)))
        return hash((type(self).__name__, str(self.field), self.key))

    def __mul__(self, other):
        if type(other) is not type(self):
            return NotImplemented
        return type(self)(self.rep * other.rep)

    def inverse(self):
        return type(self)(self.rep.inverse())

    def __pow__(self, e: int):
        if e < 0:
            return self.inverse() ** (-e)
        return type(self)(self.rep**e) if e else type(self)(self.field.one)

    def is_identity(self) -> bool:
        return self == type(self)(self.field.one)

    def __str__(self):
        return str(self.rep)

    def __repr__(self):
        return f"{type(self).__name__}({self.rep}, {self.field})"


class CubeClass(_PowerClass):
    """Class of a nonzero element modulo nonzero cubes."""

    exponent = 3


class SquareClass(_PowerClass):
    """Class of a nonzero element modulo nonzero squares."""

    exponent = 2


def cube_class(x: FieldElement) -> CubeClass:
    return CubeClass(x)


def square_class(x: FieldElement) -> SquareClass:
    return SquareClass(x)


def _require_ext(x: FieldElement) -> QuadraticExtension:
    if not isinstance(x.field, QuadraticExtension):
        raise NotAnExtension(f"{x.field} is not a quadratic extension")
    return x.field


def quad_conjugate(x: FieldElement) -> FieldElement:
    F = _require_ext(x)
    return FieldElement(F, F.conj_raw(x.raw))


def quad_norm(x: FieldElement) -> FieldElement:
    F = _require_ext(x)
    return FieldElement(F.base, F.norm_raw(x.raw))


def is_pure_imaginary(x: FieldElement) -> bool:
    F = _require_ext(x)
    return F.base.is_zero(x.raw[0])


def real_part(x: FieldElement) -> FieldElement:
    """The base-field coordinate u of u + v*w."""
    F = _require_ext(x)
    return FieldElement(F.base, x.raw[0])


def imag_part(x: FieldElement) -> FieldElement:
    F = _require_ext(x)
    return FieldElement(F.base, x.raw[1])


def in_base_field(x: FieldElement) -> bool:
    return not x.field.is_extension or x.field.base.is_zero(x.raw[1])


def to_base(x: FieldElement) -> FieldElement:
    if not in_base_field(x):
        raise FieldMismatch(f"{x} does not lie in the base field")
    return real_part(x) if x.field.is_extension else x


def _rational_ints(x: Fraction) -> int:
    # same square class as x
    return x.numerator * x.denominator


def hilbert_membership(x: FieldElement, delta: FieldElement) -> bool:
    """Whether x = a^2 + b^2 * delta has a solution a, b in the field."""
    if not x:
        raise ZeroElement("membership test for 0")
    if x.field != delta.field:
        raise FieldMismatch(f"{x.field} vs {delta.field}")
    F = x.field
    if not delta:
        return is_square(x)
    if F.order is not None:
        return True
    if isinstance(F, QuadraticExtension):
        raise NotImplementedError("norm groups over Q(sqrt D) are not supported")
    if is_square(-delta):
        return True
    a = _rational_ints(x.raw)
    b = _rational_ints(-delta.raw)
    places = {0, 2}
    for n in (a, b):
        places.update(factor_integer(n, F.factor_bound))
    return all(hilbert_symbol(a, b, p) == 1 for p in places)


def norm_form_witness(x: FieldElement, delta: FieldElement) -> Optional[tuple[FieldElement, FieldElement]]:
    """A pair (a, b) with a^2 + b^2 * delta = x, or None when none exists."""
    F = x.field
    if not delta:
        r = sqrt_in_field(x)
        return None if r is None else (r, F.zero)
    s = sqrt_in_field(-delta)
    if s is not None:
        # (a - s b)(a + s b) = x with a - s b = 1
        a = (1 + x) / 2
        b = (x - 1) / (2 * s)
        return a, b
    if F.order is not None:
        for b in F.elements():
            a = sqrt_in_field(x - delta * b * b)
            if a is not None:
                return a, b
        return None
    if not hilbert_membership(x, delta):
        return None
    return _rational_norm_witness(x, delta)


def _squarefree_split(n: int, bound: int) -> tuple[int, int]:
    """n = core * s^2 with core square-free; returns (core, s)."""
    core, s = (1 if n > 0 else -1), 1
    for p, e in factor_integer(abs(n), bound).items():
        s *= p ** (e // 2)
        if e % 2:
            core *= p
    return core, s


def _legendre_conic(a: int, b: int, bound: int) -> Optional[tuple[int, int, int]]:
    """Nontrivial integers (x, y, z) with z^2 = a x^2 + b y^2, a and b square-free.

    Lagrange's descent: with t^2 = a (mod b) and t^2 - a = b k^2 b', a
    solution for (a, b') lifts through the norm of t + sqrt(a).
    """
    from sympy.ntheory import sqrt_mod

    if a == 1:
        return 1, 0, 1
    if b == 1:
        return 0, 1, 1
    if a + b == 0:
        return 1, 1, 0
    if abs(a) > abs(b):
        sol = _legendre_conic(b, a, bound)
        return None if sol is None else (sol[1], sol[0], sol[2])
    if a < 0 and b < 0:
        return None
    t = sqrt_mod(a % abs(b), abs(b))
    if t is None:
        return None
    if t > abs(b) // 2:
        t -= abs(b)
    m = (t * t - a) // b
    if m == 0:
        # t^2 = a forces a = 1, handled above
        return None
    b2, k = _squarefree_split(m, bound)
    sol = _legendre_conic(a, b2, bound)
    if sol is None:
        return None
    x1, y1, z1 = sol
    return t * x1 + z1, k * b2 * y1, t * z1 + a * x1


def _rational_norm_witness(x: FieldElement, delta: FieldElement):
    """Solve u^2 + delta v^2 = x over Q as a point on the conic z^2 = -delta X^2 + x Y^2."""
    F = x.field
    bound = F.factor_bound
    A = -delta.raw
    B = x.raw
    # scale to integers and then to square-free cores: A = ca sa^2, B = cb sb^2
    ca, sa = _squarefree_split(A.numerator * A.denominator, bound)
    cb, sb = _squarefree_split(B.numerator * B.denominator, bound)
    sol = _legendre_conic(ca, cb, bound)
    if sol is None:
        raise AssertionError(f"Legendre descent failed for {x} and {delta}")
    # undo the scaling: A X^2 = ca (sa X / A.den)^2 ... so X = X' A.den / sa
    X0 = Fraction(sol[0] * A.denominator, sa)
    Y0 = Fraction(sol[1] * B.denominator, sb)
    Z0 = Fraction(sol[2])
    point = [X0, Y0, Z0]

    def q(v):
        return A * v[0] ** 2 + B * v[1] ** 2 - v[2] ** 2

    def bil(v, w):
        return A * v[0] * w[0] + B * v[1] * w[1] - v[2] * w[2]

    assert q(point) == 0 and any(point)
    if not point[1]:
        # move to another rational point of the conic with Y != 0
        for r in ((0, 1, 0), (0, 1, 1), (1, 1, 0), (1, 1, 1), (1, 2, 3)):
            qr = q(r)
            if not qr:
                continue
            cand = [qr * pc - 2 * bil(point, r) * rc for pc, rc in zip(point, r)]
            if cand[1]:
                point = cand
                break
    X0, Y0, Z0 = point
    u, v = F(Z0 / Y0), F(X0 / Y0)
    if u * u + v * v * delta != x:
        raise AssertionError(f"bad witness for {x} and {delta}")
    return u, v


# --------------------------------------------------------------------------
# descriptors


def parse_field(desc: str) -> Field:
    """Parse ``rat``, ``fp:<p>``, ``quad:rat:<D>`` or ``quad:fp:<p>:<d>``."""
    parts = desc.strip().split(":")
    try:
        if parts == ["rat"]:
            return RationalField()
        if parts[0] == "fp" and len(parts) == 2:
            return PrimeField(int(parts[1]))
        if parts[0] == "quad" and len(parts) >= 3:
            if parts[1] == "rat" and len(parts) == 3:
                return QuadraticExtension(RationalField(), Fraction(int(parts[2])))
            if parts[1] == "fp" and len(parts) == 4:
                base = PrimeField(int(parts[2]))
                return QuadraticExtension(base, int(parts[3]))
    except ValueError as exc:
        if isinstance(exc, InvalidField):
            raise
        raise InvalidField(f"bad field descriptor {desc!r}") from exc
    raise InvalidField(f"bad field descriptor {desc!r}")


def splitting_extension(m: FieldElement) -> QuadraticExtension:
    """The canonical quadratic extension in which the non-square ``m`` becomes a square.

    Over Q this is Q(sqrt D) with D the square-free part of m; over F_p it is
    F_p(sqrt d) with d the least non-residue.
    """
    F = m.field
    if isinstance(F, RationalField):
        return QuadraticExtension(F, Fraction(F._class_key(m.raw, 2)))
    if isinstance(F, PrimeField):
        return QuadraticExtension(F, F.least_nonresidue)
    raise InvalidField(f"no canonical quadratic extension of {F}")

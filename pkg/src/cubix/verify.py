"""Identity checks, seeded random trials and the exhaustive finite-field orbit census.

The check functions look up covariants through the ``cubics`` module at call
time, so a patched covariant is seen by the harness (used to test the
harness itself).
"""

from __future__ import annotations

import itertools
import random
import time
from collections import Counter, defaultdict
from dataclasses import dataclass, field
from typing import Callable, Iterator, Optional

from . import cubics
from . import orbits
from .cubics import BinaryCubic, LinearForm, Matrix2, TracelessMatrix
from .errors import FieldTooLarge, NotPrimeField, NotSl2, NotTraceless
from .fields import Field, FieldElement, PrimeField, cbrt_in_field

DEFAULT_CENSUS_BOUND = 13


# --------------------------------------------------------------------------
# single identities


def eisenstein_symplectic(P: BinaryCubic):
    """The symplectic Eisenstein identity for fixed P, as a predicate on Q.

    Everything depending only on P is computed once, which matters when one P
    is paired with many Q.
    """
    F = P.field
    M = cubics.moment(P)
    M3 = cubics.sym_cube_matrix(M)
    n = cubics.qn(P)
    D = cubics.psi(P)
    half9 = F(9) / 2

    def holds(Q: BinaryCubic) -> bool:
        lhs = cubics.omega(D, Q) ** 2 - 9 * n * cubics.omega(P, Q) ** 2
        rhs = -half9 * cubics.omega(M3(Q), Q) - half9 * n * cubics.omega(cubics.act_algebra(M, Q), Q)
        return lhs == rhs

    return holds


def check_eisenstein_symplectic(P: BinaryCubic, Q: BinaryCubic) -> bool:
    """omega(Psi P, Q)^2 - 9 Q_n omega(P, Q)^2 = -(9/2) omega(M^3 Q, Q) - (9/2) Q_n omega(M Q, Q)."""
    return eisenstein_symplectic(P)(Q)


def check_eisenstein_classical(P: BinaryCubic, v) -> bool:
    """Psi(P)(v)^2 - 9 Q_n(P) P(v)^2 = -(9/2) Omega(moment(P).v~, v~)^3."""
    F = P.field
    v = (F(v[0]), F(v[1]))
    lhs = cubics.evaluate(cubics.psi(P), v) ** 2 - 9 * cubics.qn(P) * cubics.evaluate(P, v) ** 2
    vt = cubics.tilde(v)
    w = cubics.big_omega(cubics.act_algebra_form(cubics.moment(P), vt), vt)
    return lhs == -F(9) / 2 * w**3


def check_moment_identity(xi: Matrix2, P: BinaryCubic) -> bool:
    """Tr(moment(P) xi) = -(1/3) omega(xi.P, P) and 2 b_mu(P, xi.P) = [xi, moment(P)]."""
    if xi.trace():
        raise NotTraceless(f"trace of {xi} is {xi.trace()}")
    M = cubics.moment(P)
    xiP = cubics.act_algebra(xi, P)
    first = (M * xi).trace() == -cubics.omega(xiP, P) / 3
    second = cubics.b_mu(P, xiP) * 2 == cubics.bracket(xi, M)
    return first and second


def check_equivariance(g: Matrix2, P: BinaryCubic) -> bool:
    """moment(gP) = g moment(P) g^-1, Psi(gP) = g Psi(P), Q_n(gP) = Q_n(P)."""
    if g.det() != 1:
        raise NotSl2(f"det {g} = {g.det()}")
    gP = cubics.act_group(g, P)
    return (
        cubics.moment(gP) == g * cubics.moment(P) * g.inverse()
        and cubics.psi(gP) == cubics.act_group(g, cubics.psi(P))
        and cubics.qn(gP) == cubics.qn(P)
    )


def check_psi_squared(P: BinaryCubic) -> bool:
    """Psi(Psi(P)) = -(9 Q_n(P))^2 P."""
    return cubics.psi(cubics.psi(P)) == P * (-(9 * cubics.qn(P)) ** 2)


def check_omega_psi(P: BinaryCubic) -> bool:
    return cubics.omega(P, cubics.psi(P)) == 6 * cubics.qn(P)


def check_symplectic_invariance(g: Matrix2, P: BinaryCubic, Q: BinaryCubic) -> bool:
    return cubics.omega(cubics.act_group(g, P), cubics.act_group(g, Q)) == cubics.omega(P, Q)


def check_double_fibre(P: BinaryCubic, t: FieldElement) -> bool:
    """Both lines +-P + t Psi(P) lie in the moment fibre of a double-root cubic."""
    if orbits.classify(P).kind != orbits.DOUBLE:
        return True
    M = cubics.moment(P)
    d = cubics.psi(P)
    return cubics.moment(P + d * t) == M and cubics.moment(-P + d * t) == M


def check_sum_of_cubes(P: BinaryCubic) -> bool:
    """T1 + T2 = P, omega(T1, T2)^2 = Q_n(P), and the +-q decompositions agree up to swap."""
    s = orbits.classify(P)
    if s.kind != orbits.GEN_SQUARE:
        return True
    sc = orbits.sum_of_cubes(P, s.q)
    sc2 = orbits.sum_of_cubes(P, -s.q)
    return (
        sc.T1 + sc.T2 == P
        and cubics.omega(sc.T1, sc.T2) ** 2 == cubics.qn(P)
        and {sc.T1, sc.T2} == {sc2.T1, sc2.T2}
    )


# --------------------------------------------------------------------------
# samplers


def random_element(F: Field, rng: random.Random, height: int = 50) -> FieldElement:
    return FieldElement(F, F.random_raw(rng, height))


def random_cubic(F: Field, rng: random.Random, height: int = 50) -> BinaryCubic:
    return BinaryCubic(*(random_element(F, rng, height) for _ in range(4)))


def random_traceless(F: Field, rng: random.Random, height: int = 50) -> TracelessMatrix:
    return TracelessMatrix(*(random_element(F, rng, height) for _ in range(3)))


def random_sl2(F: Field, rng: random.Random, height: int = 10) -> Matrix2:
    """A product of two unipotents and a diagonal element, so det = 1 exactly."""
    t, s = random_element(F, rng, height), random_element(F, rng, height)
    u = random_element(F, rng, height)
    while not u:
        u = random_element(F, rng, height)
    one, zero = F.one, F.zero
    return Matrix2(one, t, zero, one) * Matrix2(one, zero, s, one) * Matrix2(u, zero, zero, 1 / u)


def random_gl2(F: Field, rng: random.Random, height: int = 10) -> Matrix2:
    while True:
        g = Matrix2(*(random_element(F, rng, height) for _ in range(4)))
        if g.det():
            return g


# --------------------------------------------------------------------------
# reports


@dataclass
class TrialReport:
    name: str
    trials: int
    seed: Optional[int]
    failures: list = field(default_factory=list)
    elapsed: float = 0.0
    parts: list = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return not self.failures

    def to_json(self, timing: bool = True) -> dict:
        out = {
            "name": self.name,
            "trials": self.trials,
            "seed": self.seed,
            "passed": self.passed,
            "failures": self.failures,
        }
        if timing:
            out["elapsed"] = round(self.elapsed, 3)
        if self.parts:
            out["parts"] = [p.to_json(timing) for p in self.parts]
        return out


def _fmt(obj):
    if isinstance(obj, BinaryCubic):
        return [str(t) for t in obj.raw()]
    if isinstance(obj, Matrix2):
        return [[str(t) for t in row] for row in obj.rows()]
    if isinstance(obj, (tuple, list)):
        return [_fmt(o) for o in obj]
    return str(obj)


IDENTITIES: dict[str, Callable] = {
    "eisenstein_symplectic": lambda s: check_eisenstein_symplectic(s["P"], s["Q"]),
    "eisenstein_classical": lambda s: check_eisenstein_classical(s["P"], s["v"]),
    "moment_identity": lambda s: check_moment_identity(s["xi"], s["P"]),
    "equivariance": lambda s: check_equivariance(s["g"], s["P"]),
    "symplectic_invariance": lambda s: check_symplectic_invariance(s["g"], s["P"], s["Q"]),
    "psi_squared": lambda s: check_psi_squared(s["P"]),
    "omega_psi": lambda s: check_omega_psi(s["P"]),
    "double_fibre": lambda s: check_double_fibre(s["D"], s["t"]),
    "sum_of_cubes": lambda s: check_sum_of_cubes(s["P"]),
}

_INPUTS = {
    "eisenstein_symplectic": ("P", "Q"),
    "eisenstein_classical": ("P", "v"),
    "moment_identity": ("xi", "P"),
    "equivariance": ("g", "P"),
    "symplectic_invariance": ("g", "P", "Q"),
    "psi_squared": ("P",),
    "omega_psi": ("P",),
    "double_fibre": ("D", "t"),
    "sum_of_cubes": ("P",),
}


def draw_sample(F: Field, rng: random.Random) -> dict:
    """One joint sample for all identities; the draw order is fixed for reproducibility."""
    P = random_cubic(F, rng)
    Q = random_cubic(F, rng)
    xi = random_traceless(F, rng)
    g = random_sl2(F, rng)
    v = (random_element(F, rng), random_element(F, rng))
    t = random_element(F, rng)
    # a cubic with a double root: phi^2 xi for random independent forms
    phi = LinearForm(random_element(F, rng, 9), random_element(F, rng, 9))
    psi_ = LinearForm(random_element(F, rng, 9), random_element(F, rng, 9))
    D = orbits.linear_product(phi, phi, psi_)
    return {"P": P, "Q": Q, "xi": xi, "g": g, "v": v, "t": t, "D": D}


def verify_suite(seed: int, trials: int, field: Field) -> TrialReport:
    """Run every identity on ``trials`` seeded samples; failures carry the witness inputs."""
    if trials < 1:
        raise ValueError("trials must be >= 1")
    rng = random.Random(seed)
    start = time.perf_counter()
    parts = {name: TrialReport(name, trials, seed) for name in IDENTITIES}
    for i in range(trials):
        sample = draw_sample(field, rng)
        for name, check in IDENTITIES.items():
            t0 = time.perf_counter()
            try:
                ok = check(sample)
                err = None
            except Exception as exc:  # a crash is a failure with a witness too
                ok, err = False, f"{type(exc).__name__}: {exc}"
            parts[name].elapsed += time.perf_counter() - t0
            if not ok:
                witness = {k: _fmt(sample[k]) for k in _INPUTS[name]}
                entry = {"identity": name, "trial": i, "input": witness}
                if err:
                    entry["error"] = err
                parts[name].failures.append(entry)
    report = TrialReport("all", trials, seed, elapsed=time.perf_counter() - start)
    report.parts = list(parts.values())
    for p in report.parts:
        report.failures.extend(p.failures)
    return report


# --------------------------------------------------------------------------
# exhaustive checks over small prime fields


def all_cubics(F: Field, include_zero: bool = False) -> Iterator[BinaryCubic]:
    els = list(F.elements())
    for raw in itertools.product(els, repeat=4):
        P = BinaryCubic.from_raw(F, raw)
        if include_zero or not P.is_zero():
            yield P


def all_traceless(F: Field) -> Iterator[TracelessMatrix]:
    els = list(F.elements())
    for a, b, c in itertools.product(els, repeat=3):
        yield TracelessMatrix(a, b, c)


def all_sl2(F: Field) -> Iterator[Matrix2]:
    els = list(F.elements())
    for a, b, c, d in itertools.product(els, repeat=4):
        if a * d - b * c == 1:
            yield Matrix2(a, b, c, d)


def moment_image_mismatches(F: Field) -> list:
    """Traceless X where 'X = moment(P) for some P != 0' disagrees with the nu = [2] criterion."""
    image = {cubics.moment(P) for P in all_cubics(F)}
    bad = []
    for X in all_traceless(F):
        expected = X.is_zero() or orbits.in_moment_image(X)
        if (X in image) != expected:
            bad.append(_fmt(X))
        elif not X.is_zero() and expected:
            P = orbits.moment_preimage(X)
            if P is None or cubics.moment(P) != X:
                bad.append(_fmt(X))
    return bad


def psi_image_mismatches(F: Field) -> list:
    """Cubics where membership in Psi(S^3) disagrees with the cube criteria."""
    image = {cubics.psi(B) for B in all_cubics(F, include_zero=True)}
    six = orbits.cube_class(F(6))
    bad = []
    for P in all_cubics(F):
        n = cubics.qn(P)
        if n:
            expected = cbrt_in_field(9 * n) is not None
        else:
            expected = cubics.moment(P).is_zero() and orbits.i_t(P) == six
        found = orbits.psi_preimage(P)
        if (P in image) != expected or (found is not None) != expected:
            bad.append(_fmt(P))
    return bad


# --------------------------------------------------------------------------
# census


@dataclass
class OrbitRecord:
    representative: BinaryCubic
    size: int
    stratum: str
    invariant: orbits.OrbitInvariant
    stabilizer: int

    def to_json(self) -> dict:
        return {
            "representative": [str(t) for t in self.representative.raw()],
            "size": self.size,
            "stratum": self.stratum,
            "invariant": self.invariant.to_json(),
            "stabilizer": self.stabilizer,
        }


@dataclass
class OrbitCensus:
    field: PrimeField
    group_order: int
    sl_orbits: list
    gl_orbits: list
    sl_label: dict  # raw residue tuple -> index into sl_orbits
    gl_label: dict
    problems: list = field(default_factory=list)

    def counts(self, group: str = "sl2") -> Counter:
        recs = self.sl_orbits if group == "sl2" else self.gl_orbits
        return Counter(r.stratum for r in recs)

    @property
    def totals(self) -> dict:
        sl, gl = self.counts("sl2"), self.counts("gl2")
        gen = (orbits.GEN_SQUARE, orbits.GEN_NONSQUARE)
        return {
            "sl_nonzero_disc": sum(sl[k] for k in gen),
            "gl_nonzero_disc": sum(gl[k] for k in gen),
        }

    def same_sl2(self, P: BinaryCubic, Q: BinaryCubic) -> bool:
        return self.sl_label[_key(P)] == self.sl_label[_key(Q)]

    def same_gl2(self, P: BinaryCubic, Q: BinaryCubic) -> bool:
        return self.gl_label[_key(P)] == self.gl_label[_key(Q)]

    def to_json(self) -> dict:
        return {
            "field": str(self.field),
            "group_order": self.group_order,
            "nonzero_cubics": sum(r.size for r in self.sl_orbits),
            "sl2": {k: v for k, v in sorted(self.counts("sl2").items())},
            "gl2": {k: v for k, v in sorted(self.counts("gl2").items())},
            "totals": self.totals,
            "sl_orbits": [r.to_json() for r in self.sl_orbits],
            "gl_orbits": [r.to_json() for r in self.gl_orbits],
            "problems": self.problems,
        }


def _key(P: BinaryCubic) -> tuple:
    return tuple(t.raw for t in P.raw())


class _UnionFind:
    def __init__(self, items):
        self.parent = {x: x for x in items}

    def find(self, x):
        root = x
        while self.parent[root] != root:
            root = self.parent[root]
        while self.parent[x] != root:
            self.parent[x], x = root, self.parent[x]
        return root

    def union(self, x, y):
        rx, ry = self.find(x), self.find(y)
        if rx != ry:
            # keep the lexicographically least element as root
            if ry < rx:
                rx, ry = ry, rx
            self.parent[ry] = rx


def _primitive_root(p: int) -> int:
    from .fields import factor_integer

    primes = list(factor_integer(p - 1))
    return next(g for g in range(2, p) if all(pow(g, (p - 1) // r, p) != 1 for r in primes))


def census(F: Field, bound: int = DEFAULT_CENSUS_BOUND) -> OrbitCensus:
    """Exhaustive Sl(2,p) and Gl(2,p) orbit decomposition of the nonzero cubics."""
    if not isinstance(F, PrimeField):
        raise NotPrimeField(f"census needs a prime field, got {F}")
    p = F.p
    if p > bound:
        raise FieldTooLarge(f"p = {p} exceeds the census bound {bound}")
    cubic_of = {_key(P): P for P in all_cubics(F)}
    uf = _UnionFind(cubic_of)
    one, zero = F.one, F.zero
    gens = [Matrix2(one, one, zero, one), Matrix2(one, zero, one, one), Matrix2.weyl(F)]
    for k, P in cubic_of.items():
        for g in gens:
            uf.union(k, _key(cubics.act_group(g, P)))
    members = defaultdict(list)
    for k in cubic_of:
        members[uf.find(k)].append(k)
    order = p * (p * p - 1)
    problems = []

    group = list(all_sl2(F))
    if len(group) != order:
        problems.append(f"enumerated {len(group)} elements of Sl(2,{p}), expected {order}")
    sl_reps = sorted(members)
    sl_label = {}
    sl_records = []
    for idx, rk in enumerate(sl_reps):
        rep = cubic_of[rk]
        inv = orbits.invariant(rep)
        size = len(members[rk])
        # stabilizer counted directly, so orbit-stabilizer is a genuine check
        stab = sum(1 for g in group if cubics.act_group(g, rep) == rep)
        if size * stab != order:
            problems.append(f"orbit of {rk}: size {size} times stabilizer {stab} != {order}")
        for mk in members[rk]:
            sl_label[mk] = idx
        sl_records.append(OrbitRecord(rep, size, orbits.classify(rep).kind, inv, stab))

    # Gl orbits: fuse Sl orbits under diag(g, 1), g a primitive root
    diag = Matrix2(F(_primitive_root(p)), zero, zero, one)
    fuse = _UnionFind(range(len(sl_reps)))
    for idx, rk in enumerate(sl_reps):
        fuse.union(idx, sl_label[_key(cubics.act_group(diag, cubic_of[rk]))])
    gl_groups = defaultdict(list)
    for idx in range(len(sl_reps)):
        gl_groups[fuse.find(idx)].append(idx)
    gl_records = []
    gl_label = {}
    for gidx, root in enumerate(sorted(gl_groups)):
        parts = gl_groups[root]
        rep = sl_records[parts[0]].representative
        size = sum(sl_records[i].size for i in parts)
        gl_records.append(OrbitRecord(rep, size, sl_records[parts[0]].stratum,
                                      orbits.gl_invariant(rep), order * (p - 1) // size))
        for i in parts:
            for mk in members[sl_reps[i]]:
                gl_label[mk] = gidx

    out = OrbitCensus(F, order, sl_records, gl_records, sl_label, gl_label, problems)
    if sum(r.size for r in sl_records) != p**4 - 1:
        problems.append("orbit sizes do not sum to p^4 - 1")
    problems.extend(census_invariant_problems(out, cubic_of))
    return out


def census_invariant_problems(c: OrbitCensus, cubic_of: dict) -> list:
    """Invariants must be constant on each orbit and distinct across orbits."""
    problems = []
    for group, recs, labels, fn in (
        ("sl2", c.sl_orbits, c.sl_label, orbits.invariant),
        ("gl2", c.gl_orbits, c.gl_label, orbits.gl_invariant),
    ):
        for k, P in cubic_of.items():
            if fn(P) != recs[labels[k]].invariant:
                problems.append(f"{group} invariant not constant on the orbit of {k}")
        for i, j in itertools.combinations(range(len(recs)), 2):
            if recs[i].invariant == recs[j].invariant:
                problems.append(f"{group} orbits {i} and {j} share an invariant")
    return problems

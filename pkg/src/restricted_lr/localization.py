"""Localization (R_S, L_S) of a restricted Lie-Rinehart algebra.

Elements of L_S are pairs s^-1 x with s in a finitely generated
multiplicative set S of a polynomial domain and x in L.  Anchor, bracket and
p-map on fractions:

    eps(s^-1 x)(t^-1 r) = s^-1 t^-1 x(r) - s^-1 t^-2 x(t) r
    [s^-1 x, t^-1 y]    = s^-1 t^-1 [x, y] + s^-1 x(t^-1) y - t^-1 y(s^-1) x
    (s^-1 x)^[p]        = s^(-p-1) (s x^[p] - x^(p-1)(s) x)

Equality is cross multiplication.  Outputs have common generator factors
cancelled, which keeps denominators small without touching semantics.
"""

from __future__ import annotations

import random
from typing import Sequence

from .coeffring import Fraction, PolyRing, RingElement, derivation_on_fraction, divide_exact
from .envelope import Envelope
from .lierinehart import LieRinehartAlgebra, LRElement, LRPresentation, verify_axioms
from .report import Checker, Report


class MultSet:
    """The multiplicative monoid generated by finitely many nonzero polynomials."""

    def __init__(self, ring: PolyRing, generators: Sequence):
        if ring.truncated:
            raise ValueError("localization needs an integral domain; the ring is truncated")
        gens = [ring(g) for g in generators]
        for g in gens:
            if not g:
                raise ValueError("zero cannot generate a multiplicative set")
        self.ring = ring
        self.generators = tuple(g for g in gens if not g.is_constant())

    def __str__(self):
        return "{" + ", ".join(str(g) for g in self.generators) + "}^k" if self.generators else "{1}"

    def contains(self, s: RingElement) -> bool:
        """Whether s is (a unit times) a product of generators."""
        if not s:
            return False
        changed = True
        while changed and not s.is_constant():
            changed = False
            for g in self.generators:
                q = divide_exact(s, g)
                if q is not None:
                    s, changed = q, True
        return s.is_constant()

    def random_element(self, rng: random.Random, max_power: int = 2) -> RingElement:
        out = self.ring.one()
        for g in self.generators:
            out = out * g ** rng.randint(0, max_power)
        return out

    def simplify(self, den: RingElement, nums: list) -> tuple:
        """Cancel generator factors (and a constant) common to den and all nums."""
        for g in self.generators:
            while not den.is_constant():
                q = divide_exact(den, g)
                if q is None:
                    break
                qs = [divide_exact(n, g) if n else n for n in nums]
                if any(x is None for x in qs):
                    break
                den, nums = q, qs
        if den.is_constant():
            inv = pow(den.constant_term(), -1, self.ring.p)
            den, nums = self.ring.one(), [inv * n for n in nums]
        return den, nums

    def simplify_fraction(self, f: Fraction) -> Fraction:
        den, (num,) = self.simplify(f.den, [f.num])
        return Fraction(num, den)


class LocElement:
    """s^-1 x; compare with :func:`loc_equal` (``==`` does the same)."""

    __slots__ = ("alg", "den", "num")

    def __init__(self, alg: LocalizedAlgebra, den: RingElement, num: LRElement):
        if not den:
            raise ZeroDivisionError("zero denominator")
        self.alg = alg
        self.den = den
        self.num = num

    def __add__(self, other):
        if not isinstance(other, LocElement):
            return NotImplemented
        if self.den == other.den:
            return self.alg._make(self.den, self.num + other.num)
        return self.alg._make(self.den * other.den, other.den * self.num + self.den * other.num)

    def __neg__(self):
        return LocElement(self.alg, self.den, -self.num)

    def __sub__(self, other):
        return self + (-other)

    def __rmul__(self, c):
        if isinstance(c, (int, RingElement, Fraction)):
            return self.alg.scale(c, self)
        return NotImplemented

    def __eq__(self, other):
        if not isinstance(other, LocElement):
            return NotImplemented
        return loc_equal(self, other)

    __hash__ = None

    def __str__(self):
        num = str(self.num)
        if self.den == 1:
            return num
        den = f"({self.den})" if len(self.den) > 1 else str(self.den)
        if sum(1 for c in self.num.coeffs if c) > 1:
            num = f"({num})"
        return f"{num} / {den}"

    def __repr__(self):
        return f"LocElement({self})"


class LocalizedAlgebra(LieRinehartAlgebra):
    """(R_S, L_S) for a presentation over a polynomial domain."""

    def __init__(self, base: LRPresentation, mult_set: MultSet):
        if base.ring != mult_set.ring:
            raise ValueError("multiplicative set lives in a different ring")
        self.base = base
        self.S = mult_set
        self.ring = base.ring
        self.p = base.p

    def __str__(self):
        return f"localization of {self.base} at {self.S}"

    # -- elements ---------------------------------------------------------------
    def _make(self, den, num: LRElement) -> LocElement:
        den, coeffs = self.S.simplify(den, list(num.coeffs))
        return LocElement(self, den, LRElement(self.base, coeffs))

    def element(self, num, den=1) -> LocElement:
        den = self.ring(den)
        if not self.S.contains(den):
            raise ValueError(f"{den} is not in the multiplicative set {self.S}")
        if not isinstance(num, LRElement):
            num = self.base.element(num)
        return LocElement(self, den, num)

    def embed(self, x: LRElement) -> LocElement:
        return LocElement(self, self.ring.one(), x)

    def zero(self):
        return self.embed(self.base.zero())

    def basis(self):
        return [self.embed(x) for x in self.base.basis()]

    def scalar_gens(self):
        return [Fraction(t) for t in self.ring.gens()]

    def lift_scalar(self, r):
        return r if isinstance(r, Fraction) else Fraction(self.ring(r))

    def scale(self, f, a: LocElement) -> LocElement:
        f = self.lift_scalar(f)
        return self._make(f.den * a.den, f.num * a.num)

    def random_scalar(self, rng):
        return Fraction(self.base.random_scalar(rng), self.S.random_element(rng))

    def random_element(self, rng):
        return LocElement(self, self.S.random_element(rng), self.base.random_element(rng))

    def random_elements(self, rng, k):
        # common denominator, as in the reduction a = s^-1 x, b = s^-1 y
        s = self.S.random_element(rng)
        return [LocElement(self, s, self.base.random_element(rng)) for _ in range(k)]

    # -- structure ----------------------------------------------------------------
    def equal(self, a, b) -> bool:
        return loc_equal(a, b)

    def anchor(self, a: LocElement, r) -> Fraction:
        return loc_anchor(a, self.lift_scalar(r))

    def bracket(self, a, b):
        return loc_bracket(a, b)

    def p_power(self, a):
        return loc_p_power(a)


def loc_equal(a: LocElement, b: LocElement, witness: RingElement | None = None) -> bool:
    """s^-1 x = t^-1 y iff u t x = u s y; over a domain u = 1 suffices."""
    u = witness if witness is not None else a.den.ring.one()
    return all(u * b.den * x == u * a.den * y for x, y in zip(a.num.coeffs, b.num.coeffs))


def loc_anchor(a: LocElement, f: Fraction) -> Fraction:
    """eps(s^-1 x)(t^-1 r) = s^-1 t^-1 x(r) - s^-1 t^-2 x(t) r."""
    base = a.alg.base
    d = base.lr_anchor(a.num)
    s, r, t = a.den, f.num, f.den
    if t.is_constant():
        out = Fraction(d(r), s * t)
    else:
        out = Fraction(t * d(r) - d(t) * r, s * t * t)
    return a.alg.S.simplify_fraction(out)


def loc_bracket(a: LocElement, b: LocElement) -> LocElement:
    """[s^-1 x, t^-1 y] with x(t^-1) = -t^-2 x(t), over the denominator s^2 t^2."""
    alg = a.alg
    base = alg.base
    s, x, t, y = a.den, a.num, b.den, b.num
    xt = base.anchor(x, t)
    ys = base.anchor(y, s)
    num = (s * t) * base.bracket(x, y) - (s * xt) * y + (t * ys) * x
    return alg._make(s * s * t * t, num)


def loc_p_power(a: LocElement) -> LocElement:
    """(s^-1 x)^[p] = s^(-p-1) (s x^[p] - x^(p-1)(s) x)."""
    alg = a.alg
    base = alg.base
    p = alg.p
    s, x = a.den, a.num
    xs = base.anchor_iter(x, p - 1, s)
    return alg._make(s ** (p + 1), s * base.p_power(x) - xs * x)


def localize(base: LRPresentation, generators: Sequence) -> LocalizedAlgebra:
    return LocalizedAlgebra(base, MultSet(base.ring, generators))


def localize_envelope(alg: LocalizedAlgebra, mode: str = "U") -> Envelope:
    """U(R_S, L_S) or u(R_S, L_S): the envelope engine over fraction scalars."""
    base, S = alg.base, alg.S

    def derive(i, f):
        return S.simplify_fraction(derivation_on_fraction(base.anchor_img[i], f))

    return Envelope(base, mode, lift=lambda r: Fraction(r), derive=derive)


def loc_iota(env: Envelope, a: LocElement):
    """iota_L(s^-1 x) inside a localized envelope."""
    return env.element({env._unit_vec(i): Fraction(c, a.den) for i, c in enumerate(a.num.coeffs) if c})


# -- verification ---------------------------------------------------------------------
def verify_loc_well_defined(alg: LocalizedAlgebra, trials: int = 100, seed: int = 0) -> Report:
    """Equivalent representatives must give equivalent outputs.

    Pairs (s^-1 x, t^-1 y) are generated with y = w x, t = w s for random w in
    S; witnesses u, v in S are drawn at random and threaded through the
    intermediate identities, which are replayed verbatim: the first in
    U(R, L), the others in L.
    """
    if trials < 1:
        raise ValueError("trials must be at least 1")
    rng = random.Random(seed)
    base, S, p = alg.base, alg.S, alg.p
    env = Envelope(base, "U")
    report = Report(f"well-definedness: {alg}", seed=seed)
    checks = {name: Checker(name) for name in (
        "pair_equivalent", "p_power_well_defined", "bracket_well_defined", "anchor_well_defined",
        "eq2_in_U", "utx_power_in_U", "eq3_in_L", "final_in_L")}

    def it(z, k, r):
        return base.anchor_iter(z, k, r)

    for _ in range(trials):
        x = base.random_element(rng)
        s = S.random_element(rng)
        w = S.random_element(rng)
        u = S.random_element(rng)
        v = S.random_element(rng)
        y = w * x
        t = w * s
        a = LocElement(alg, s, x)
        b = LocElement(alg, t, y)
        checks["pair_equivalent"].record(loc_equal(a, b, witness=u), a=a, b=b, u=u)
        pa, pb = loc_p_power(a), loc_p_power(b)
        checks["p_power_well_defined"].record(loc_equal(pa, pb), a=a, b=b, lhs=pa, rhs=pb)
        c = alg.random_element(rng)
        ba, bb = loc_bracket(a, c), loc_bracket(b, c)
        checks["bracket_well_defined"].record(loc_equal(ba, bb), a=a, b=b, c=c, lhs=ba, rhs=bb)
        f = alg.random_scalar(rng)
        fa, fb = loc_anchor(a, f), loc_anchor(b, f)
        checks["anchor_well_defined"].record(fa == fb, a=a, b=b, r=f, lhs=fa, rhs=fb)

        # v t^(p+1) (s x^p - x^(p-1)(s) x) = v s^(p+1) (t y^p - y^(p-1)(t) y)   in U
        X, Y = env.iota_L(x), env.iota_L(y)
        lhs = (v * t ** (p + 1)) * ((s * env.power(X, p)) - it(x, p - 1, s) * X)
        rhs = (v * s ** (p + 1)) * ((t * env.power(Y, p)) - it(y, p - 1, t) * Y)
        checks["eq2_in_U"].record(lhs == rhs, x=x, s=s, w=w, v=v, lhs=lhs, rhs=rhs)

        # (utx)^p = (usy)^p, each expanded by Hochschild: u^p t^p x^p + (utx)^(p-1)(ut) x
        utx, usy = (u * t) * x, (u * s) * y
        lhs = (u ** p * t ** p) * env.power(X, p) + it(utx, p - 1, u * t) * X
        rhs = (u ** p * s ** p) * env.power(Y, p) + it(usy, p - 1, u * s) * Y
        direct = env.power(env.iota_L(utx), p)
        checks["utx_power_in_U"].record(lhs == rhs == direct, x=x, u=u, lhs=lhs, rhs=rhs, direct=direct)

        # v t s (utx)^(p-1)(ut) x + v u^p t^(p+1) x^(p-1)(s) x
        #   = v t s (usy)^(p-1)(us) y + v u^p s^(p+1) y^(p-1)(t) y                  in L
        lhs = (v * t * s * it(utx, p - 1, u * t)) * x + (v * u ** p * t ** (p + 1) * it(x, p - 1, s)) * x
        rhs = (v * t * s * it(usy, p - 1, u * s)) * y + (v * u ** p * s ** (p + 1) * it(y, p - 1, t)) * y
        checks["eq3_in_L"].record(lhs == rhs, x=x, s=s, w=w, u=u, v=v, lhs=lhs, rhs=rhs)

        # v u^p t^(p+1) (s x^[p] - x^(p-1)(s) x) = v u^p s^(p+1) (t y^[p] - y^(p-1)(t) y)   in L
        lhs = (v * u ** p * t ** (p + 1)) * (s * base.p_power(x) - it(x, p - 1, s) * x)
        rhs = (v * u ** p * s ** (p + 1)) * (t * base.p_power(y) - it(y, p - 1, t) * y)
        checks["final_in_L"].record(lhs == rhs, x=x, s=s, w=w, u=u, v=v, lhs=lhs, rhs=rhs)

    for ch in checks.values():
        report.add(ch.result())
    return report


def verify_loc_axioms(alg: LocalizedAlgebra, trials: int = 25, seed: int = 0) -> Report:
    """The full axiom suite on (R_S, L_S), including [a^[p], b] = ad(a)^p(b)."""
    return verify_axioms(alg, trials=trials, seed=seed)


def verify_loc_envelope_hochschild(alg: LocalizedAlgebra, trials: int = 10, seed: int = 0) -> Report:
    """(s^-1 x)^p = s^(-p-1) (s x^p - x^(p-1)(s) x) in U(R_S, L_S)."""
    rng = random.Random(seed)
    env = localize_envelope(alg, "U")
    base, S, p = alg.base, alg.S, alg.p
    report = Report(f"localized hochschild: {alg}", seed=seed)
    ch = Checker("hochschild_localized_U")
    for _ in range(trials):
        x = base.random_element(rng)
        s = S.random_element(rng)
        lhs = env.power(loc_iota(env, LocElement(alg, s, x)), p)
        X = env.iota_L(x)
        inner = s * env.power(X, p) - base.anchor_iter(x, p - 1, s) * X
        rhs = Fraction(alg.ring.one(), s ** (p + 1)) * inner
        ch.record(lhs == rhs, x=x, s=s, lhs=lhs, rhs=rhs)
    report.add(ch.result())
    return report


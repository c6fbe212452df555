"""Exact arithmetic over F_p[t_1..t_n] and F_p[t_1..t_n]/(t_1^p, ..., t_n^p).

Ring elements are sparse dicts mapping exponent tuples to residues in
``1..p-1``.  Derivations are stored by their values on the generators, and
:class:`Fraction` gives unreduced fractions r/s over the polynomial domain.
Everything here is immutable.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from itertools import product
from typing import Iterable, Sequence

from . import grammar


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    f = 2
    while f * f <= n:
        if n % f == 0:
            return False
        f += 1
    return True


def term_key(exps):
    """Sort key for canonical order: total degree, then lexicographic."""
    return (sum(exps), exps)


class RingMismatch(ValueError):
    pass


@dataclass(frozen=True)
class PolyRing:
    """F_p[t_1..t_n], truncated to t_i^p = 0 when ``truncated`` is set."""

    p: int
    nvars: int = 1
    truncated: bool = False

    def __post_init__(self):
        if not is_prime(self.p):
            raise ValueError("p must be prime")
        if self.nvars < 0:
            raise ValueError("nvars must be non-negative")

    @property
    def var_names(self) -> tuple[str, ...]:
        if self.nvars == 1:
            return ("t",)
        return tuple(f"t{j + 1}" for j in range(self.nvars))

    def __call__(self, value) -> RingElement:
        if isinstance(value, RingElement):
            if value.ring != self:
                raise RingMismatch("element belongs to a different ring")
            return value
        if isinstance(value, int):
            return self.const(value)
        if isinstance(value, str):
            return self.parse(value)
        raise TypeError(f"cannot convert {value!r} into {self}")

    def zero(self) -> RingElement:
        return RingElement(self, {})

    def one(self) -> RingElement:
        return self.const(1)

    def const(self, c: int) -> RingElement:
        c %= self.p
        return RingElement(self, {(0,) * self.nvars: c} if c else {})

    def gen(self, j: int) -> RingElement:
        """The generator t_{j+1} (0-based index)."""
        exps = tuple(1 if k == j else 0 for k in range(self.nvars))
        return self.monomial(exps)

    def gens(self) -> tuple[RingElement, ...]:
        return tuple(self.gen(j) for j in range(self.nvars))

    def monomial(self, exps, coeff: int = 1) -> RingElement:
        exps = tuple(exps)
        if self.truncated and any(e >= self.p for e in exps):
            return self.zero()
        return RingElement(self, {exps: coeff % self.p} if coeff % self.p else {})

    def monomials(self) -> list[tuple[int, ...]]:
        """F_p-basis exponents of a truncated ring, in canonical order."""
        if not self.truncated:
            raise ValueError("only a truncated ring has a finite monomial basis")
        return sorted(product(range(self.p), repeat=self.nvars), key=term_key)

    def dimension(self) -> int:
        if not self.truncated:
            raise ValueError("a polynomial ring is infinite-dimensional")
        return self.p ** self.nvars

    def parse(self, text: str) -> RingElement:
        names = {n: self.gen(j) for j, n in enumerate(self.var_names)}
        if self.nvars == 1:
            names["t1"] = self.gen(0)

        def name(node):
            try:
                return names[node.name]
            except KeyError:
                raise grammar.ParseError(f"unknown variable '{node.name}'", node.column) from None

        return grammar.evaluate(grammar.parse(text), num=self.const, name=name)

    def random_element(self, rng: random.Random, max_terms: int = 3, max_degree: int = 2) -> RingElement:
        top = min(max_degree, self.p - 1) if self.truncated else max_degree
        terms = {}
        for _ in range(rng.randint(0, max_terms)):
            exps = tuple(rng.randint(0, top) for _ in range(self.nvars))
            terms[exps] = (terms.get(exps, 0) + rng.randint(1, self.p - 1)) % self.p
        return RingElement(self, terms)

    def __str__(self):
        base = f"F_{self.p}[{','.join(self.var_names)}]"
        if self.truncated:
            return base + "/(" + ",".join(f"{v}^{self.p}" for v in self.var_names) + ")"
        return base


class RingElement:
    __slots__ = ("ring", "_terms", "_hash")

    def __init__(self, ring: PolyRing, terms: dict):
        p = ring.p
        self.ring = ring
        if ring.truncated:
            self._terms = {e: c % p for e, c in terms.items() if c % p and max(e, default=0) < p}
        else:
            self._terms = {e: c % p for e, c in terms.items() if c % p}
        self._hash = None

    @property
    def terms(self) -> dict:
        return dict(self._terms)

    def items(self):
        return self._terms.items()

    def __len__(self):
        return len(self._terms)

    def __bool__(self):
        return bool(self._terms)

    def is_zero(self) -> bool:
        return not self._terms

    def is_constant(self) -> bool:
        return all(not any(e) for e in self._terms)

    def constant_term(self) -> int:
        return self._terms.get((0,) * self.ring.nvars, 0)

    def degree(self) -> int:
        return max((sum(e) for e in self._terms), default=-1)

    def leading(self):
        """(exponents, coefficient) of the largest term in canonical order."""
        exps = max(self._terms, key=term_key)
        return exps, self._terms[exps]

    def _coerce(self, other):
        if isinstance(other, RingElement):
            if other.ring != self.ring:
                raise RingMismatch(f"cannot combine elements of {self.ring} and {other.ring}")
            return other
        if isinstance(other, int):
            return self.ring.const(other)
        return None

    def __eq__(self, other):
        if isinstance(other, int):
            other = self.ring.const(other)
        if not isinstance(other, RingElement):
            return NotImplemented
        return self.ring == other.ring and self._terms == other._terms

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.ring, frozenset(self._terms.items())))
        return self._hash

    def __add__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        out = dict(self._terms)
        for e, c in other._terms.items():
            out[e] = out.get(e, 0) + c
        return RingElement(self.ring, out)

    __radd__ = __add__

    def __neg__(self):
        return RingElement(self.ring, {e: -c for e, c in self._terms.items()})

    def __sub__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return other - self

    def __mul__(self, other):
        if isinstance(other, int):
            return RingElement(self.ring, {e: c * other for e, c in self._terms.items()})
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        p = self.ring.p
        trunc = self.ring.truncated
        out: dict = {}
        for e1, c1 in self._terms.items():
            for e2, c2 in other._terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                if trunc and max(e, default=0) >= p:
                    continue
                out[e] = (out.get(e, 0) + c1 * c2) % p
        return RingElement(self.ring, out)

    def __rmul__(self, other):
        if isinstance(other, int):
            return self * other
        return NotImplemented

    def __pow__(self, n: int):
        if n < 0:
            raise ValueError("negative exponent")
        result = self.ring.one()
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def frobenius(self) -> RingElement:
        return frobenius(self)

    def partial(self, j: int) -> RingElement:
        """Formal partial derivative with respect to t_{j+1}."""
        out = {}
        for e, c in self._terms.items():
            if e[j]:
                f = e[:j] + (e[j] - 1,) + e[j + 1:]
                out[f] = c * e[j]
        return RingElement(self.ring, out)

    def sorted_terms(self):
        return sorted(self._terms.items(), key=lambda ec: term_key(ec[0]), reverse=True)

    def __str__(self):
        if not self._terms:
            return "0"
        names = self.ring.var_names
        parts = []
        for exps, c in self.sorted_terms():
            factors = [f"{n}^{e}" if e > 1 else n for n, e in zip(names, exps) if e]
            if c != 1 or not factors:
                factors.insert(0, str(c))
            parts.append("*".join(factors))
        return " + ".join(parts)

    def __repr__(self):
        return f"RingElement({self})"


def check_same_ring(*elements):
    rings = {e.ring for e in elements}
    if len(rings) > 1:
        raise RingMismatch("operands belong to different rings")


def ring_arith(op: str, a: RingElement, b=None) -> RingElement:
    """Dispatch form of the ring operations: ``add``, ``mul``, ``pow``, ``neg``."""
    if op == "neg":
        return -a
    if op == "pow":
        return a ** b
    check_same_ring(a, b)
    if op == "add":
        return a + b
    if op == "mul":
        return a * b
    raise ValueError(f"unknown ring operation {op!r}")


def frobenius(r: RingElement) -> RingElement:
    """r -> r^p, computed as exponent scaling (coefficients are fixed by Frobenius on F_p)."""
    p = r.ring.p
    return RingElement(r.ring, {tuple(p * x for x in e): c for e, c in r.items()})


def divide_exact(a: RingElement, b: RingElement):
    """Return q with a = q*b, or None if b does not divide a.

    A single polynomial is a Groebner basis of the ideal it generates, so
    ordinary division by leading terms decides divisibility.
    """
    check_same_ring(a, b)
    if not b:
        raise ZeroDivisionError("division by the zero polynomial")
    if a.ring.truncated:
        raise ValueError("exact division is only offered in the polynomial domain")
    p = a.ring.p
    lb, cb = b.leading()
    inv = pow(cb, -1, p)
    q = a.ring.zero()
    rem = a
    while rem:
        lr, cr = rem.leading()
        if any(x < y for x, y in zip(lr, lb)):
            return None
        t = a.ring.monomial(tuple(x - y for x, y in zip(lr, lb)), cr * inv)
        q = q + t
        rem = rem - t * b
    return q


class Derivation:
    """A K-linear derivation of the ring, determined by images of generators."""

    __slots__ = ("ring", "images")

    def __init__(self, ring: PolyRing, images: Sequence[RingElement]):
        images = tuple(ring(x) for x in images)
        if len(images) != ring.nvars:
            raise ValueError(f"need {ring.nvars} generator images, got {len(images)}")
        self.ring = ring
        self.images = images

    @classmethod
    def zero(cls, ring: PolyRing) -> Derivation:
        return cls(ring, [ring.zero()] * ring.nvars)

    @classmethod
    def partial(cls, ring: PolyRing, j: int) -> Derivation:
        return cls(ring, [ring.one() if k == j else ring.zero() for k in range(ring.nvars)])

    def __call__(self, r: RingElement) -> RingElement:
        return derive(self, r)

    def __eq__(self, other):
        if not isinstance(other, Derivation):
            return NotImplemented
        return self.ring == other.ring and self.images == other.images

    def __hash__(self):
        return hash((self.ring, self.images))

    def __bool__(self):
        return any(self.images)

    def __add__(self, other):
        return Derivation(self.ring, [a + b for a, b in zip(self.images, other.images)])

    def __neg__(self):
        return Derivation(self.ring, [-a for a in self.images])

    def __sub__(self, other):
        return self + (-other)

    def __rmul__(self, r):
        # left R-module structure: (r d)(s) = r d(s)
        r = self.ring(r)
        return Derivation(self.ring, [r * a for a in self.images])

    def __str__(self):
        if not self:
            return "0"
        parts = []
        for name, img in zip(self.ring.var_names, self.images):
            if img:
                parts.append(f"({img})*d/d{name}")
        return " + ".join(parts)

    __repr__ = __str__


def derive(d: Derivation, r: RingElement) -> RingElement:
    """Leibniz extension: d(r) = sum_j dr/dt_j * d(t_j)."""
    check_same_ring(d.images[0] if d.images else r, r)
    out = r.ring.zero()
    for j, img in enumerate(d.images):
        if img:
            out = out + r.partial(j) * img
    return out


def derive_iter(d: Derivation, k: int, r: RingElement) -> RingElement:
    if k < 0:
        raise ValueError("iteration count must be non-negative")
    for _ in range(k):
        if not r:
            break
        r = derive(d, r)
    return r


def derivation_bracket(d1: Derivation, d2: Derivation) -> Derivation:
    """Commutator [d1, d2] = d1 d2 - d2 d1."""
    ring = d1.ring
    return Derivation(ring, [derive(d1, derive(d2, t)) - derive(d2, derive(d1, t)) for t in ring.gens()])


def derivation_pth_power(d: Derivation) -> Derivation:
    """d^p, which is again a derivation in characteristic p."""
    ring = d.ring
    return Derivation(ring, [derive_iter(d, ring.p, t) for t in ring.gens()])


class Fraction:
    """Unreduced fraction num/den over the polynomial domain.

    Equality is cross multiplication; nothing is cancelled.
    """

    __slots__ = ("num", "den")

    def __init__(self, num, den=1):
        if isinstance(num, RingElement):
            ring = num.ring
        elif isinstance(den, RingElement):
            ring = den.ring
        else:
            raise TypeError("a Fraction needs at least one ring element")
        if ring.truncated:
            raise ValueError("fractions need an integral domain; the ring is truncated")
        num, den = ring(num), ring(den)
        if not den:
            raise ZeroDivisionError("zero denominator")
        self.num = num
        self.den = den

    @property
    def ring(self) -> PolyRing:
        return self.num.ring

    def _coerce(self, other):
        if isinstance(other, Fraction):
            return other
        if isinstance(other, (RingElement, int)):
            return Fraction(self.ring(other), self.ring.one())
        return None

    def __bool__(self):
        return bool(self.num)

    def __eq__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return fraction_eq(self, other)

    __hash__ = None

    def __add__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        if self.den == other.den:
            return Fraction(self.num + other.num, self.den)
        return Fraction(self.num * other.den + other.num * self.den, self.den * other.den)

    __radd__ = __add__

    def __neg__(self):
        return Fraction(-self.num, self.den)

    def __sub__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return other - self

    def __mul__(self, other):
        if isinstance(other, int):
            return Fraction(self.num * other, self.den)
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return Fraction(self.num * other.num, self.den * other.den)

    def __rmul__(self, other):
        if isinstance(other, (int, RingElement)):
            return self * other
        return NotImplemented

    def __pow__(self, n: int):
        if n < 0:
            return Fraction(self.den ** -n, self.num ** -n)
        return Fraction(self.num ** n, self.den ** n)

    def inverse(self) -> Fraction:
        return Fraction(self.den, self.num)

    def __str__(self):
        def wrap(r):
            return f"({r})" if len(r) > 1 else str(r)

        return f"{wrap(self.num)} / {wrap(self.den)}"

    def __repr__(self):
        return f"Fraction({self})"


def fraction_arith(op: str, a: Fraction, b=None) -> Fraction:
    if op == "add":
        return a + b
    if op == "sub":
        return a - b
    if op == "mul":
        return a * b
    if op == "neg":
        return -a
    if op == "pow":
        return a ** b
    raise ValueError(f"unknown fraction operation {op!r}")


def fraction_eq(a: Fraction, b: Fraction) -> bool:
    check_same_ring(a.num, b.num)
    return a.num * b.den == b.num * a.den


def derivation_on_fraction(d: Derivation, a: Fraction) -> Fraction:
    """Quotient rule: d(r/s) = (d(r) s - r d(s)) / s^2."""
    if a.den.is_constant():
        # den is a unit of F_p; keep it
        return Fraction(derive(d, a.num), a.den)
    ds = derive(d, a.den)
    if not ds:
        return Fraction(derive(d, a.num), a.den)
    return Fraction(derive(d, a.num) * a.den - a.num * ds, a.den * a.den)


def parse_fraction(ring: PolyRing, text: str) -> Fraction:
    """Parse ``num / den`` (or a bare polynomial)."""
    if "/" in text:
        num, den = text.split("/", 1)
        return Fraction(ring.parse(num), ring.parse(den))
    return Fraction(ring.parse(text), ring.one())


def random_poly_nonzero(ring: PolyRing, rng: random.Random, **kw) -> RingElement:
    while True:
        r = ring.random_element(rng, **kw)
        if r:
            return r


def product_of(elements: Iterable[RingElement], ring: PolyRing) -> RingElement:
    out = ring.one()
    for e in elements:
        out = out * e
    return out

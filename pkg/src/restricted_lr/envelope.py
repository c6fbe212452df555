"""Universal envelopes U(R, L) and restricted envelopes u(R, L).

Elements are left R-linear combinations of ordered PBW monomials, stored as
``{exponent tuple: scalar}``.  Two independent normal-form engines live here:

* :meth:`Envelope.multiply` inserts one letter at a time into an ordered
  monomial, memoizing ``x_i * monomial``; this is the fast path.
* :func:`straighten` is a literal worklist rewriter on words using the rules
  R1 (letter/scalar swap), R2 (letter/letter swap), R3 (merge) and, for
  u(R, L), R4 (x_i^p -> x_i^[p]).

In u-mode a product is computed in U and then reduced by replacing
x_i^p with x_i^[p] wherever an exponent reaches p.
"""

from __future__ import annotations

import heapq
import random
from dataclasses import dataclass
from itertools import product
from typing import Callable, Iterable

from .coeffring import Fraction, RingElement, term_key
from .lierinehart import LieRinehartAlgebra, LRElement, LRPresentation
from .report import Checker, Report


@dataclass(frozen=True)
class Letter:
    """The generator iota_L(x_{index+1}) inside a word."""

    index: int


def _axpy(acc: dict, coef, d: dict) -> None:
    for m, c in d.items():
        v = c if coef is None else coef * c
        if m in acc:
            acc[m] = acc[m] + v
        else:
            acc[m] = v


def _clean(d: dict) -> dict:
    return {m: c for m, c in d.items() if c}


class Envelope:
    """U(R, L) (``mode="U"``) or u(R, L) (``mode="u"``) of a presentation.

    ``lift`` and ``derive`` let the same engine run over another scalar ring
    (the localization uses fractions); by default scalars are ring elements
    and ``derive(i, s)`` applies the anchor of x_i.
    """

    def __init__(self, pres: LRPresentation, mode: str = "U",
                 lift: Callable | None = None, derive: Callable | None = None):
        if mode not in ("U", "u"):
            raise ValueError("mode must be 'U' or 'u'")
        self.pres = pres
        self.mode = mode
        self.restricted = mode == "u"
        self.p = pres.p
        self.rank = pres.rank
        self.ring = pres.ring
        self._lift = lift or (lambda r: r)
        self._derive = derive or (lambda i, s: pres.anchor_img[i](s))
        self.one_scalar = self._lift(self.ring.one())
        self._sc = [[[(k, self._lift(c)) for k, c in enumerate(pres.bracket_sc[i][j]) if c]
                     for j in range(self.rank)] for i in range(self.rank)]
        self._pop = [[(k, self._lift(c)) for k, c in enumerate(pres.pop_img[i]) if c]
                     for i in range(self.rank)]
        self.unit = (0,) * self.rank
        self._letter_cache: dict = {}
        self._reduce_cache: dict = {}
        self._z_cache: dict = {}

    def __str__(self):
        name = "u" if self.restricted else "U"
        return f"{name}(R, L) for {self.pres}"

    # -- construction -------------------------------------------------------------
    def coerce_scalar(self, s):
        if isinstance(s, int):
            return self._lift(self.ring.const(s))
        if isinstance(s, RingElement):
            return self._lift(s)
        return s

    def element(self, terms: dict) -> EnvElement:
        d = _clean({tuple(m): self.coerce_scalar(c) for m, c in terms.items()})
        if self.restricted:
            d = self._reduce(d)
        return EnvElement(self, d)

    def zero(self) -> EnvElement:
        return EnvElement(self, {})

    def one(self) -> EnvElement:
        return EnvElement(self, {self.unit: self.one_scalar})

    def scalar(self, r) -> EnvElement:
        """iota_R(r)."""
        s = self.coerce_scalar(r)
        return EnvElement(self, {self.unit: s} if s else {})

    def letter(self, i: int) -> EnvElement:
        """iota_L(x_{i+1})."""
        if not 0 <= i < self.rank:
            raise IndexError(f"unknown letter index {i}")
        return self.monomial(tuple(1 if k == i else 0 for k in range(self.rank)))

    def letters(self) -> list[EnvElement]:
        return [self.letter(i) for i in range(self.rank)]

    def monomial(self, exps, coef=1) -> EnvElement:
        return self.element({tuple(exps): coef})

    def iota_L(self, x: LRElement) -> EnvElement:
        return self.element({self._unit_vec(i): c for i, c in enumerate(x.coeffs) if c})

    def _unit_vec(self, i):
        return tuple(1 if k == i else 0 for k in range(self.rank))

    # -- the U engine ---------------------------------------------------------------
    def _letter_mono(self, i: int, m: tuple) -> dict:
        """Normal form (in U) of x_i * m for an ordered monomial m."""
        key = (i, m)
        hit = self._letter_cache.get(key)
        if hit is not None:
            return hit
        j = next((k for k, e in enumerate(m) if e), None)
        if j is None or i <= j:
            out = {m[:i] + (m[i] + 1,) + m[i + 1:]: self.one_scalar}
        else:
            # x_i x_j m1 = x_j (x_i m1) + [x_i, x_j] m1
            m1 = m[:j] + (m[j] - 1,) + m[j + 1:]
            out = self._letter_dict(j, self._letter_mono(i, m1))
            for k, c in self._sc[i][j]:
                _axpy(out, c, self._letter_mono(k, m1))
            out = _clean(out)
        self._letter_cache[key] = out
        return out

    def _letter_dict(self, j: int, d: dict) -> dict:
        """x_j * sum s m = sum (s x_j m + eps_j(s) m)."""
        out: dict = {}
        for m, s in d.items():
            _axpy(out, s, self._letter_mono(j, m))
            ds = self._derive(j, s)
            if ds:
                out[m] = out[m] + ds if m in out else ds
        return _clean(out)

    def _mono_dict(self, m: tuple, d: dict) -> dict:
        for i in range(self.rank - 1, -1, -1):
            for _ in range(m[i]):
                d = self._letter_dict(i, d)
        return d

    def _mul(self, a: dict, b: dict) -> dict:
        out: dict = {}
        for m, r in a.items():
            _axpy(out, r, self._mono_dict(m, b))
        out = _clean(out)
        if self.restricted:
            out = self._reduce(out)
        return out

    # -- the u quotient ---------------------------------------------------------------
    def _reduce_mono(self, m: tuple) -> dict:
        hit = self._reduce_cache.get(m)
        if hit is not None:
            return hit
        p = self.p
        i = next((k for k, e in enumerate(m) if e >= p), None)
        if i is None:
            out = {m: self.one_scalar}
        else:
            # m = A x_i^p rest with A the letters before i; x_i^p -> x_i^[p]
            head = m[:i] + (0,) * (self.rank - i)
            rest = (0,) * i + (m[i] - p,) + m[i + 1:]
            inner: dict = {}
            for k, c in self._pop[i]:
                _axpy(inner, c, self._letter_mono(k, rest))
            out = self._reduce(self._mono_dict(head, _clean(inner)))
        self._reduce_cache[m] = out
        return out

    def _reduce(self, d: dict) -> dict:
        if all(max(m, default=0) < self.p for m in d):
            return d
        out: dict = {}
        for m, s in d.items():
            _axpy(out, s, self._reduce_mono(m))
        return _clean(out)

    # -- public operations -------------------------------------------------------------
    def multiply(self, a: EnvElement, b: EnvElement) -> EnvElement:
        if a.env is not self or b.env is not self:
            raise ValueError("operands belong to different envelopes (mode mismatch?)")
        return EnvElement(self, self._mul(a.terms, b.terms))

    def power(self, a: EnvElement, n: int) -> EnvElement:
        out = self.one()
        for _ in range(n):
            out = self.multiply(out, a)
        return out

    def commutator(self, a: EnvElement, b: EnvElement) -> EnvElement:
        return self.multiply(a, b) - self.multiply(b, a)

    def central_z(self, i: int) -> EnvElement:
        """z_i = x_i^p - iota_L(x_i^[p])."""
        pop = self.pres.pop_img[i]
        return self.monomial(tuple(self.p if k == i else 0 for k in range(self.rank))) - \
            self.element({self._unit_vec(k): c for k, c in enumerate(pop) if c})

    def restricted_basis(self) -> list[tuple]:
        """All exponent vectors with entries < p, in canonical (ascending) order."""
        return sorted(product(range(self.p), repeat=self.rank), key=term_key)

    # -- the alternate basis z^d x^e ------------------------------------------------------
    def z_expand(self, d: tuple, e: tuple) -> dict:
        """z_1^d_1 ... z_m^d_m x^e as a U-normal form."""
        key = (d, e)
        hit = self._z_cache.get(key)
        if hit is None:
            out = {self.unit: self.one_scalar}
            for i in range(self.rank):
                zi = self.central_z(i).terms
                for _ in range(d[i]):
                    out = self._mul(out, zi)
            hit = self._mul(out, {e: self.one_scalar})
            self._z_cache[key] = hit
        return hit

    def to_z_basis(self, a: EnvElement) -> ZCombination:
        if self.restricted:
            raise ValueError("the z-basis lives in U(R, L); use mode 'U'")
        p = self.p
        rest = dict(a.terms)
        out: dict = {}
        while rest:
            top = max(rest, key=term_key)
            r = rest[top]
            d = tuple(x // p for x in top)
            e = tuple(x % p for x in top)
            out[(d, e)] = out[(d, e)] + r if (d, e) in out else r
            sub: dict = {}
            _axpy(sub, -r, self.z_expand(d, e))
            _axpy(rest, None, sub)
            rest = _clean(rest)
        return ZCombination(self, _clean(out))

    def from_z_basis(self, z: ZCombination) -> EnvElement:
        out: dict = {}
        for (d, e), r in z.terms.items():
            _axpy(out, r, self.z_expand(d, e))
        return EnvElement(self, _clean(out))

    # -- printing -----------------------------------------------------------------------
    def mono_str(self, m: tuple) -> str:
        parts = [f"{n}^{e}" if e > 1 else n for n, e in zip(self.pres.names, m) if e]
        return "*".join(parts)


def _scalar_str(s) -> str:
    return str(s)


def _needs_parens(s) -> bool:
    if isinstance(s, RingElement):
        return len(s) > 1
    return True


class EnvElement:
    """Element of U(R, L) or u(R, L) with coefficients on the left."""

    __slots__ = ("env", "terms")

    def __init__(self, env: Envelope, terms: dict):
        self.env = env
        self.terms = terms

    def _same(self, other):
        if not isinstance(other, EnvElement):
            return False
        if other.env is not self.env:
            raise ValueError("operands belong to different envelopes (mode mismatch?)")
        return True

    def __add__(self, other):
        if not self._same(other):
            return NotImplemented
        out = dict(self.terms)
        _axpy(out, None, other.terms)
        return EnvElement(self.env, _clean(out))

    def __neg__(self):
        return EnvElement(self.env, {m: -c for m, c in self.terms.items()})

    def __sub__(self, other):
        if not self._same(other):
            return NotImplemented
        return self + (-other)

    def __mul__(self, other):
        if isinstance(other, EnvElement):
            return self.env.multiply(self, other)
        if isinstance(other, (int, RingElement, Fraction)):
            return self.env.multiply(self, self.env.scalar(other))
        return NotImplemented

    def __rmul__(self, other):
        # scalar on the left: the free left R-module structure
        if isinstance(other, (int, RingElement, Fraction)):
            s = self.env.coerce_scalar(other)
            return EnvElement(self.env, _clean({m: s * c for m, c in self.terms.items()}))
        return NotImplemented

    def __pow__(self, n: int):
        return self.env.power(self, n)

    def __eq__(self, other):
        if not isinstance(other, EnvElement):
            return NotImplemented
        if self.env is not other.env:
            return False
        if self.terms.keys() != other.terms.keys():
            return False
        return all(self.terms[m] == other.terms[m] for m in self.terms)

    __hash__ = None

    def __bool__(self):
        return bool(self.terms)

    def coefficient(self, m) -> object:
        return self.terms.get(tuple(m), self.env.coerce_scalar(0))

    def is_scalar(self) -> bool:
        return all(m == self.env.unit for m in self.terms)

    def scalar_part(self):
        return self.coefficient(self.env.unit)

    def degree(self) -> int:
        return max((sum(m) for m in self.terms), default=-1)

    def monomials(self) -> list[tuple]:
        return sorted(self.terms, key=term_key, reverse=True)

    def __str__(self):
        if not self.terms:
            return "0"
        parts = []
        for m in self.monomials():
            c = self.terms[m]
            mono = self.env.mono_str(m)
            if not mono:
                parts.append(_scalar_str(c))
            elif c == 1:
                parts.append(mono)
            else:
                cs = _scalar_str(c)
                parts.append(f"({cs})*{mono}" if _needs_parens(c) else f"{cs}*{mono}")
        return " + ".join(parts)

    def __repr__(self):
        return f"EnvElement({self})"


class ZCombination:
    """sum r * z^d x^e over the alternate basis (0 <= e_i < p)."""

    def __init__(self, env: Envelope, terms: dict):
        self.env = env
        self.terms = terms

    def __eq__(self, other):
        if not isinstance(other, ZCombination):
            return NotImplemented
        return self.terms.keys() == other.terms.keys() and all(self.terms[k] == other.terms[k] for k in self.terms)

    __hash__ = None

    def filtration_degree(self) -> int:
        p = self.env.p
        return max((p * sum(d) + sum(e) for d, e in self.terms), default=-1)

    def __str__(self):
        if not self.terms:
            return "0"
        env = self.env
        znames = ["z"] if env.rank == 1 else [f"z{i + 1}" for i in range(env.rank)]
        p = env.p

        def key(de):
            d, e = de
            return term_key(tuple(p * a + b for a, b in zip(d, e)))

        parts = []
        for d, e in sorted(self.terms, key=key, reverse=True):
            c = self.terms[(d, e)]
            factors = [f"{n}^{k}" if k > 1 else n for n, k in zip(znames, d) if k]
            xs = env.mono_str(e)
            if xs:
                factors.append(xs)
            mono = "*".join(factors)
            if not mono:
                parts.append(_scalar_str(c))
            elif c == 1:
                parts.append(mono)
            else:
                cs = _scalar_str(c)
                parts.append(f"({cs})*{mono}" if _needs_parens(c) else f"{cs}*{mono}")
        return " + ".join(parts)


# -- literal rewriting ----------------------------------------------------------------------
def _push_left(env: Envelope, letters: tuple, s) -> list:
    """Rule R1 repeatedly: letters * s = sum (scalar, subword), scalar leftmost."""
    out = [(s, ())]
    for x in reversed(letters):
        nxt = []
        for c, suf in out:
            nxt.append((c, (x,) + suf))
            dc = env._derive(x, c)
            if dc:
                nxt.append((dc, suf))
        out = nxt
    return out


def straighten(env: Envelope, word: Iterable) -> EnvElement:
    """Rewrite a word of scalars and :class:`Letter` items to PBW normal form.

    Interior scalars are pushed to the left by R1 at once.  Then the worklist
    repeatedly takes the longest pending word and applies R2 at its leftmost
    inversion, or (u-mode) R4 at its leftmost run of p equal letters; sorted
    words are merged into the result (R3).  Each step lowers
    (degree, inversions), so the loop terminates.
    """
    one = env.one_scalar
    terms = [(one, ())]
    for item in word:
        if isinstance(item, Letter):
            if not 0 <= item.index < env.rank:
                raise IndexError(f"unknown letter index {item.index}")
            terms = [(c, w + (item.index,)) for c, w in terms]
        else:
            s = env.coerce_scalar(item)
            terms = [(c * c2, w2) for c, w in terms for c2, w2 in _push_left(env, w, s)]

    pending: dict = {}
    heap: list = []

    def push(w, c):
        if not c:
            return
        if w in pending:
            pending[w] = pending[w] + c
        else:
            pending[w] = c
            heapq.heappush(heap, (-len(w), w))

    for c, w in terms:
        push(w, c)

    p = env.p
    result: dict = {}
    while heap:
        _, w = heapq.heappop(heap)
        c = pending.pop(w)
        if not c:
            continue
        q = next((k for k in range(len(w) - 1) if w[k] > w[k + 1]), None)
        if q is not None:
            # R2: x_j x_i -> x_i x_j + [x_j, x_i]
            j, i = w[q], w[q + 1]
            head, tail = w[:q], w[q + 2:]
            push(head + (i, j) + tail, c)
            for k, ck in env._sc[j][i]:
                for s, head2 in _push_left(env, head, ck):
                    push(head2 + (k,) + tail, c * s)
            continue
        if env.restricted:
            q = next((k for k in range(len(w) - p + 1) if w[k] == w[k + p - 1]), None)
            if q is not None:
                # R4: x_i^p -> x_i^[p]
                i = w[q]
                head, tail = w[:q], w[q + p:]
                for k, a in env._pop[i]:
                    for s, head2 in _push_left(env, head, a):
                        push(head2 + (k,) + tail, c * s)
                continue
        m = [0] * env.rank
        for x in w:
            m[x] += 1
        m = tuple(m)
        result[m] = result[m] + c if m in result else c
    return EnvElement(env, _clean(result))


# -- checks -----------------------------------------------------------------------------
def verify_centrality(env: Envelope) -> Report:
    """[z_i, x_j] and [z_i, t_k] must straighten to 0 in U."""
    report = Report(f"centrality: {env}")
    ch = Checker("z_central")
    for i in range(env.rank):
        z = env.central_z(i)
        for j in range(env.rank):
            v = env.commutator(z, env.letter(j))
            ch.record(not v, z=i + 1, x=j + 1, commutator=v)
        for k, t in enumerate(env.ring.gens()):
            v = env.commutator(z, env.scalar(t))
            ch.record(not v, z=i + 1, t=k + 1, commutator=v)
    report.add(ch.result())
    return report


def restricted_dimension(env: Envelope) -> dict:
    """Rank over R and F_p-dimension of u(R, L) over a truncated ring.

    Closure is certified by multiplying every pair of basis monomials and
    every basis monomial by every ring generator, on both sides.
    """
    if not env.restricted:
        raise ValueError("dimension counting needs the restricted envelope")
    if not env.ring.truncated:
        raise ValueError("dimension counting needs a truncated coefficient ring")
    basis = env.restricted_basis()
    allowed = set(basis)
    elems = [env.monomial(m) for m in basis]
    scalars = [env.scalar(t) for t in env.ring.gens()]
    closed = True
    for a in elems:
        for b in elems + scalars:
            for prod_ in (a * b, b * a):
                if not set(prod_.terms) <= allowed:
                    closed = False
    rank = len(basis)
    return {"rank": rank, "dimension": env.ring.dimension() * rank, "closed": closed}


def verify_hochschild_in_envelope(pres: LRPresentation, trials: int = 25, seed: int = 0,
                                  env: Envelope | None = None) -> Report:
    """(r x)^p = r^p x^p + eps(r x)^(p-1)(r) x in U for random r and basis x.

    The left side comes from straightening products; the right side is
    written down directly as a normal form.
    """
    if trials < 1:
        raise ValueError("trials must be at least 1")
    env = env or Envelope(pres, "U")
    rng = random.Random(seed)
    p = pres.p
    report = Report(f"hochschild: {env}", seed=seed)
    ch = Checker("hochschild_in_U")
    for t in range(trials):
        i = t % pres.rank
        r = pres.random_scalar(rng)
        x = env.letter(i)
        lhs = env.power(r * x, p)
        xp = tuple(p if k == i else 0 for k in range(pres.rank))
        tail = (r * pres.anchor_img[i])
        coeff = r
        for _ in range(p - 1):
            coeff = tail(coeff)
        rhs = env.element({xp: r ** p}) + env.element({env._unit_vec(i): coeff})
        ch.record(lhs == rhs, r=r, x=pres.names[i], lhs=lhs, rhs=rhs)
    report.add(ch.result())
    return report


class EnvelopeLRView(LieRinehartAlgebra):
    """u(R, L) as a restricted Lie-Rinehart algebra under the commutator.

    Only elements a with a r - r a in R for all r carry an anchor; on those
    the anchor is that commutator, the p-map is the associative p-th power.
    """

    def __init__(self, env: Envelope):
        self.env = env
        self.p = env.p

    def __str__(self):
        return f"commutator algebra of {self.env}"

    def zero(self):
        return self.env.zero()

    def basis(self):
        return self.env.letters()

    def scalar_gens(self):
        return self.env.ring.gens()

    def lift_scalar(self, r):
        return self.env.coerce_scalar(r)

    def scale(self, r, a):
        return r * a

    def bracket(self, a, b):
        return self.env.commutator(a, b)

    def anchor(self, a, r):
        v = self.env.commutator(a, self.env.scalar(r))
        if not v.is_scalar():
            raise ValueError(f"[{a}, {r}] is not in R; no anchor")
        return v.scalar_part()

    def p_power(self, a):
        return self.env.power(a, self.p)

    def random_scalar(self, rng):
        return self.env.pres.random_scalar(rng)

    def random_element(self, rng):
        return self.env.iota_L(self.env.pres.random_element(rng))

    def iota_L_images(self):
        return self.env.letters()


def envelope_as_lr(pres: LRPresentation) -> EnvelopeLRView:
    return EnvelopeLRView(Envelope(pres, "u"))

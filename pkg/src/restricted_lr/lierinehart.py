"""Restricted Lie-Rinehart algebras presented on a free module basis.

A presentation fixes structure constants ``c[i][j][k]`` with
``[x_i, x_j] = sum_k c[i][j][k] x_k``, the anchor images ``eps(x_i)`` as
derivations, and the p-map on the basis ``x_i^[p] = sum_k a[i][k] x_k``.
Everything else (bracket of arbitrary elements, the p-map of sums and of
scalar multiples) is derived from the anchor-Leibniz rule, Hochschild's
identity and Jacobson's additivity formula.

:class:`LieRinehartAlgebra` is the duck-typed interface shared with the
localized algebra and with the envelope viewed under its commutator; the
axiom suite in :func:`verify_axioms` only talks to that interface.
"""

from __future__ import annotations

import random
from typing import Sequence

from .coeffring import Derivation, PolyRing, RingElement, derivation_pth_power
from .report import Checker, Report


class AxiomError(ValueError):
    """Raised when a presentation is admitted with checking on and fails."""

    def __init__(self, report: Report):
        failed = ", ".join(c.name for c in report.checks if not c.passed)
        super().__init__(f"presentation fails: {failed}")
        self.report = report


class LieRinehartAlgebra:
    """Operations every restricted Lie-Rinehart algebra in this package offers.

    Subclasses supply ``p``, ``zero``, ``basis``, ``scalar_gens``, ``scale``,
    ``bracket``, ``anchor`` (apply eps(a) to a scalar), ``p_power`` and the
    random generators.  Elements must support ``+``, ``-`` and ``int * a``.
    """

    p: int

    def lift_scalar(self, r: RingElement):
        return r

    def equal(self, a, b) -> bool:
        return a == b

    def is_zero(self, a) -> bool:
        return self.equal(a, self.zero())

    def random_elements(self, rng: random.Random, k: int) -> list:
        return [self.random_element(rng) for _ in range(k)]

    def anchor_iter(self, a, k: int, r):
        for _ in range(k):
            r = self.anchor(a, r)
        return r

    def ad_power(self, a, k: int, b):
        for _ in range(k):
            b = self.bracket(a, b)
        return b

    def lambda_terms(self, a, b) -> list:
        """Jacobson's lambda_1..lambda_{p-1}.

        i * lambda_i(a, b) is the coefficient of T^(i-1) in ad(T a + b)^(p-1)(a),
        computed in L[T] as a list indexed by the power of T.
        """
        p = self.p
        poly = [a]
        for _ in range(p - 1):
            nxt = [self.zero() for _ in range(len(poly) + 1)]
            for k, c in enumerate(poly):
                if self.is_zero(c):
                    continue
                nxt[k + 1] = nxt[k + 1] + self.bracket(a, c)
                nxt[k] = nxt[k] + self.bracket(b, c)
            poly = nxt
        return [pow(i, -1, p) * poly[i - 1] for i in range(1, p)]

    def lambda_sum(self, a, b):
        out = self.zero()
        for term in self.lambda_terms(a, b):
            out = out + term
        return out


class LRElement:
    """An element sum_i coeffs[i] x_i of a presented algebra."""

    __slots__ = ("pres", "coeffs")

    def __init__(self, pres: LRPresentation, coeffs: Sequence):
        coeffs = tuple(pres.ring(c) for c in coeffs)
        if len(coeffs) != pres.rank:
            raise ValueError(f"expected {pres.rank} coordinates, got {len(coeffs)}")
        self.pres = pres
        self.coeffs = coeffs

    def _check(self, other):
        if not isinstance(other, LRElement):
            return False
        if other.pres is not self.pres and other.pres != self.pres:
            raise ValueError("elements of different presentations")
        return True

    def __add__(self, other):
        if not self._check(other):
            return NotImplemented
        return LRElement(self.pres, [a + b for a, b in zip(self.coeffs, other.coeffs)])

    def __sub__(self, other):
        if not self._check(other):
            return NotImplemented
        return LRElement(self.pres, [a - b for a, b in zip(self.coeffs, other.coeffs)])

    def __neg__(self):
        return LRElement(self.pres, [-a for a in self.coeffs])

    def __rmul__(self, r):
        if isinstance(r, (int, RingElement)):
            return LRElement(self.pres, [r * a for a in self.coeffs])
        return NotImplemented

    def __eq__(self, other):
        if not isinstance(other, LRElement):
            return NotImplemented
        return self.pres == other.pres and self.coeffs == other.coeffs

    def __hash__(self):
        return hash(self.coeffs)

    def __bool__(self):
        return any(self.coeffs)

    def __str__(self):
        parts = []
        for name, c in zip(self.pres.names, self.coeffs):
            if not c:
                continue
            if c == 1:
                parts.append(name)
            elif len(c) > 1:
                parts.append(f"({c})*{name}")
            else:
                parts.append(f"{c}*{name}")
        return " + ".join(parts) if parts else "0"

    def __repr__(self):
        return f"LRElement({self})"


def _default_names(rank):
    return ("D",) if rank == 1 else tuple(f"x{i + 1}" for i in range(rank))


class LRPresentation(LieRinehartAlgebra):
    """A restricted Lie-Rinehart algebra on a free left R-module of finite rank.

    ``bracket_sc`` maps ``(i, j)`` to the coordinate list of ``[x_i, x_j]``
    (0-based indices; missing pairs are zero).  ``anchor_img[i]`` is a
    :class:`Derivation` or its list of generator images, ``pop_img[i]`` the
    coordinates of ``x_i^[p]``.  With ``check`` set the presentation must pass
    :func:`verify_axioms` or :class:`AxiomError` is raised.
    """

    def __init__(self, ring: PolyRing, rank: int, bracket_sc=None, anchor_img=None, pop_img=None,
                 names=None, check: bool = True, trials: int = 25, seed: int = 0):
        self.ring = ring
        self.p = ring.p
        self.rank = rank
        self.names = tuple(names) if names else _default_names(rank)
        zero = ring.zero()
        sc = [[[zero] * rank for _ in range(rank)] for _ in range(rank)]
        for (i, j), vec in (bracket_sc or {}).items():
            if not (0 <= i < rank and 0 <= j < rank) or len(vec) != rank:
                raise IndexError(f"structure constant index ({i}, {j}) out of range")
            sc[i][j] = [ring(c) for c in vec]
        self.bracket_sc = tuple(tuple(tuple(v) for v in row) for row in sc)
        anchors = []
        for i in range(rank):
            d = anchor_img[i] if anchor_img is not None else None
            if d is None:
                d = Derivation.zero(ring)
            elif not isinstance(d, Derivation):
                d = Derivation(ring, d)
            anchors.append(d)
        self.anchor_img = tuple(anchors)
        pops = []
        for i in range(rank):
            v = pop_img[i] if pop_img is not None else None
            pops.append(tuple(ring(c) for c in v) if v is not None else (zero,) * rank)
        self.pop_img = tuple(pops)
        self._nonzero_sc = {
            (i, j): [(k, c) for k, c in enumerate(self.bracket_sc[i][j]) if c]
            for i in range(rank) for j in range(rank)
        }
        if check:
            report = verify_axioms(self, trials=trials, seed=seed)
            if not report.passed:
                raise AxiomError(report)

    def __eq__(self, other):
        if not isinstance(other, LRPresentation):
            return NotImplemented
        return (self.ring, self.rank, self.bracket_sc, self.anchor_img, self.pop_img) == (
            other.ring, other.rank, other.bracket_sc, other.anchor_img, other.pop_img)

    def __hash__(self):
        return hash((self.ring, self.rank, self.bracket_sc, self.anchor_img, self.pop_img))

    def replace(self, **changes) -> LRPresentation:
        """Copy with some of bracket_sc/anchor_img/pop_img swapped out (unchecked)."""
        sc = {(i, j): self.bracket_sc[i][j] for i in range(self.rank) for j in range(self.rank)}
        kw = dict(bracket_sc=sc, anchor_img=self.anchor_img, pop_img=self.pop_img, names=self.names, check=False)
        kw.update(changes)
        return LRPresentation(self.ring, self.rank, **kw)

    # -- elements -----------------------------------------------------------------
    def element(self, coeffs) -> LRElement:
        return LRElement(self, coeffs)

    def zero(self) -> LRElement:
        return LRElement(self, [self.ring.zero()] * self.rank)

    def basis(self) -> list[LRElement]:
        one, zero = self.ring.one(), self.ring.zero()
        return [LRElement(self, [one if k == i else zero for k in range(self.rank)]) for i in range(self.rank)]

    def scalar_gens(self):
        return self.ring.gens()

    def scale(self, r, a: LRElement) -> LRElement:
        return r * a

    def random_scalar(self, rng, nonzero=False):
        deg = min(self.p - 1, 3) if self.ring.truncated else 2
        while True:
            r = self.ring.random_element(rng, max_terms=3, max_degree=deg)
            if r or not nonzero:
                return r

    def random_element(self, rng) -> LRElement:
        return LRElement(self, [self.random_scalar(rng) for _ in range(self.rank)])

    # -- structure ----------------------------------------------------------------
    def lr_anchor(self, a: LRElement) -> Derivation:
        """eps(sum r_i x_i) = sum r_i eps(x_i)."""
        out = Derivation.zero(self.ring)
        for r, d in zip(a.coeffs, self.anchor_img):
            if r:
                out = out + r * d
        return out

    def anchor(self, a: LRElement, r: RingElement) -> RingElement:
        return self.lr_anchor(a)(r)

    def bracket(self, a: LRElement, b: LRElement) -> LRElement:
        """[sum r_i x_i, sum s_j x_j] via bilinearity and the anchor-Leibniz rule."""
        a._check(b)
        out = list(self.zero().coeffs)
        eps = self.anchor_img
        for i, r in enumerate(a.coeffs):
            if not r:
                continue
            for j, s in enumerate(b.coeffs):
                if not s:
                    continue
                sc = self._nonzero_sc[i, j]
                if sc:
                    rs = r * s
                    for k, c in sc:
                        out[k] = out[k] + rs * c
                out[j] = out[j] + r * eps[i](s)
                out[i] = out[i] - s * eps[j](r)
        return LRElement(self, out)

    def _p_power_term(self, r: RingElement, i: int) -> LRElement:
        """(r x_i)^[p] = r^p x_i^[p] + eps(r x_i)^(p-1)(r) x_i."""
        p = self.p
        rp = r ** p
        out = [rp * c for c in self.pop_img[i]]
        d = r * self.anchor_img[i]
        tail = r
        for _ in range(p - 1):
            if not tail:
                break
            tail = d(tail)
        out[i] = out[i] + tail
        return LRElement(self, out)

    def p_power(self, a: LRElement, order: Sequence[int] | None = None) -> LRElement:
        """a^[p] by splitting a = u + v with u the first term and v the tail.

        ``order`` permutes the basis indices before splitting; the result does
        not depend on it.
        """
        idx = list(order) if order is not None else list(range(self.rank))
        terms = [(i, a.coeffs[i]) for i in idx if a.coeffs[i]]
        acc = acc_pow = None
        zero = self.ring.zero()
        for i, r in reversed(terms):
            u = LRElement(self, [r if k == i else zero for k in range(self.rank)])
            pu = self._p_power_term(r, i)
            if acc is None:
                acc, acc_pow = u, pu
            else:
                acc_pow = pu + acc_pow + self.lambda_sum(u, acc)
                acc = u + acc
        return acc_pow if acc_pow is not None else self.zero()

    def from_derivation(self, d: Derivation) -> LRElement:
        """Coordinates of a derivation in Der_K(R) w.r.t. the partials (only for
        the derivation algebra, whose basis is d/dt_1..d/dt_n)."""
        return LRElement(self, d.images)

    def __str__(self):
        return f"restricted Lie-Rinehart algebra of rank {self.rank} over {self.ring}"


# -- module-level operation names ------------------------------------------------
def lr_bracket(a: LRElement, b: LRElement) -> LRElement:
    return a.pres.bracket(a, b)


def lr_anchor(a: LRElement) -> Derivation:
    return a.pres.lr_anchor(a)


def lr_p_power(a: LRElement) -> LRElement:
    return a.pres.p_power(a)


def lambda_terms(a: LRElement, b: LRElement) -> list[LRElement]:
    return a.pres.lambda_terms(a, b)


# -- builders -----------------------------------------------------------------------
def build_derivation_algebra(ring: PolyRing, **kw) -> LRPresentation:
    """Der_K(R) for R = F_p[t_1..t_n] (possibly truncated), free on the partials."""
    n = ring.nvars
    partials = [Derivation.partial(ring, j) for j in range(n)]
    pops = [derivation_pth_power(d).images for d in partials]
    return LRPresentation(ring, n, {}, partials, pops, **kw)


def witt_algebra(p: int, **kw) -> LRPresentation:
    """W(1;1) = Der(F_p[t]/(t^p))."""
    return build_derivation_algebra(PolyRing(p, 1, truncated=True), **kw)


def abelian_algebra(ring: PolyRing, rank: int, toral: bool = False, **kw) -> LRPresentation:
    """R^rank with zero bracket and anchor; x_i^[p] = x_i if ``toral`` else 0."""
    one, zero = ring.one(), ring.zero()
    pops = None
    if toral:
        pops = [[one if k == i else zero for k in range(rank)] for i in range(rank)]
    return LRPresentation(ring, rank, {}, None, pops, **kw)


# -- verification ---------------------------------------------------------------------
AXIOMS = (
    "antisymmetry",
    "jacobi",
    "anchor_lie_map",
    "anchor_leibniz",
    "restricted_ad",
    "jacobson_additivity",
    "hochschild_eq1",
    "anchor_restricted",
)


def verify_axioms(alg: LieRinehartAlgebra, trials: int = 25, seed: int = 0) -> Report:
    """Check the restricted Lie-Rinehart axioms.

    Finite data (stored constants, basis pairs and triples) is checked
    exhaustively, everything else on ``trials`` random instances drawn from
    ``random.Random(seed)``.  Failures are recorded, never raised.
    """
    if trials < 1:
        raise ValueError("trials must be at least 1")
    rng = random.Random(seed)
    p = alg.p
    report = Report(f"axioms: {alg}", seed=seed)
    basis = alg.basis()
    gens = list(alg.scalar_gens())

    ch = Checker("antisymmetry")
    if isinstance(alg, LRPresentation):
        for i in range(alg.rank):
            for j in range(alg.rank):
                lhs = alg.bracket_sc[i][j]
                rhs = tuple(-c for c in alg.bracket_sc[j][i])
                ch.record(lhs == rhs, pair=(i + 1, j + 1), lhs=list(map(str, lhs)), rhs=list(map(str, rhs)))
    for _ in range(trials):
        (a,) = alg.random_elements(rng, 1)
        v = alg.bracket(a, a)
        ch.record(alg.is_zero(v), a=a, bracket=v)
    report.add(ch.result())

    ch = Checker("jacobi")
    triples = [(x, y, z) for x in basis for y in basis for z in basis]
    triples += [tuple(alg.random_elements(rng, 3)) for _ in range(trials)]
    for a, b, c in triples:
        v = alg.bracket(a, alg.bracket(b, c)) + alg.bracket(b, alg.bracket(c, a)) + alg.bracket(c, alg.bracket(a, b))
        ch.record(alg.is_zero(v), a=a, b=b, c=c, jacobiator=v)
    report.add(ch.result())

    ch = Checker("anchor_lie_map")
    pairs = [(x, y) for x in basis for y in basis]
    pairs += [tuple(alg.random_elements(rng, 2)) for _ in range(trials)]
    for a, b in pairs:
        ab = alg.bracket(a, b)
        for r in gens + [alg.random_scalar(rng)]:
            lhs = alg.anchor(ab, r)
            rhs = alg.anchor(a, alg.anchor(b, r)) - alg.anchor(b, alg.anchor(a, r))
            ch.record(lhs == rhs, a=a, b=b, r=r, lhs=lhs, rhs=rhs)
    report.add(ch.result())

    ch = Checker("anchor_leibniz")
    for _ in range(trials):
        a, b = alg.random_elements(rng, 2)
        r = alg.random_scalar(rng)
        lhs = alg.bracket(a, alg.scale(r, b))
        rhs = alg.scale(r, alg.bracket(a, b)) + alg.scale(alg.anchor(a, r), b)
        ch.record(alg.equal(lhs, rhs), a=a, b=b, r=r, lhs=lhs, rhs=rhs)
    report.add(ch.result())

    ch = Checker("restricted_ad")
    cases = [(x, y) for x in basis for y in basis]
    cases += [tuple(alg.random_elements(rng, 2)) for _ in range(trials)]
    for a, b in cases:
        lhs = alg.bracket(alg.p_power(a), b)
        rhs = alg.ad_power(a, p, b)
        ch.record(alg.equal(lhs, rhs), a=a, b=b, lhs=lhs, rhs=rhs)
    report.add(ch.result())

    ch = Checker("jacobson_additivity")
    for _ in range(trials):
        a, b = alg.random_elements(rng, 2)
        lhs = alg.p_power(a + b)
        rhs = alg.p_power(a) + alg.p_power(b) + alg.lambda_sum(a, b)
        ch.record(alg.equal(lhs, rhs), a=a, b=b, lhs=lhs, rhs=rhs)
    report.add(ch.result())

    ch = Checker("hochschild_eq1")
    for t in range(trials):
        # alternate basis elements and general elements
        a = basis[t % len(basis)] if (t % 2 == 0 and basis) else alg.random_elements(rng, 1)[0]
        r = alg.random_scalar(rng)
        ra = alg.scale(r, a)
        lhs = alg.p_power(ra)
        rhs = alg.scale(r ** p, alg.p_power(a)) + alg.scale(alg.anchor_iter(ra, p - 1, r), a)
        ch.record(alg.equal(lhs, rhs), r=r, x=a, lhs=lhs, rhs=rhs)
    report.add(ch.result())

    ch = Checker("anchor_restricted")
    for a in basis + [alg.random_elements(rng, 1)[0] for _ in range(trials)]:
        ap = alg.p_power(a)
        for r in gens + [alg.random_scalar(rng)]:
            lhs = alg.anchor(ap, r)
            rhs = alg.anchor_iter(a, p, r)
            ch.record(lhs == rhs, a=a, r=r, lhs=lhs, rhs=rhs)
    report.add(ch.result())
    return report


def verify_restricted_morphism(images: Sequence, src: LRPresentation, dst: LieRinehartAlgebra,
                               trials: int = 25, seed: int = 0) -> Report:
    """Check that the R-linear map sending x_i to ``images[i]`` is a restricted
    morphism of Lie-Rinehart algebras.

    Restrictedness is checked on the basis alone; the conclusion that this
    suffices is then re-checked on random elements r*x_i, on sums of them and
    on general random elements.
    """
    if len(images) != src.rank:
        raise ValueError("need one image per basis element")
    rng = random.Random(seed)
    report = Report(f"morphism: {src} -> {dst}", seed=seed)

    def f(a: LRElement):
        out = dst.zero()
        for r, img in zip(a.coeffs, images):
            if r:
                out = out + dst.scale(dst.lift_scalar(r), img)
        return out

    basis = src.basis()
    ch = Checker("lie_rinehart_morphism")
    pairs = [(x, y) for x in basis for y in basis]
    pairs += [(src.random_element(rng), src.random_element(rng)) for _ in range(trials)]
    for a, b in pairs:
        lhs = f(src.bracket(a, b))
        rhs = dst.bracket(f(a), f(b))
        ch.record(dst.equal(lhs, rhs), a=a, b=b, lhs=lhs, rhs=rhs)
        for r in list(src.scalar_gens()) + [src.random_scalar(rng)]:
            lhs = dst.anchor(f(a), dst.lift_scalar(r))
            rhs = dst.lift_scalar(src.anchor(a, r))
            ch.record(lhs == rhs, a=a, r=r, anchor_dst=lhs, anchor_src=rhs)
    report.add(ch.result())

    ch = Checker("restricted_on_basis")
    for x in basis:
        lhs = f(src.p_power(x))
        rhs = dst.p_power(f(x))
        ch.record(dst.equal(lhs, rhs), x=x, lhs=lhs, rhs=rhs)
    report.add(ch.result())

    ch = Checker("restricted_on_random")
    for t in range(trials):
        kind = t % 3
        if kind == 0:
            a = src.scale(src.random_scalar(rng), basis[rng.randrange(src.rank)])
        elif kind == 1:
            a = src.zero()
            for _ in range(2):
                a = a + src.scale(src.random_scalar(rng), basis[rng.randrange(src.rank)])
        else:
            a = src.random_element(rng)
        lhs = f(src.p_power(a))
        rhs = dst.p_power(f(a))
        ch.record(dst.equal(lhs, rhs), a=a, lhs=lhs, rhs=rhs)
    premises = report["lie_rinehart_morphism"].passed and report["restricted_on_basis"].passed
    note = "premises hold; lemma predicts pass" if premises else "premises fail; no prediction"
    report.add(ch.result(note))
    return report

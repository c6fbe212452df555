import random

import pytest
import sympy
from hypothesis import strategies as st

from restricted_lr.coeffring import PolyRing, RingElement
from restricted_lr.lierinehart import abelian_algebra, build_derivation_algebra, witt_algebra


ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES, key=lambda s: int(s.split()[1].rstrip(":"))):
            terminalreporter.write_line(line)


@pytest.fixture
def rng():
    return random.Random(1234)


@pytest.fixture
def witt3():
    return witt_algebra(3)


def builtin_algebras(p):
    """Every builtin presentation family at characteristic p."""
    return {
        "witt": witt_algebra(p),
        "der1": build_derivation_algebra(PolyRing(p, 1)),
        "der2_trunc": build_derivation_algebra(PolyRing(p, 2, truncated=True)),
        "der2": build_derivation_algebra(PolyRing(p, 2)),
        "abelian3": abelian_algebra(PolyRing(p, 1), 3),
        "abelian3_toral": abelian_algebra(PolyRing(p, 1, truncated=True), 3, toral=True),
    }


def ring_elements(ring: PolyRing, max_terms=4, max_exp=3):
    top = ring.p - 1 if ring.truncated else max_exp
    exps = st.tuples(*[st.integers(0, top)] * ring.nvars)
    coeffs = st.integers(1, ring.p - 1)
    return st.dictionaries(exps, coeffs, max_size=max_terms).map(lambda d: RingElement(ring, d))


def to_sympy(r: RingElement):
    """The same polynomial as a sympy Poly over GF(p) (truncation not applied)."""
    gens = sympy.symbols(f"s0:{r.ring.nvars}")
    expr = sum((c * sympy.prod([g ** e for g, e in zip(gens, exps)]) for exps, c in r.items()), sympy.Integer(0))
    return sympy.Poly(expr, *gens, modulus=r.ring.p), gens


def from_sympy(ring: PolyRing, poly) -> RingElement:
    return RingElement(ring, {tuple(m): int(c) % ring.p for m, c in poly.terms()})


def random_env_element(env, rng, max_deg, terms=3):
    """A random left R-combination of PBW monomials of total degree <= max_deg."""
    out = env.zero()
    for _ in range(terms):
        deg = rng.randint(0, max_deg)
        exps = [0] * env.rank
        for _ in range(deg):
            exps[rng.randrange(env.rank)] += 1
        out = out + env.monomial(tuple(exps), env.pres.random_scalar(rng))
    return out

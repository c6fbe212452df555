import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from restricted_lr.coeffring import (Derivation, Fraction, PolyRing, RingMismatch, derivation_bracket,
                                     derivation_on_fraction, derivation_pth_power, derive, derive_iter,
                                     divide_exact, fraction_arith, fraction_eq, frobenius, ring_arith)

from conftest import from_sympy, ring_elements, to_sympy

R3T = PolyRing(3, 1, truncated=True)
R3 = PolyRing(3, 1)


def test_ring_spec_rejects_composite_modulus():
    with pytest.raises(ValueError, match="prime"):
        PolyRing(4)


def test_truncated_cube_of_one_plus_t():
    t = R3T.gen(0)
    assert (1 + t) * (1 + t) * (1 + t) == R3T.one()


def test_freshmans_dream_untruncated():
    t = R3.gen(0)
    assert ring_arith("pow", 1 + t, 3) == 1 + t ** 3


def test_additive_inverse_and_mixed_rings():
    a = R3.parse("2*t^2 + t + 1")
    assert ring_arith("add", a, ring_arith("neg", a)) == R3.zero()
    with pytest.raises(RingMismatch):
        ring_arith("mul", a, R3T.gen(0))


def test_canonical_sparse_form_and_printing():
    R = PolyRing(3, 2)
    r = R.parse("t1 t2 + 3*t1 + t1^2 + 2")
    assert str(r) == "t1^2 + t1*t2 + 2"
    assert all(c % 3 for _, c in r.items())
    assert R.parse(str(r)) == r


def test_truncated_exponents_stay_below_p():
    t = R3T.gen(0)
    assert all(max(e) < 3 for e, _ in (t ** 2 * (1 + t)).items())
    assert t ** 3 == 0


@pytest.mark.parametrize("ring,text,expected", [
    (R3, "t", "t^3"),
    (R3T, "t", "0"),
    (R3, "1 + t", "t^3 + 1"),
    (PolyRing(2, 2), "t1 + t2", "t1^2 + t2^2"),
])
def test_frobenius_examples(ring, text, expected):
    assert frobenius(ring.parse(text)) == ring.parse(expected)


def test_derive_examples():
    D = Derivation.partial(R3, 0)
    t = R3.gen(0)
    assert derive(D, t ** 2) == 2 * t
    assert derive_iter(D, 2, t ** 2) == R3.const(2)
    assert derive_iter(D, 3, t ** 2) == 0
    assert derive_iter(D, 0, t ** 2) == t ** 2
    d = Derivation(R3, [1 + t])
    assert derive_iter(d, 2, 1 + t) == 1 + t
    assert derive(d, R3.one()) == 0


def test_leibniz_extension_kills_t_to_the_p_in_truncated_ring():
    d = Derivation(R3T, [R3T.parse("1 + t^2")])
    t = R3T.gen(0)
    # t^p is zero in the quotient and its image p t^(p-1) d(t) vanishes as well
    untrunc = Derivation(R3, [R3.parse("1 + t^2")])
    assert derive(untrunc, R3.gen(0) ** 3) == 0
    assert derive(d, t ** 3) == 0


def test_derivation_bracket_examples():
    t = R3.gen(0)
    D = Derivation.partial(R3, 0)
    tD = t * D
    assert derivation_bracket(D, tD) == D
    assert not derivation_bracket(D, D)
    assert not derivation_bracket(D, Derivation.zero(R3))


def test_derivation_pth_power_examples():
    D = Derivation.partial(R3, 0)
    t = R3.gen(0)
    assert not derivation_pth_power(D)
    assert derivation_pth_power(t * D) == t * D
    tt = R3T.gen(0)
    d = (1 + tt) * Derivation.partial(R3T, 0)
    assert derivation_pth_power(d) == d
    # by hand: d(t) = 1+t, d(1+t) = 1+t, so every iterate of t is 1+t up to the constant
    assert derive_iter(d, 3, tt) == 1 + tt
    assert derive_iter(d, 3, tt ** 2) == derive(d, tt ** 2)


def test_fraction_examples():
    t = R3.gen(0)
    one = R3.one()
    assert fraction_eq(Fraction(t, t ** 2), Fraction(one, t))
    s = fraction_arith("add", Fraction(one, t), Fraction(R3.const(2), t))
    assert s == Fraction(R3.zero(), t) and s == 0
    prod = fraction_arith("mul", Fraction(one, t), Fraction(t ** 2, one))
    assert prod == Fraction(t, one)
    with pytest.raises(ZeroDivisionError):
        Fraction(t, R3.zero())
    with pytest.raises(ValueError):
        Fraction(R3T.gen(0), R3T.one())


def test_fraction_printing():
    t = R3.gen(0)
    assert str(Fraction(t + 1, t ** 2)) == "(t + 1) / t^2"


def test_derivation_on_fraction_examples():
    t = R3.gen(0)
    D = Derivation.partial(R3, 0)
    assert derivation_on_fraction(D, Fraction(R3.one(), t)) == Fraction(R3.const(2), t ** 2)
    r = R3.parse("t^2 + 2*t")
    assert derivation_on_fraction(D, Fraction(r)) == Fraction(derive(D, r))
    s = R3.parse("1 + t")
    assert derivation_on_fraction(D, Fraction(s, s)) == 0


def test_divide_exact():
    R = PolyRing(5, 2)
    a, b = R.parse("t1 + 2*t2 + 1"), R.parse("t1*t2 + 3")
    assert divide_exact(a * b, b) == a
    assert divide_exact(a * b + 1, b) is None


# -- properties --------------------------------------------------------------------
RINGS = [PolyRing(p, n, tr) for p in (2, 3, 5) for n in (1, 2) for tr in (False, True)]


@pytest.mark.parametrize("ring", RINGS, ids=str)
@settings(max_examples=100, deadline=None)
@given(data=st.data())
def test_frobenius_is_ring_endomorphism(ring, data):
    a = data.draw(ring_elements(ring))
    b = data.draw(ring_elements(ring))
    assert frobenius(a + b) == frobenius(a) + frobenius(b)
    assert frobenius(a * b) == frobenius(a) * frobenius(b)
    assert frobenius(a) == a ** ring.p


@pytest.mark.parametrize("ring", [r for r in RINGS if not r.truncated], ids=str)
@settings(max_examples=50, deadline=None)
@given(data=st.data())
def test_arithmetic_matches_sympy(ring, data):
    a = data.draw(ring_elements(ring))
    b = data.draw(ring_elements(ring))
    pa, gens = to_sympy(a)
    pb, _ = to_sympy(b)
    assert from_sympy(ring, pa * pb) == a * b
    assert from_sympy(ring, pa + pb) == a + b
    for j, g in enumerate(gens):
        assert from_sympy(ring, pa.diff(g)) == a.partial(j)


@pytest.mark.parametrize("ring", RINGS, ids=str)
@settings(max_examples=50, deadline=None)
@given(data=st.data())
def test_leibniz(ring, data):
    d = Derivation(ring, [data.draw(ring_elements(ring)) for _ in range(ring.nvars)])
    a = data.draw(ring_elements(ring))
    b = data.draw(ring_elements(ring))
    assert derive(d, a * b) == derive(d, a) * b + a * derive(d, b)


@pytest.mark.parametrize("ring", RINGS, ids=str)
@settings(max_examples=30, deadline=None)
@given(data=st.data())
def test_pth_power_of_derivation_is_a_derivation(ring, data):
    d = Derivation(ring, [data.draw(ring_elements(ring, max_terms=3, max_exp=2)) for _ in range(ring.nvars)])
    dp = derivation_pth_power(d)
    a = data.draw(ring_elements(ring, max_terms=3, max_exp=2))
    b = data.draw(ring_elements(ring, max_terms=3, max_exp=2))
    # d^p applied by brute iteration must obey Leibniz
    assert derive_iter(d, ring.p, a * b) == derive_iter(d, ring.p, a) * b + a * derive_iter(d, ring.p, b)
    assert derive(dp, a * b) == derive_iter(d, ring.p, a * b)


@pytest.mark.parametrize("ring", RINGS, ids=str)
@settings(max_examples=30, deadline=None)
@given(data=st.data())
def test_derivation_jacobi(ring, data):
    def der():
        return Derivation(ring, [data.draw(ring_elements(ring, max_terms=2, max_exp=2)) for _ in range(ring.nvars)])

    a, b, c = der(), der(), der()
    total = derivation_bracket(a, derivation_bracket(b, c)) + derivation_bracket(b, derivation_bracket(c, a)) \
        + derivation_bracket(c, derivation_bracket(a, b))
    assert not total


@pytest.mark.parametrize("ring", [r for r in RINGS if not r.truncated], ids=str)
@settings(max_examples=50, deadline=None)
@given(data=st.data())
def test_fraction_equality_is_a_congruence(ring, data):
    nonzero = ring_elements(ring, max_terms=2, max_exp=2).filter(bool)
    a, c = (Fraction(data.draw(ring_elements(ring)), data.draw(nonzero)) for _ in range(2))
    w1, w2 = data.draw(nonzero), data.draw(nonzero)
    b = Fraction(a.num * w1, a.den * w1)
    d = Fraction(c.num * w2, c.den * w2)
    assert a == b and c == d
    assert a + c == b + d
    assert a * c == b * d
    assert a == a and (b == a)


@pytest.mark.parametrize("ring", [r for r in RINGS if not r.truncated], ids=str)
@settings(max_examples=50, deadline=None)
@given(data=st.data())
def test_derivation_on_fraction(ring, data):
    d = Derivation(ring, [data.draw(ring_elements(ring)) for _ in range(ring.nvars)])
    r = data.draw(ring_elements(ring))
    assert derivation_on_fraction(d, Fraction(r)) == Fraction(derive(d, r))
    s = data.draw(ring_elements(ring, max_terms=2, max_exp=2).filter(bool))
    f, g = Fraction(r, s), Fraction(data.draw(ring_elements(ring)), ring.one())
    # quotient rule is a derivation of the fraction field
    assert derivation_on_fraction(d, f * g) == derivation_on_fraction(d, f) * g + f * derivation_on_fraction(d, g)

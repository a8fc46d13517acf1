import random
from fractions import Fraction

import mpmath
import pytest

from acy.scalar import FieldTower, PrimeEmbedding, Scalar, coxeter_minpoly


def test_quantum_examples():
    assert FieldTower(5).quantum(1) == 1
    assert FieldTower(4).quantum(3) == 1
    # [2] at h=6 is sqrt(3): minimal polynomial x^2 - 3
    assert coxeter_minpoly(6) == (-3, 0, 1)
    c = FieldTower(6).quantum(2)
    assert c * c == 3
    with mpmath.workprec(120):
        v = c.value(120)
        assert abs(v - 2 * mpmath.cos(mpmath.pi / 6)) < mpmath.mpf(10) ** -30


def test_quantum_range_errors():
    with pytest.raises(ValueError):
        FieldTower(5).quantum(-1)
    with pytest.raises(ValueError):
        FieldTower(5).quantum(10)
    with pytest.raises(ValueError):
        coxeter_minpoly(2)


def test_product_rule_exact():
    # [2][n] = [n-1] + [n+1] for 1 <= n <= h-1, exactly
    for h in (4, 5, 6, 7, 8, 9, 12):
        t = FieldTower(h)
        two = t.quantum(2)
        for n in range(1, h):
            assert two * t.quantum(n) == t.quantum(n - 1) + t.quantum(n + 1)


def test_arith_identities():
    t = FieldTower(4)
    two = t.quantum(2)
    assert two * two == 2          # (sqrt 2)^2
    x = t.quantum(3) + t.generator() * Fraction(5, 3)
    assert x * t.one() == x
    with pytest.raises(ZeroDivisionError):
        x / t.zero()
    with pytest.raises(ValueError):
        x + FieldTower(5).one()


def test_normal_form_random():
    rng = random.Random(7)
    t, r3 = FieldTower(8).adjoin_sqrt(FieldTower(8).quantum(3))

    def rand_scalar():
        out = t.zero()
        for mask in (0, 1):
            coeffs = [Fraction(rng.randint(-9, 9), rng.randint(1, 7)) for _ in range(4)]
            out = out + Scalar(t, {mask: (1,)}) * 0 + t.from_base(coeffs) * (r3 if mask else 1)
        return out

    for _ in range(1000):
        a, b, c = rand_scalar(), rand_scalar(), rand_scalar()
        assert (a + b) * c == a * c + b * c
        assert (a - b) * c == a * c - b * c
        if not c.is_zero():
            assert (a * c) / c == a


def test_embed_real():
    t = FieldTower(6)
    three = t.quantum(3)   # equals 2 exactly
    box = three.embed_real(5)
    assert box.a <= 2 <= box.b and mpmath.mpf(box.delta.b) <= mpmath.mpf(10) ** -5
    zero_box = t.zero().embed_real(10)
    assert zero_box.a <= 0 <= zero_box.b
    v = FieldTower(12).quantum(2).embed_real(12)
    assert abs(mpmath.mpf(v.a) - 1.9318516525781366) < 1e-10


def test_is_zero_and_interval_consistency():
    t = FieldTower(7)
    x = t.quantum(2) * t.quantum(4) - t.quantum(3) - t.quantum(5)  # product rule: zero
    assert x.is_zero()
    for digits in (5, 15, 30):
        box = x.embed_real(digits)
        assert box.a <= 0 <= box.b


def test_adjoin_sqrt():
    t8 = FieldTower(8)
    t2, r3 = t8.adjoin_sqrt(t8.quantum(3))
    assert r3 * r3 == t8.quantum(3).lift(t2)
    # idempotent: same tower back
    t3, r3b = t2.adjoin_sqrt(t8.quantum(3))
    assert t3 is t2 and r3b == r3
    t4, one = t2.adjoin_sqrt(t2.one())
    assert t4 is t2 and one == 1
    # sqrt of [2] at h=4: generator of a degree-4 tower with g^4 = 2
    ta = FieldTower(4)
    tb, g = ta.adjoin_sqrt(ta.quantum(2))
    assert g ** 4 == 2 and tb.degree == 4
    with pytest.raises(ValueError):
        ta.adjoin_sqrt(-ta.one())
    with pytest.raises(ValueError):
        ta.adjoin_sqrt(ta.zero())
    # already-square products fold instead of growing the tower
    t5, r6 = t2.adjoin_sqrt(t8.quantum(3) * 4)
    assert t5 is t2 and r6 == r3 * 2


def test_inverse_with_roots_and_complex():
    t8 = FieldTower(8)
    t, r3 = t8.adjoin_sqrt(t8.quantum(3))
    x = r3 + t.quantum(2) - Fraction(1, 3)
    assert x * x.inverse() == 1
    z = t.i_times(r3) + t.quantum(4)
    assert (z * z.inverse()) == 1
    assert z.conjugate().conjugate() == z
    assert (z * z.conjugate()).is_real()


def test_prime_embedding_is_homomorphism():
    t8 = FieldTower(8)
    t, r3 = t8.adjoin_sqrt(t8.quantum(3))
    emb = PrimeEmbedding.find(t)
    a = r3 + t.quantum(2)
    b = t.quantum(3) - r3 * Fraction(2, 5)
    pa, pb = a.reduce_mod(emb), b.reduce_mod(emb)
    assert (a * b).reduce_mod(emb) == pa * pb % emb.p
    assert (a + b).reduce_mod(emb) == (pa + pb) % emb.p
    z = t.i_times(t.one())
    assert (z * z).reduce_mod(emb) == emb.p - 1


def test_serialization_round_trip():
    t8 = FieldTower(8)
    t, r3 = t8.adjoin_sqrt(t8.quantum(3))
    x = r3 * Fraction(3, 7) + t.quantum(4) + t.i_times(r3 - 1)
    doc = x.to_coords()
    back = Scalar.from_coords(FieldTower.from_doc(t.to_doc()), doc)
    assert back == x

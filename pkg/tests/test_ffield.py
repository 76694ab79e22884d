import random

import pytest

from refl2.ffield import (
    DEFAULT_MODULI,
    Fel,
    FieldCtx,
    _pmul,
    field_new,
    modulus_is_irreducible,
    mult_generator,
    subfield_elements,
    subfield_generator,
)


def brute_force_reducible(p: int, m: int) -> bool:
    # independent oracle: enumerate all factor pairs of positive degree
    for d1 in range(1, m):
        d2 = m - d1
        if d1 > d2:
            break
        for f in range(1 << d1, 1 << (d1 + 1)):
            for g in range(1 << d2, 1 << (d2 + 1)):
                if _pmul(f, g) == p:
                    return True
    return False


def test_default_moduli_follow_convention():
    for m, expected in DEFAULT_MODULI.items():
        cands = sorted(
            range(1 << m, 1 << (m + 1)), key=lambda v: (bin(v).count("1"), v)
        )
        first = next(c for c in cands if modulus_is_irreducible(c, m))
        assert first == expected


def test_field_new_gf4():
    ctx = field_new(2, 0x7)
    assert ctx.m == 2 and ctx.order == 4


def test_field_new_rejects_reducible():
    with pytest.raises(ValueError):
        field_new(2, 0x5)  # t^2+1 = (t+1)^2


def test_field_new_rejects_bad_length():
    with pytest.raises(ValueError):
        field_new(2, 0x3)
    with pytest.raises(ValueError):
        field_new(2, 0x0)


def test_field_new_gf16_matches_brute_force():
    ctx = field_new(4, 0x13)
    assert not brute_force_reducible(0x13, 4)
    assert ctx.order == 16
    # and the brute-force oracle agrees with trial division on everything
    for p in range(1 << 4, 1 << 5):
        assert modulus_is_irreducible(p, 4) == (not brute_force_reducible(p, 4))


def test_gf4_mul_table():
    ctx = field_new(2)
    t = ctx.fel(0x2)
    assert (t * t).bits == 0x3  # t^2 = t+1
    for a in range(4):
        e = ctx.fel(a)
        assert (e * ctx.one) == e
        assert (e * ctx.zero) == ctx.zero


def test_mismatched_contexts_rejected():
    a = field_new(2).fel(1)
    b = field_new(3).fel(1)
    with pytest.raises(ValueError):
        a * b
    with pytest.raises(ValueError):
        a + b


def test_inv():
    ctx = field_new(2)
    t = ctx.fel(0x2)
    assert t.inv().bits == 0x3  # t*(t+1) = t^2+t = 1
    assert ctx.one.inv() == ctx.one
    with pytest.raises(ZeroDivisionError):
        ctx.zero.inv()
    for m in (3, 5, 8):
        c = field_new(m)
        for a in range(1, c.order):
            assert c.mul(a, c.inv(a)) == 1


def test_sqrt():
    ctx = field_new(2)
    assert ctx.zero.sqrt() == ctx.zero
    assert ctx.one.sqrt() == ctx.one
    assert ctx.fel(0x2).sqrt().bits == 0x3  # (t+1)^2 = t^2+1 = t
    rng = random.Random(7)
    big = field_new(12)
    for _ in range(100):
        a = big.fel(rng.randrange(big.order))
        r = a.sqrt()
        assert r * r == a


def test_squaring_is_additive():
    rng = random.Random(11)
    ctx = field_new(9)
    for _ in range(200):
        a, b = rng.randrange(ctx.order), rng.randrange(ctx.order)
        assert ctx.sqr(a ^ b) == ctx.sqr(a) ^ ctx.sqr(b)


def test_mult_generator():
    assert mult_generator(field_new(1)).bits == 1
    ctx4 = field_new(2)
    g = mult_generator(ctx4)
    assert g.bits == 0x2
    assert (g * g).bits == 0x3 and (g * g * g) == ctx4.one
    ctx8 = field_new(3)
    g8 = mult_generator(ctx8)
    seen = set()
    p = ctx8.one
    for _ in range(7):
        p = p * g8
        seen.add(p.bits)
    assert len(seen) == 7 and p == ctx8.one  # exact order 7
    # smallest-by-value: nothing below it has full order
    for a in range(1, g8.bits):
        assert ctx8.order_of(a) != 7


def test_mult_generator_order_exact():
    for m in (2, 3, 4, 6, 8):
        ctx = field_new(m)
        g = mult_generator(ctx)
        assert ctx.order_of(g.bits) == ctx.order - 1


def test_subfield_elements():
    ctx4 = field_new(2)
    assert [a.bits for a in subfield_elements(ctx4, 1)] == [0, 1]
    assert [a.bits for a in subfield_elements(ctx4, 2)] == [0, 1, 2, 3]
    ctx16 = field_new(4)
    sub = subfield_elements(ctx16, 2)
    assert len(sub) == 4
    # independent scan: exactly the solutions of a^4 = a
    expected = [a for a in range(16) if ctx16.pow_(a, 4) == a]
    assert [s.bits for s in sub] == expected
    with pytest.raises(ValueError):
        subfield_elements(ctx16, 3)


def test_subfield_closed_under_ops():
    ctx = field_new(6)
    for n in (1, 2, 3):
        sub = {a.bits for a in subfield_elements(ctx, n)}
        assert len(sub) == 1 << n
        for a in sub:
            for b in sub:
                assert a ^ b in sub
                assert ctx.mul(a, b) in sub
            if a:
                assert ctx.inv(a) in sub


def test_subfield_generator():
    ctx = field_new(4)
    e = subfield_generator(ctx, 2)
    assert ctx.order_of(e.bits) == 3
    assert ctx.in_subfield(e.bits, 2)
    # in the whole field the subfield generator is the field generator
    assert subfield_generator(ctx, 4) == mult_generator(ctx)


def test_field_axioms_exhaustive_small():
    for m in (1, 2, 3, 4):
        ctx = field_new(m)
        els = list(range(ctx.order))
        for a in els:
            for b in els:
                assert ctx.mul(a, b) == ctx.mul(b, a)
                for c in els:
                    assert ctx.mul(ctx.mul(a, b), c) == ctx.mul(a, ctx.mul(b, c))
                    assert ctx.mul(a, b ^ c) == ctx.mul(a, b) ^ ctx.mul(a, c)


def test_field_axioms_random_large():
    rng = random.Random(3)
    for m in (8, 12, 16):
        ctx = field_new(m)
        for _ in range(10_000 if m == 16 else 2_000):
            a, b, c = (rng.randrange(ctx.order) for _ in range(3))
            assert ctx.mul(ctx.mul(a, b), c) == ctx.mul(a, ctx.mul(b, c))
            assert ctx.mul(a, b ^ c) == ctx.mul(a, b) ^ ctx.mul(a, c)


def test_pow_handles_large_exponents():
    ctx = field_new(4)
    g = mult_generator(ctx).bits
    assert ctx.pow_(g, ctx.order - 1) == 1
    assert ctx.pow_(g, 16) == ctx.pow_(g, 16 % 15)
    assert ctx.pow_(0, 0) == 1 and ctx.pow_(0, 5) == 0


def test_fel_repr_hex():
    ctx = field_new(4)
    assert repr(ctx.fel(0xB)) == "0xb"

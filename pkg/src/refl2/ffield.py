"""Exact arithmetic in GF(2^m).

Field elements are bit-vectors stored as Python ints: bit k is the
coefficient of t^k in the polynomial basis of GF(2)[t]/(modulus).  The
zero and one elements are always the ints 0 and 1, and addition is xor.
A `FieldCtx` carries the extension degree and the irreducible modulus
and exposes int-level arithmetic (`mul`, `inv`, `sqrt`, `pow_`); these
are the hot-path primitives used by the polynomial and matrix layers.
`Fel` is a thin immutable wrapper pairing bits with their context, with
operator overloads for element-level work.

Moduli are bit-vectors too, with bit m (the leading bit) set; they print
as hex with the low bit the constant term, e.g. the GF(4) modulus
t^2+t+1 is 0x7.  Construction checks irreducibility by trial division
by every polynomial of degree up to m/2.
"""

from __future__ import annotations

from typing import Iterator

# Default irreducible modulus per degree, lowest weight first, then
# lowest bit-vector value.  Regenerated by tests/test_ffield.py.
DEFAULT_MODULI = {
    1: 0x2,
    2: 0x7,
    3: 0xB,
    4: 0x13,
    5: 0x25,
    6: 0x43,
    7: 0x83,
    8: 0x11B,
    9: 0x203,
    10: 0x409,
    11: 0x805,
    12: 0x1009,
    13: 0x201B,
    14: 0x4021,
    15: 0x8003,
    16: 0x1002B,
}

# Log/exp tables are built only for fields that fit comfortably in memory.
_TABLE_LIMIT = 16


def _pdeg(x: int) -> int:
    return x.bit_length() - 1


def _pmod(a: int, b: int) -> int:
    """Remainder of carry-less division of a by b over GF(2)."""
    db = _pdeg(b)
    while a and _pdeg(a) >= db:
        a ^= b << (_pdeg(a) - db)
    return a


def _pmul(a: int, b: int) -> int:
    """Carry-less product of two GF(2) polynomials."""
    r = 0
    while b:
        if b & 1:
            r ^= a
        a <<= 1
        b >>= 1
    return r


def modulus_is_irreducible(modulus: int, m: int) -> bool:
    """Trial division by all polynomials of degree 1..m//2."""
    for d in range(1, m // 2 + 1):
        for q in range(1 << d, 1 << (d + 1)):
            if _pmod(modulus, q) == 0:
                return False
    return True


def _factorize(n: int) -> list[int]:
    """Prime factors of n, without multiplicity."""
    out = []
    p = 2
    while p * p <= n:
        if n % p == 0:
            out.append(p)
            while n % p == 0:
                n //= p
        p += 1
    if n > 1:
        out.append(n)
    return out


class FieldCtx:
    """A finite field GF(2^m) given by degree and irreducible modulus.

    Immutable; two contexts compare equal iff they have the same degree
    and modulus.  All int-level methods expect operands already reduced
    (bit length at most m).
    """

    __slots__ = ("m", "modulus", "order", "_exp", "_log", "_gen_cache")

    def __init__(self, m: int, modulus: int):
        if m < 1:
            raise ValueError("extension degree must be positive")
        if modulus.bit_length() != m + 1:
            raise ValueError(
                "modulus must be a bit-vector of length m+1 with the top bit set"
            )
        if not modulus_is_irreducible(modulus, m):
            raise ValueError(f"modulus {modulus:#x} is reducible over GF(2)")
        self.m = m
        self.modulus = modulus
        self.order = 1 << m
        self._gen_cache = None
        if m <= _TABLE_LIMIT:
            self._build_tables()
        else:
            self._exp = self._log = None

    def _build_tables(self):
        # The modulus need not be primitive, so drive the tables with a
        # multiplicative generator found by direct order computation.
        n = self.order - 1
        exp = [1] * (2 * n if n else 1)
        log = [0] * self.order
        if n == 0:
            self._exp, self._log = exp, log
            return
        g = self._find_generator_raw()
        v = 1
        for i in range(n):
            exp[i] = v
            log[v] = i
            v = self._mul_raw(v, g)
        for i in range(n, 2 * n):
            exp[i] = exp[i - n]
        self._exp, self._log = exp, log
        self._gen_cache = g

    def _mul_raw(self, a: int, b: int) -> int:
        return _pmod(_pmul(a, b), self.modulus)

    def _order_raw(self, a: int) -> int:
        n = self.order - 1
        ord_ = n
        for p in _factorize(n):
            while ord_ % p == 0 and self._pow_raw(a, ord_ // p) == 1:
                ord_ //= p
        return ord_

    def _pow_raw(self, a: int, k: int) -> int:
        r = 1
        while k:
            if k & 1:
                r = self._mul_raw(r, a)
            a = self._mul_raw(a, a)
            k >>= 1
        return r

    def _find_generator_raw(self) -> int:
        n = self.order - 1
        for a in range(1, self.order):
            if self._order_raw(a) == n:
                return a
        raise AssertionError("multiplicative group of a field is cyclic")

    # -- public int-level arithmetic ------------------------------------

    def add(self, a: int, b: int) -> int:
        return a ^ b

    def mul(self, a: int, b: int) -> int:
        if self._exp is not None:
            if a == 0 or b == 0:
                return 0
            return self._exp[self._log[a] + self._log[b]]
        return self._mul_raw(a, b)

    def sqr(self, a: int) -> int:
        return self.mul(a, a)

    def inv(self, a: int) -> int:
        if a == 0:
            raise ZeroDivisionError("inverse of zero field element")
        if self._exp is not None:
            n = self.order - 1
            return self._exp[(n - self._log[a]) % n]
        return self._pow_raw(a, self.order - 2)

    def pow_(self, a: int, k: int) -> int:
        """a**k with k >= 0 (k may exceed the group order)."""
        if k < 0:
            return self.pow_(self.inv(a), -k)
        if a == 0:
            return 0 if k else 1
        if self._exp is not None:
            n = self.order - 1
            return self._exp[(self._log[a] * k) % n]
        return self._pow_raw(a, k)

    def sqrt(self, a: int) -> int:
        """The unique square root, a**(2^(m-1))."""
        return self.pow_(a, 1 << (self.m - 1))

    def order_of(self, a: int) -> int:
        """Multiplicative order of a nonzero element."""
        if a == 0:
            raise ZeroDivisionError("zero has no multiplicative order")
        return self._order_raw(a)

    def elements(self) -> Iterator[int]:
        return iter(range(self.order))

    def in_subfield(self, a: int, n: int) -> bool:
        """True iff a is fixed by the n-fold Frobenius, a^(2^n) = a."""
        return self.pow_(a, 1 << n) == a

    # -- hashing / printing ----------------------------------------------

    def __eq__(self, other):
        return (
            isinstance(other, FieldCtx)
            and self.m == other.m
            and self.modulus == other.modulus
        )

    def __hash__(self):
        return hash((self.m, self.modulus))

    def __repr__(self):
        return f"FieldCtx(GF(2^{self.m}), modulus={self.modulus:#x})"

    def fel(self, bits: int) -> "Fel":
        return Fel(bits, self)

    @property
    def zero(self) -> "Fel":
        return Fel(0, self)

    @property
    def one(self) -> "Fel":
        return Fel(1, self)


class Fel:
    """A field element: bits plus a reference to its FieldCtx."""

    __slots__ = ("bits", "ctx")

    def __init__(self, bits: int, ctx: FieldCtx):
        if not 0 <= bits < ctx.order:
            raise ValueError(f"element {bits:#x} out of range for {ctx!r}")
        self.bits = bits
        self.ctx = ctx

    def _coerce(self, other) -> int:
        if isinstance(other, Fel):
            if other.ctx != self.ctx:
                raise ValueError("field elements from mismatched contexts")
            return other.bits
        if isinstance(other, int):
            return Fel(other, self.ctx).bits
        return NotImplemented

    def __add__(self, other):
        b = self._coerce(other)
        if b is NotImplemented:
            return NotImplemented
        return Fel(self.bits ^ b, self.ctx)

    __radd__ = __add__
    __sub__ = __add__
    __rsub__ = __add__

    def __mul__(self, other):
        b = self._coerce(other)
        if b is NotImplemented:
            return NotImplemented
        return Fel(self.ctx.mul(self.bits, b), self.ctx)

    __rmul__ = __mul__

    def __truediv__(self, other):
        b = self._coerce(other)
        if b is NotImplemented:
            return NotImplemented
        return Fel(self.ctx.mul(self.bits, self.ctx.inv(b)), self.ctx)

    def __pow__(self, k: int):
        return Fel(self.ctx.pow_(self.bits, k), self.ctx)

    def inv(self) -> "Fel":
        return Fel(self.ctx.inv(self.bits), self.ctx)

    def sqrt(self) -> "Fel":
        return Fel(self.ctx.sqrt(self.bits), self.ctx)

    def __bool__(self):
        return self.bits != 0

    def __eq__(self, other):
        if isinstance(other, Fel):
            return self.bits == other.bits and self.ctx == other.ctx
        if isinstance(other, int):
            return self.bits == other
        return NotImplemented

    def __hash__(self):
        return hash((self.bits, self.ctx.modulus))

    def __repr__(self):
        return f"{self.bits:#x}"


# -- module-level operations -----------------------------------------------


def field_new(m: int, modulus: int | None = None) -> FieldCtx:
    """Build GF(2^m); modulus defaults to the built-in table for m <= 16."""
    if modulus is None:
        try:
            modulus = DEFAULT_MODULI[m]
        except KeyError:
            raise ValueError(f"no default modulus for m={m}; pass one explicitly")
    return FieldCtx(m, modulus)


def mul(a: Fel, b: Fel) -> Fel:
    return a * b


def inv(a: Fel) -> Fel:
    return a.inv()


def sqrt(a: Fel) -> Fel:
    return a.sqrt()


def mult_generator(ctx: FieldCtx) -> Fel:
    """Smallest element (by bit-vector value) of multiplicative order 2^m-1."""
    n = ctx.order - 1
    for a in range(1, ctx.order):
        if ctx._order_raw(a) == n:
            return Fel(a, ctx)
    raise AssertionError("unreachable")


def subfield_elements(ctx: FieldCtx, n: int) -> list[Fel]:
    """The 2^n fixed points of the n-fold Frobenius, sorted by value."""
    if n < 1 or ctx.m % n != 0:
        raise ValueError(f"subfield degree {n} does not divide {ctx.m}")
    q = 1 << n
    out = [a for a in range(ctx.order) if ctx.pow_(a, q) == a]
    assert len(out) == q
    return [Fel(a, ctx) for a in out]


def subfield_generator(ctx: FieldCtx, n: int) -> Fel:
    """Smallest element of the GF(2^n) subfield with multiplicative order 2^n-1."""
    target = (1 << n) - 1
    for a in subfield_elements(ctx, n):
        if a.bits and ctx._order_raw(a.bits) == target:
            return a
    raise AssertionError("subfield generator always exists")

"""Groups of 3x3 matrices with last row (0,0,1) over GF(2^m).

Builds the transvection groups acting on a 3-space with an invariant
plane: the SL2(GF(2^n)) generators R, S, T and their lifts, the cocycle
f(x,y) = 1 + x + y + x^(2^(n-1)) y^(2^(n-1)) and its homogeneous
companion g = f + 1, the cocycle subgroups H_gamma, the translation
kernel N determined by a GF(2^n)-subspace Lambda_1 of the ambient
field, breadth-first group closure, and the semidirect-split check.

Matrices are immutable; the canonical encoding used for dedup, sorting
and golden files is the row-major 9-tuple of element bit-vectors.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import product as iproduct

from refl2.ffield import Fel, FieldCtx, subfield_elements, subfield_generator


class ClosureCapError(RuntimeError):
    """Raised when a closure exceeds its element cap."""

    def __init__(self, cap: int):
        super().__init__(f"group closure exceeded cap of {cap} elements")
        self.cap = cap


class Mat3:
    """3x3 matrix over a FieldCtx with last row fixed to (0, 0, 1)."""

    __slots__ = ("ctx", "rows")

    def __init__(self, ctx: FieldCtx, rows):
        rows = tuple(
            tuple(v.bits if isinstance(v, Fel) else v for v in row) for row in rows
        )
        if len(rows) != 3 or any(len(r) != 3 for r in rows):
            raise ValueError("need a 3x3 matrix")
        if rows[2] != (0, 0, 1):
            raise ValueError("last row must be (0, 0, 1)")
        for row in rows:
            for v in row:
                if not 0 <= v < ctx.order:
                    raise ValueError(f"entry {v:#x} out of range for {ctx!r}")
        self.ctx = ctx
        self.rows = rows

    @classmethod
    def identity(cls, ctx: FieldCtx) -> "Mat3":
        return cls(ctx, ((1, 0, 0), (0, 1, 0), (0, 0, 1)))

    @classmethod
    def block(cls, ctx: FieldCtx, a, b, c, d, col=(0, 0)) -> "Mat3":
        """[[a, b, col0], [c, d, col1], [0, 0, 1]]."""
        return cls(ctx, ((a, b, col[0]), (c, d, col[1]), (0, 0, 1)))

    @classmethod
    def translation(cls, ctx: FieldCtx, alpha, beta) -> "Mat3":
        return cls(ctx, ((1, 0, alpha), (0, 1, beta), (0, 0, 1)))

    def __mul__(self, other: "Mat3") -> "Mat3":
        if self.ctx != other.ctx:
            raise ValueError("matrices from mismatched contexts")
        mul = self.ctx.mul
        a, b = self.rows, other.rows
        out = []
        for i in range(2):
            ai0, ai1, ai2 = a[i]
            out.append(
                (
                    mul(ai0, b[0][0]) ^ mul(ai1, b[1][0]),
                    mul(ai0, b[0][1]) ^ mul(ai1, b[1][1]),
                    mul(ai0, b[0][2]) ^ mul(ai1, b[1][2]) ^ ai2,
                )
            )
        out.append((0, 0, 1))
        return Mat3(self.ctx, out)

    def det_block(self) -> int:
        """Determinant of the upper 2x2 block (ad + bc in characteristic 2)."""
        mul = self.ctx.mul
        (a, b, _), (c, d, _), _ = self.rows
        return mul(a, d) ^ mul(b, c)

    def inverse(self) -> "Mat3":
        ctx = self.ctx
        mul = ctx.mul
        (a, b, al), (c, d, be), _ = self.rows
        det = mul(a, d) ^ mul(b, c)
        di = ctx.inv(det)
        ia, ib, ic, id_ = mul(di, d), mul(di, b), mul(di, c), mul(di, a)
        # translation part: block_inverse * (al, be)
        ta = mul(ia, al) ^ mul(ib, be)
        tb = mul(ic, al) ^ mul(id_, be)
        return Mat3(ctx, ((ia, ib, ta), (ic, id_, tb), (0, 0, 1)))

    def key(self) -> tuple:
        """Canonical encoding: row-major concatenation of entries."""
        return self.rows[0] + self.rows[1] + self.rows[2]

    def entry(self, i: int, j: int) -> Fel:
        return Fel(self.rows[i][j], self.ctx)

    def block2(self) -> tuple:
        (a, b, _), (c, d, _), _ = self.rows
        return (a, b, c, d)

    def third_col(self) -> tuple:
        return (self.rows[0][2], self.rows[1][2])

    def is_block_diagonal(self) -> bool:
        return self.rows[0][2] == 0 and self.rows[1][2] == 0

    def block_in_subfield(self, n: int) -> bool:
        return all(self.ctx.in_subfield(v, n) for v in self.block2())

    def __eq__(self, other):
        if not isinstance(other, Mat3):
            return NotImplemented
        return self.ctx == other.ctx and self.rows == other.rows

    def __hash__(self):
        return hash((self.ctx.modulus, self.rows))

    def __str__(self):
        return "\n".join(" ".join(f"{v:#x}" for v in row) for row in self.rows)

    def __repr__(self):
        return f"Mat3({self.rows})"


class GroupSet:
    """A finite set of Mat3 with a canonical element order."""

    def __init__(self, elements: list[Mat3], generators: list[Mat3]):
        self.elements = elements
        self.generators = generators
        self._keys = {m.key() for m in elements}

    def __len__(self):
        return len(self.elements)

    def __contains__(self, m: Mat3) -> bool:
        return m.key() in self._keys

    def __iter__(self):
        return iter(self.elements)

    def sorted_elements(self) -> list[Mat3]:
        return sorted(self.elements, key=Mat3.key)

    def export(self) -> list[str]:
        """Sorted one-line matrix dumps for golden-file comparisons."""
        return [" ".join(f"{v:#x}" for v in m.key()) for m in self.sorted_elements()]


def closure(gens: list[Mat3], cap: int = 10**7) -> GroupSet:
    """Breadth-first closure of the generators under multiplication.

    Deterministic: elements are discovered in BFS order starting from
    the identity, multiplying on the right by the generators in the
    order given.  Inverses come for free in a finite closed set.
    """
    if not gens:
        raise ValueError("need at least one generator")
    ctx = gens[0].ctx
    for g in gens:
        if g.ctx != ctx:
            raise ValueError("generators from mismatched contexts")
        if g.det_block() == 0:
            raise ValueError("generator is singular")
    ident = Mat3.identity(ctx)
    seen = {ident.key()}
    elements = [ident]
    frontier = [ident]
    while frontier:
        next_frontier = []
        for m in frontier:
            for g in gens:
                p = m * g
                k = p.key()
                if k not in seen:
                    if len(seen) >= cap:
                        raise ClosureCapError(cap)
                    seen.add(k)
                    elements.append(p)
                    next_frontier.append(p)
        frontier = next_frontier
    return GroupSet(elements, list(gens))


# -- cocycles ----------------------------------------------------------------


def _subfield_check(ctx: FieldCtx, n: int, *vals: int):
    if ctx.m % n != 0:
        raise ValueError(f"subfield degree {n} does not divide {ctx.m}")
    for v in vals:
        if not ctx.in_subfield(v, n):
            raise ValueError(f"element {v:#x} lies outside GF(2^{n})")


def cocycle_f(a: Fel, b: Fel, n: int) -> Fel:
    """f(a,b) = 1 + a + b + a^(2^(n-1)) b^(2^(n-1)) on GF(2^n) inputs."""
    if a.ctx != b.ctx:
        raise ValueError("cocycle inputs from mismatched contexts")
    ctx = a.ctx
    _subfield_check(ctx, n, a.bits, b.bits)
    h = 1 << (n - 1)
    v = 1 ^ a.bits ^ b.bits ^ ctx.mul(ctx.pow_(a.bits, h), ctx.pow_(b.bits, h))
    return Fel(v, ctx)


def cocycle_g(a: Fel, b: Fel, n: int) -> Fel:
    """g(a,b) = f(a,b) + 1; homogeneous of degree 1 on GF(2^n)^2."""
    return Fel(cocycle_f(a, b, n).bits ^ 1, a.ctx)


# -- generators and lifts -------------------------------------------------------


def sl2_generators(n: int, ambient: FieldCtx) -> tuple[Mat3, Mat3, Mat3]:
    """R = diag(e^-1, e), S and T the two transvections, embedded with
    trivial third row and column.  e is the canonical generator of the
    GF(2^n) subfield's multiplicative group."""
    e = subfield_generator(ambient, n).bits
    ei = ambient.inv(e)
    R = Mat3.block(ambient, ei, 0, 0, e)
    S = Mat3.block(ambient, 1, 1, 0, 1)
    T = Mat3.block(ambient, 1, 0, 1, 1)
    return R, S, T


def lift_generators(variant: str, n: int, ambient: FieldCtx) -> tuple[Mat3, Mat3, Mat3]:
    """Lifted generators (R-lift, S-lift, T-lift).

    variant "h1": the R-lift carries third column (1, e, 1); variant
    "h0": block-diagonal R-lift.  S and T lift with zero third column.
    """
    if variant not in ("h1", "h0"):
        raise ValueError(f"unknown variant {variant!r}; expected 'h1' or 'h0'")
    e = subfield_generator(ambient, n).bits
    ei = ambient.inv(e)
    S_l = Mat3.block(ambient, 1, 1, 0, 1)
    T_l = Mat3.block(ambient, 1, 0, 1, 1)
    if variant == "h0":
        R_l = Mat3.block(ambient, ei, 0, 0, e)
    else:
        R_l = Mat3.block(ambient, ei, 0, 0, e, col=(1, e))
    return R_l, S_l, T_l


def sl2_elements(n: int, ambient: FieldCtx) -> list[tuple[int, int, int, int]]:
    """All (a, b, c, d) over the GF(2^n) subfield with ad + bc = 1,
    sorted by (a, b, c, d) bit-vector value."""
    sub = [s.bits for s in subfield_elements(ambient, n)]
    mul = ambient.mul
    out = []
    for a, b, c, d in iproduct(sub, repeat=4):
        if mul(a, d) ^ mul(b, c) == 1:
            out.append((a, b, c, d))
    return out


def h_gamma(gamma: Fel, n: int, ambient: FieldCtx) -> GroupSet:
    """The cocycle subgroup H_gamma: SL2 blocks with third column
    (gamma*f(a,b), gamma*f(c,d), 1).  Verified closed under
    multiplication; its cardinality is |SL2(GF(2^n))|."""
    if gamma.ctx != ambient:
        raise ValueError("gamma from a mismatched context")
    mul = ambient.mul
    g = gamma.bits
    els = []
    for a, b, c, d in sl2_elements(n, ambient):
        fa = cocycle_f(Fel(a, ambient), Fel(b, ambient), n).bits
        fc = cocycle_f(Fel(c, ambient), Fel(d, ambient), n).bits
        els.append(Mat3.block(ambient, a, b, c, d, col=(mul(g, fa), mul(g, fc))))
    keys = frozenset(m.key() for m in els)
    # all-pairs closure verification on flat tuples (hot for n = 3)
    flats = [m.key() for m in els]
    for a, b, al, c, d, be, _, _, _ in flats:
        for a2, b2, al2, c2, d2, be2, _, _, _ in flats:
            k = (
                mul(a, a2) ^ mul(b, c2),
                mul(a, b2) ^ mul(b, d2),
                mul(a, al2) ^ mul(b, be2) ^ al,
                mul(c, a2) ^ mul(d, c2),
                mul(c, b2) ^ mul(d, d2),
                mul(c, al2) ^ mul(d, be2) ^ be,
                0,
                0,
                1,
            )
            if k not in keys:
                raise AssertionError("H_gamma is not closed under multiplication")
    q = 1 << n
    assert len(els) == q * (q * q - 1)
    gens = []
    for blk in (sl2_generators(n, ambient)):
        a, b, c, d = blk.block2()
        fa = cocycle_f(Fel(a, ambient), Fel(b, ambient), n).bits
        fc = cocycle_f(Fel(c, ambient), Fel(d, ambient), n).bits
        gens.append(Mat3.block(ambient, a, b, c, d, col=(mul(g, fa), mul(g, fc))))
    return GroupSet(sorted(els, key=Mat3.key), gens)


# -- the kernel and its Lambda space ------------------------------------------


class LambdaSpace:
    """A GF(2^n)-subspace Lambda_1 of the ambient field, given by a basis.

    The translation kernel N consists of the matrices with third column
    (alpha, beta, 1) where alpha and beta range over Lambda_1
    independently.
    """

    def __init__(self, ambient: FieldCtx, n: int, basis):
        if n < 1 or ambient.m % n != 0:
            raise ValueError(f"subfield degree {n} does not divide {ambient.m}")
        basis = tuple(v.bits if isinstance(v, Fel) else v for v in basis)
        for v in basis:
            if not 0 <= v < ambient.order:
                raise ValueError(f"basis element {v:#x} out of range")
        self.ambient = ambient
        self.n = n
        self.basis = basis
        self._lambda1 = self._span()

    def _span(self) -> list[int]:
        sub = [s.bits for s in subfield_elements(self.ambient, self.n)]
        mul = self.ambient.mul
        span = set()
        for coeffs in iproduct(sub, repeat=len(self.basis)):
            v = 0
            for s, b in zip(coeffs, self.basis):
                v ^= mul(s, b)
            span.add(v)
        if len(span) != (1 << self.n) ** len(self.basis):
            raise ValueError("basis is dependent over the subfield")
        return sorted(span)

    @property
    def d(self) -> int:
        return len(self.basis)

    def lambda1(self) -> list[int]:
        """The 2^(dn) elements of the span, sorted by value."""
        return list(self._lambda1)

    def enumerate(self) -> list[tuple[int, int]]:
        """All 2^(2dn) pairs (alpha, beta) with both in Lambda_1."""
        return [(a, b) for a in self._lambda1 for b in self._lambda1]

    def __repr__(self):
        basis = ", ".join(f"{b:#x}" for b in self.basis)
        return f"LambdaSpace(n={self.n}, basis=[{basis}])"


def default_lambda_basis(d: int, n: int, ambient: FieldCtx) -> tuple[int, ...]:
    """Smallest faithful basis per dimension: (), (1,), or (1, theta)
    with theta a multiplicative generator of the ambient field."""
    if d == 0:
        return ()
    if d == 1:
        return (1,)
    if d == 2:
        from refl2.ffield import mult_generator

        theta = mult_generator(ambient).bits
        return (1, theta)
    raise ValueError(f"no default basis for d={d}")


def lambda_enumerate(ls: LambdaSpace) -> list[tuple[Fel, Fel]]:
    return [(Fel(a, ls.ambient), Fel(b, ls.ambient)) for a, b in ls.enumerate()]


def kernel_group(ls: LambdaSpace) -> GroupSet:
    """The abelian translation group N of order 2^(2dn)."""
    ctx = ls.ambient
    els = [Mat3.translation(ctx, a, b) for a, b in ls.enumerate()]
    gens = []
    for b in ls.basis:
        gens.append(Mat3.translation(ctx, b, 0))
        gens.append(Mat3.translation(ctx, 0, b))
    if not gens:
        gens = [Mat3.identity(ctx)]
    return GroupSet(sorted(els, key=Mat3.key), gens)


# -- splitting -----------------------------------------------------------------


@dataclass(frozen=True)
class SplitReport:
    group_order: int
    kernel_order: int
    complement_order: int | None
    intersection_order: int | None
    overflow: bool

    @property
    def product_matches(self) -> bool:
        return (
            self.complement_order is not None
            and self.complement_order * self.kernel_order == self.group_order
        )

    @property
    def is_split(self) -> bool:
        return (
            not self.overflow
            and self.product_matches
            and self.intersection_order == 1
        )


def verify_splitting(G: GroupSet, N: GroupSet, lifts: list[Mat3]) -> SplitReport:
    """Check that G is the semidirect product of N and <lifts>.

    Requires N normal in G (checked by conjugating N with every
    generator of G and its inverse, which suffices for the whole
    group).  The split witness: |<lifts>| * |N| = |G| and the
    intersection of <lifts> with N is trivial.  A closure of the lifts
    that escapes past |G| elements is reported as overflow.
    """
    for g in G.generators:
        for gi in (g, g.inverse()):
            for m in N:
                if gi * m * gi.inverse() not in N:
                    raise ValueError("kernel is not normal in the group")
    try:
        comp = closure(lifts, cap=len(G))
    except ClosureCapError:
        return SplitReport(len(G), len(N), None, None, True)
    inter = sum(1 for m in comp if m in N)
    return SplitReport(len(G), len(N), len(comp), inter, False)

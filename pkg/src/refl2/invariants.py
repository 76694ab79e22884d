"""The named invariants: kernel invariants, Dickson invariants, lifts.

Three families, all products or sums of products of linear(ized) forms:

* kernel invariants of the translation group N:
      f_x = prod_{a in Lambda_1} (x + a z),   f_y likewise,   f_z = z.
  These are q^d-linearized in x (resp. y): only exponents q^m occur,
  q = 2^n, 0 <= m <= d.

* Dickson invariants of SL2(GF(q)) on the plane: c0 the product of all
  q^2-1 nonzero forms a x + b y over the subfield, c1 the sum over the
  q+1 lines of the product of the q^2-q forms not vanishing on the
  line, and the degree-(q+1) root u (product of the canonical class
  representatives) with u^(q-1) = c0.

* lifted invariants: every plane form a x + b y is replaced by
  a x + b y + g(a,b) z, with g the homogeneous cocycle companion; the
  same three constructions then yield u~, c1~, c0~ with u~^(q-1) = c0~
  and restrictions u, c1 at z = 0.  An optional scale multiplies g:
  scale 1 gives outputs invariant under the cocycle subgroup H_1, while
  the pipeline uses scale (1 + e^-1)^-1 to match the lifted generators
  actually closed over.

For a nontrivial kernel the whole lifted family is composed with
(f_x, f_y, alpha z^(q^d)) in place of (x, y, z), where alpha is the
affine offset of the diagonal lift read off by exact coefficient
comparison.
"""

from __future__ import annotations

from dataclasses import dataclass

from refl2.ffield import Fel, FieldCtx, subfield_elements, subfield_generator
from refl2.grouplift import LambdaSpace, Mat3, cocycle_g
from refl2.mvpoly import MultiPoly


# -- kernel invariants -----------------------------------------------------


def kernel_invariants(ls: LambdaSpace) -> tuple[MultiPoly, MultiPoly, MultiPoly]:
    """f_x = prod (x + a z), f_y = prod (y + a z) over Lambda_1, f_z = z."""
    ctx = ls.ambient
    fx = MultiPoly.one(ctx)
    fy = MultiPoly.one(ctx)
    for a in ls.lambda1():
        fx = fx * MultiPoly.linear_form(ctx, 1, 0, a)
        fy = fy * MultiPoly.linear_form(ctx, 0, 1, a)
    return fx, fy, MultiPoly.variable(ctx, 2)


def dickson_support_check(f: MultiPoly, n: int, d: int) -> bool:
    """True iff the x- (or y-) exponents all lie in {2^(mn) : 0 <= m <= d}.

    The variable checked is x when it occurs in f, else y.
    """
    idx = 0 if any(e > 0 for e in f.var_degrees(0)) else 1
    allowed = {1 << (m * n) for m in range(d + 1)}
    return all(e in allowed for e in f.var_degrees(idx))


def kernel_jacobian_expected(ls: LambdaSpace) -> MultiPoly:
    """(prod of nonzero Lambda_1 elements)^2 * z^(2 (2^(dn) - 1))."""
    ctx = ls.ambient
    c = 1
    for a in ls.lambda1():
        if a:
            c = ctx.mul(c, a)
    c = ctx.sqr(c)
    size = (1 << ls.n) ** ls.d
    return MultiPoly.from_terms(ctx, [((0, 0, 2 * (size - 1)), c)])


# -- the Dickson family ----------------------------------------------------


def projective_reps(n: int, ambient: FieldCtx) -> list[tuple[int, int]]:
    """Canonical representatives of the q+1 form (or direction) classes:
    first nonzero coordinate equal to 1, sorted by value."""
    sub = [s.bits for s in subfield_elements(ambient, n)]
    return [(0, 1)] + [(1, s) for s in sub]


def _nonzero_pairs(n: int, ambient: FieldCtx) -> list[tuple[int, int]]:
    sub = [s.bits for s in subfield_elements(ambient, n)]
    return [(a, b) for a in sub for b in sub if a or b]


def _lifted_family(
    ctx: FieldCtx,
    n: int,
    X: MultiPoly,
    Y: MultiPoly,
    Z: MultiPoly,
    gscale: int = 1,
) -> tuple[MultiPoly, MultiPoly, MultiPoly]:
    """(u-like, c1-like, c0-like) built from forms a X + b Y + s g(a,b) Z.

    Z = 0 gives the plain Dickson family in X, Y.
    """
    mul = ctx.mul

    def form(a: int, b: int) -> MultiPoly:
        p = X.scale(a) + Y.scale(b)
        if Z:
            g = cocycle_g(Fel(a, ctx), Fel(b, ctx), n).bits
            p = p + Z.scale(mul(gscale, g))
        return p

    u = MultiPoly.one(ctx)
    for a, b in projective_reps(n, ambient=ctx):
        u = u * form(a, b)

    c0 = MultiPoly.one(ctx)
    pairs = _nonzero_pairs(n, ctx)
    for a, b in pairs:
        c0 = c0 * form(a, b)

    c1 = MultiPoly.zero(ctx)
    for v0, v1 in projective_reps(n, ambient=ctx):
        # forms not vanishing on the line spanned by (v0, v1)
        prod = MultiPoly.one(ctx)
        for a, b in pairs:
            if mul(a, v0) ^ mul(b, v1):
                prod = prod * form(a, b)
        c1 = c1 + prod
    return u, c1, c0


def dickson_pair(n: int, ambient: FieldCtx) -> tuple[MultiPoly, MultiPoly]:
    """(c0, c1) for SL2(GF(2^n)) acting on the x,y-plane."""
    x = MultiPoly.variable(ambient, 0)
    y = MultiPoly.variable(ambient, 1)
    _, c1, c0 = _lifted_family(ambient, n, x, y, MultiPoly.zero(ambient))
    return c0, c1


def dickson_u(n: int, ambient: FieldCtx) -> MultiPoly:
    """The degree-(q+1) root u with u^(q-1) = c0."""
    x = MultiPoly.variable(ambient, 0)
    y = MultiPoly.variable(ambient, 1)
    u, _, _ = _lifted_family(ambient, n, x, y, MultiPoly.zero(ambient))
    return u


def lifted_invariants(
    n: int, ambient: FieldCtx, scale: int | Fel = 1
) -> tuple[MultiPoly, MultiPoly]:
    """(u~, c1~) with every plane form lifted by + scale*g(a,b)*z."""
    scale = scale.bits if isinstance(scale, Fel) else scale
    x = MultiPoly.variable(ambient, 0)
    y = MultiPoly.variable(ambient, 1)
    z = MultiPoly.variable(ambient, 2)
    u, c1, _ = _lifted_family(ambient, n, x, y, z, scale)
    return u, c1


def lifted_dickson_c0(
    n: int, ambient: FieldCtx, scale: int | Fel = 1
) -> MultiPoly:
    """c0~, the product of all lifted nonzero forms."""
    scale = scale.bits if isinstance(scale, Fel) else scale
    x = MultiPoly.variable(ambient, 0)
    y = MultiPoly.variable(ambient, 1)
    z = MultiPoly.variable(ambient, 2)
    _, _, c0 = _lifted_family(ambient, n, x, y, z, scale)
    return c0


# -- action of the lifts on the kernel invariants ---------------------------


class ActionShapeError(ValueError):
    """The image of a kernel invariant is not an affine combination of
    (f_x, f_y, z^(q^d)) -- signals a construction bug upstream."""


@dataclass(frozen=True)
class LiftAction:
    lift: Mat3
    lin: tuple[tuple[int, int], tuple[int, int]]
    offsets: tuple[int, int]


@dataclass(frozen=True)
class ActionDescriptor:
    """Exact affine action of each lift on (f_x, f_y): linear part over the
    subfield plus an offset multiple of z^(q^d)."""

    ctx: FieldCtx
    n: int
    d: int
    zpow: int
    actions: tuple[LiftAction, ...]
    alpha: int
    e: int

    @property
    def all_offsets_zero(self) -> bool:
        return all(a.offsets == (0, 0) for a in self.actions)


def _affine_decompose(img, fx, fy, zpow, what):
    """img = a fx + b fy + t z^zpow, by exact coefficient comparison."""
    a = img.coeff((zpow, 0, 0)).bits
    b = img.coeff((0, zpow, 0)).bits
    resid = img + fx.scale(a) + fy.scale(b)
    t = resid.coeff((0, 0, zpow)).bits
    resid = resid + MultiPoly.from_terms(img.ctx, [((0, 0, zpow), t)])
    if not resid.is_zero():
        raise ActionShapeError(
            f"image of {what} is not an affine combination of the kernel invariants"
        )
    return a, b, t


def kernel_action(
    lifts: list[Mat3],
    fx: MultiPoly,
    fy: MultiPoly,
    fz: MultiPoly,
    n: int | None = None,
) -> ActionDescriptor:
    """Decompose each lift's action on (f_x, f_y) exactly.

    Reports alpha, the z^(q^d)-offset of f_x under the diagonal lift
    (zero when every offset vanishes).  The subfield degree n is
    recovered from the lift entries when not given.
    """
    ctx = fx.ctx
    zpow = fx.deg()
    if fz != MultiPoly.variable(ctx, 2):
        raise ValueError("f_z must be the coordinate z")
    if n is None:
        n = _subfield_degree_of(lifts, ctx)
    d = 0
    while (1 << (n * d)) < zpow:
        d += 1
    if (1 << (n * d)) != zpow:
        raise ValueError("degree of f_x is not a power of the subfield size")
    actions = []
    alpha = 0
    for g in lifts:
        ax, bx, tx = _affine_decompose(fx.act(g), fx, fy, zpow, "f_x")
        ay, by, ty = _affine_decompose(fy.act(g), fx, fy, zpow, "f_y")
        for v in (ax, bx, ay, by):
            if not ctx.in_subfield(v, n):
                raise ActionShapeError("linear part has entries outside GF(2^n)")
        act = LiftAction(g, ((ax, bx), (ay, by)), (tx, ty))
        actions.append(act)
        if (tx or ty) and bx == 0 and ay == 0 and (ax, by) != (1, 1):
            alpha = tx
    e = subfield_generator(ctx, n).bits
    return ActionDescriptor(ctx, n, d, zpow, tuple(actions), alpha, e)


def _subfield_degree_of(lifts, ctx) -> int:
    # smallest n dividing m with all block entries Frobenius-fixed
    for n in range(1, ctx.m + 1):
        if ctx.m % n:
            continue
        if all(g.block_in_subfield(n) for g in lifts):
            return n
    raise ValueError("lift blocks lie in no proper subfield")


def composed_invariants(
    n: int, ls: LambdaSpace, descriptor: ActionDescriptor
) -> tuple[MultiPoly, MultiPoly, MultiPoly]:
    """(u-bar, c1-bar, z): the lifted family composed with the kernel
    invariants.

    With every offset zero the plain Dickson pair is composed with
    (f_x, f_y); otherwise the lifted family is composed with
    (f_x, f_y, alpha z^(q^d)), the cocycle scaled by (1 + e^-1)^-1 so
    the outputs are fixed by the lifted generators as displayed.
    """
    ctx = ls.ambient
    if descriptor.ctx != ctx or descriptor.n != n or descriptor.d != ls.d:
        raise ValueError("descriptor does not match the Lambda space")
    fx, fy, fz = kernel_invariants(ls)
    if descriptor.all_offsets_zero:
        u, c1, _ = _lifted_family(ctx, n, fx, fy, MultiPoly.zero(ctx))
        return u, c1, fz
    alpha = descriptor.alpha
    if alpha == 0:
        raise ActionShapeError("nonzero offsets but no diagonal-lift offset found")
    zq = MultiPoly.from_terms(ctx, [((0, 0, descriptor.zpow), alpha)])
    delta = 1 ^ ctx.inv(descriptor.e)
    if delta == 0:
        raise ValueError("lift normalization needs a subfield with e != 1")
    u, c1, _ = _lifted_family(ctx, n, fx, fy, zq, ctx.inv(delta))
    return u, c1, fz

"""Connected-sum products: tensor complexes and product involutions.

Generators of a tensor product are ordered pairs serialized as `x|y`;
gradings add and the differential follows the Leibniz rule.  The two
involution products differ by a correction term built from the
derivative maps of the factors; on reduced complexes they are exchanged
by the explicit unit 1 + (derivative tensor), which `product_equivalence`
constructs and verifies.
"""

from __future__ import annotations

from .complexes import Complex, Generator
from .errors import StructuralError
from .morphism import IotaData, LinMap, derivative_maps, identity_map
from .ring import Ideal, RingElt

PAIR_SEP = "|"


def pair_name(x: str, y: str) -> str:
    return f"{x}{PAIR_SEP}{y}"


def tensor(C1: Complex, C2: Complex) -> Complex:
    """Tensor product over the coefficient ring, with Leibniz differential."""
    if C1.ring != C2.ring:
        raise StructuralError("tensor factors live over different rings")
    basis = [Generator(pair_name(x.name, y.name), x.gr_u + y.gr_u,
                       x.gr_v + y.gr_v)
             for x in C1.basis for y in C2.basis]
    diff: dict[str, dict[str, RingElt]] = {}
    for x in C1.basis:
        dx = C1.d_of(x.name)
        for y in C2.basis:
            row: dict[str, RingElt] = {}
            for tgt, coeff in dx.items():
                row[pair_name(tgt, y.name)] = coeff
            for tgt, coeff in C2.d_of(y.name).items():
                key = pair_name(x.name, tgt)
                cur = row.get(key, RingElt.zero()) + coeff
                if cur.is_zero():
                    row.pop(key, None)
                else:
                    row[key] = cur
            if row:
                diff[pair_name(x.name, y.name)] = row
    return Complex(basis, diff, C1.ring, f"{C1.name}{PAIR_SEP}{C2.name}")


def map_tensor(f: LinMap, g: LinMap, T: Complex | None = None) -> LinMap:
    """f tensor g as a map on the tensor complex.

    Variances must agree (equivariant with equivariant, skew with skew);
    bidegrees add.  Pass T to reuse an already-built tensor complex.
    """
    if f.variance != g.variance or f.variance == "linear":
        raise StructuralError("tensor of maps needs matching eq/skew variance")
    if f.ideal != g.ideal:
        raise StructuralError("tensor of maps needs a common ideal")
    if T is None:
        T = tensor(f.source, g.source)
    if f.source is not f.target or g.source is not g.target:
        raise StructuralError("map_tensor currently supports endomorphisms")
    action: dict[str, dict[str, RingElt]] = {}
    for x, frow in f.action.items():
        for y, grow in g.action.items():
            out: dict[str, RingElt] = {}
            for xt, cf in frow.items():
                for yt, cg in grow.items():
                    coeff = (cf * cg).reduce(f.ideal)
                    if coeff.is_zero():
                        continue
                    key = pair_name(xt, yt)
                    cur = out.get(key, RingElt.zero()) + coeff
                    if cur.is_zero():
                        out.pop(key, None)
                    else:
                        out[key] = cur
            if out:
                action[pair_name(x, y)] = out
    bidegree = (f.bidegree[0] + g.bidegree[0], f.bidegree[1] + g.bidegree[1])
    return LinMap(T, T, f.variance, bidegree, action, f.ideal)


def _lift_mod_uv(i: IotaData) -> LinMap:
    """View an almost involution's basis-level action over the full ring."""
    return LinMap(i.map.source, i.map.target, "skew", (0, 0), i.map.action,
                  Ideal.zero())


def product_iota(C1: Complex, i1: IotaData, C2: Complex, i2: IotaData,
                 variant: int, T: Complex | None = None) -> IotaData:
    """Involution of the tensor product, variant 1 or 2.

    Variant 1 adds the correction (Phi_1 tensor Psi_2) after the raw
    tensor involution, variant 2 uses (Psi_1 tensor Phi_2).  In almost
    mode the formula is evaluated literally with the basis-level lift
    of the factors and then reduced mod (U,V).
    """
    if i1.mode != i2.mode:
        raise StructuralError("product needs involutions in the same mode")
    if variant not in (1, 2):
        raise StructuralError(f"unknown product variant {variant}")
    if T is None:
        T = tensor(C1, C2)
    phi1, psi1 = derivative_maps(C1)
    phi2, psi2 = derivative_maps(C2)
    m1 = _lift_mod_uv(i1) if i1.mode == "almost" else i1.map
    m2 = _lift_mod_uv(i2) if i2.mode == "almost" else i2.map
    raw = map_tensor(m1, m2, T)
    corr = map_tensor(phi1, psi2, T) if variant == 1 else map_tensor(psi1, phi2, T)
    total = raw + corr.compose(raw)
    if i1.mode == "almost":
        total = total.reduce_to(Ideal.max_ideal())
    return IotaData(total, i1.mode)


def product_equivalence(C1: Complex, i1: IotaData, C2: Complex, i2: IotaData,
                        T: Complex | None = None) -> tuple[LinMap, LinMap]:
    """Chain maps exchanging the two product involutions mod (U,V).

    Returns (f, g) with f intertwining variant 1 into variant 2 and g
    the other way; both are the identity plus a derivative-map tensor,
    hence chain maps fixing the tower.  Raises if the intertwining
    fails, which only happens for involutions violating the exchange
    relations iota Phi = Psi iota mod (U,V).
    """
    if T is None:
        T = tensor(C1, C2)
    phi1, psi1 = derivative_maps(C1)
    phi2, psi2 = derivative_maps(C2)
    one = identity_map(T)
    f = one + map_tensor(psi1, phi2, T)
    g = one + map_tensor(phi1, psi2, T)
    ia = product_iota(C1, i1, C2, i2, 1, T)
    ib = product_iota(C1, i1, C2, i2, 2, T)
    max_ideal = Ideal.max_ideal()
    fa = f.reduce_to(max_ideal).compose(ia.map)
    af = ib.map.compose(f.reduce_to(max_ideal))
    if fa + af != LinMap(T, T, "skew", (0, 0), {}, max_ideal):
        raise StructuralError("variant exchange map fails to intertwine")
    gb = g.reduce_to(max_ideal).compose(ib.map)
    bg = ia.map.compose(g.reduce_to(max_ideal))
    if gb + bg != LinMap(T, T, "skew", (0, 0), {}, max_ideal):
        raise StructuralError("variant exchange map fails to intertwine")
    return f, g


def tensor_many(factors: list[Complex]) -> Complex:
    """Iterated binary tensor, associating to the left."""
    if not factors:
        raise StructuralError("need at least one factor")
    out = factors[0]
    for C in factors[1:]:
        out = tensor(out, C)
    return out

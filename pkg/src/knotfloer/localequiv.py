"""Local-map search, self-local equivalences, and the connected complex.

Local maps are grading-preserving chain maps that intertwine the
involutions up to skew homotopy and carry the free tower of the source
to a generator of the target tower.  On reduced complexes the almost
version turns the homotopy into an equality mod (U,V), so the whole
search is affine-linear over F2: chain-map and intertwining equations,
plus one locality equation evaluated on homology.

Nonexistence answers are certificates: map spaces are grading-complete
at the computed exponent cap, so an inconsistent system rules out every
candidate, quantified over all enumerated involution completions.
"""

from __future__ import annotations

from dataclasses import dataclass

from .complexes import Complex, Element, add_term
from .errors import ResourceError, StructuralError
from .homology import UHomology, hfk_minus, torsion_order
from .linalg import GF2System, bits_of, rref_basis
from .morphism import (IotaData, LinMap, MapSpace, auto_cap, chain_defect,
                       enumerate_almost_iotas, solve_homotopy, validate_iota)
from .ring import Ideal, Mono, RingElt

DEFAULT_BUDGET = 2_000_000

IotaInput = IotaData | list[IotaData] | None


@dataclass(frozen=True)
class LocalSearchSpec:
    """One local-map existence question, with search parameters.

    cap is recomputed from gradings and only ever grows from the user
    value, so capped searches remain exhaustive.  ideal_override relaxes
    the chain-map equations modulo a larger ideal for obstruction runs;
    existence under an override is not a local map, but nonexistence
    still rules out every genuine candidate.
    """

    source: tuple[Complex, IotaInput]
    target: tuple[Complex, IotaInput]
    mode: str = "almost"
    cap: int | None = None
    ideal_override: Ideal | None = None
    budget: int = DEFAULT_BUDGET

    def __post_init__(self) -> None:
        if self.mode not in ("almost", "local"):
            raise StructuralError(f"unknown search mode {self.mode!r}")


@dataclass(frozen=True)
class NonexistenceToken:
    """Dimensions of the exhausted F2 search space."""

    unknowns: int
    equations: int
    cap: int
    iota_pairs: int
    mode: str

    def render(self) -> str:
        return (f"nonexistence mode={self.mode} unknowns={self.unknowns} "
                f"equations={self.equations} cap={self.cap} "
                f"iota_pairs={self.iota_pairs}")


@dataclass(frozen=True)
class LocalCertificate:
    """Either a re-verified map (with homotopy witness in full mode) or
    a nonexistence token covering the whole truncated space."""

    found: LinMap | None = None
    witness: LinMap | None = None
    iota_pair: tuple[IotaData, IotaData] | None = None
    token: NonexistenceToken | None = None

    @property
    def exists(self) -> bool:
        return self.found is not None


def omega(i: IotaData) -> LinMap:
    """1 + iota as an F2-linear map mod (U,V).

    The sum of the identity with a skew map is neither equivariant nor
    skew over the full ring, so omega always lives mod (U,V); full-mode
    data is reduced first.
    """
    m = i.map.reduce_to(Ideal.max_ideal())
    C = m.source
    action: dict[str, dict[str, RingElt]] = {}
    for g in C.basis:
        row: dict[str, RingElt] = {g.name: RingElt.one()}
        for tgt, coeff in m.of_gen(g.name).items():
            add_term(row, tgt, coeff)
        row = {k: v for k, v in row.items() if not v.is_zero()}
        if row:
            action[g.name] = row
    return LinMap(C, C, "linear", (0, 0), action, Ideal.max_ideal())


# -- the affine search core -------------------------------------------------

def _tower_element(H: UHomology) -> tuple[Element, int]:
    """Tower generator as an element of C/(V), with its grading."""
    col = H.tower_generator()
    grading = col.col_gr[0]
    elt: Element = {}
    for r, row in enumerate(col.rows):
        if row & 1:
            gen = H.C.basis[r]
            k = (gen.gr_u - grading) // 2
            elt[gen.name] = RingElt.mono(k, 0)
    return elt, grading


def _mod_v(elt: Element) -> Element:
    out: Element = {}
    for name, coeff in elt.items():
        red = coeff.reduce(Ideal.principal_v())
        if not red.is_zero():
            out[name] = red
    return out


def _locality_bit(f: LinMap, src_elt: Element, grading: int,
                  tgt_hom: UHomology) -> bool:
    """Tower coefficient of the class of f(tower generator).

    Only valid when f is a chain map (so the image is a cycle mod V).
    """
    image = _mod_v(f.apply(src_elt))
    vec = tgt_hom.vector_from_element(image, grading)
    return tgt_hom.tower_unit_coefficient(vec)


def _iota_candidates(C: Complex, data: IotaInput, mode: str) -> list[IotaData]:
    if data is None:
        if mode != "almost":
            raise StructuralError(
                "full-mode search needs explicit involution data")
        return enumerate_almost_iotas(C)
    if isinstance(data, IotaData):
        data = [data]
    out = []
    for i in data:
        if mode == "almost" and i.mode == "full":
            i = IotaData(i.map.reduce_to(Ideal.max_ideal()), "almost")
        rep = validate_iota(C, i)
        if not rep.ok:
            raise StructuralError(
                f"involution fails validation: {'; '.join(rep.messages)}")
        out.append(i)
    return out


class _AffineSearch:
    """Affine solution set of the linear part, parameterized over F2^q."""

    def __init__(self, width: int):
        self.width = width
        self.system = GF2System(width)

    def add_columns(self, columns: list[int], nslots: int, rhs_vec: int = 0):
        rows: dict[int, int] = {}
        for k, col in enumerate(columns):
            for t in bits_of(col):
                rows[t] = rows.get(t, 0) | (1 << k)
        for t in range(nslots):
            self.system.add_equation(rows.get(t, 0), (rhs_vec >> t) & 1)
        return self.system.feasible

    def solve(self) -> tuple[int, list[int]] | None:
        if not self.system.feasible:
            return None
        return self.system.solution_space()


def search_local_map(spec: LocalSearchSpec) -> LocalCertificate:
    """Decide existence of a (almost) local map, or produce a certificate.

    The procedure solves the chain-map equations, intersects with the
    intertwining condition for each involution pair, then restricts to
    candidates carrying the tower class to a tower generator.  Any
    found map is re-verified from scratch before being returned.
    """
    src, src_iota_in = spec.source
    tgt, tgt_iota_in = spec.target
    for C in (src, tgt):
        if not C.validate().ok:
            raise StructuralError(f"complex {C.name} fails validation")
    src_hom = UHomology(src)
    tgt_hom = UHomology(tgt)
    if src_hom.decomp.tower_count != 1 or tgt_hom.decomp.tower_count != 1:
        raise StructuralError("local maps need exactly one tower on each side")

    cap = auto_cap(src, tgt)
    if spec.cap is not None:
        cap = max(cap, spec.cap)
    ideal = spec.ideal_override or src.ring
    fspace = MapSpace.build(src, tgt, "eq", (0, 0), ideal, cap)
    hspace = None
    width = fspace.dim
    if spec.mode == "local":
        hspace = MapSpace.build(src, tgt, "skew", (1, 1), src.ring, cap)
        width += hspace.dim
    if width > spec.budget:
        raise ResourceError(
            f"{width} unknowns exceed the budget {spec.budget}", width)

    src_iotas = _iota_candidates(src, src_iota_in, spec.mode)
    tgt_iotas = _iota_candidates(tgt, tgt_iota_in, spec.mode)

    # stage 1: chain-map equations on f
    chain_slot = MapSpace.build(src, tgt, "eq", (-1, -1), ideal, cap)
    base = _AffineSearch(width)
    cols = []
    for k in range(fspace.dim):
        unit = fspace.map_from_bits(1 << k)
        cols.append(chain_slot.bits_from_map(chain_defect(unit)))
    cols += [0] * (width - fspace.dim)
    n_equations = chain_slot.dim
    if not base.add_columns(cols, chain_slot.dim):
        return LocalCertificate(token=NonexistenceToken(
            width, n_equations, cap, 0, spec.mode))

    solved = base.solve()
    particular, null_basis = solved
    fmask = (1 << fspace.dim) - 1

    # locality, evaluated on the affine parameterization (each basis
    # vector is a chain map, so its image class is defined)
    src_elt, src_grading = _tower_element(src_hom)
    can_evaluate_locality = spec.ideal_override is None

    def locality_of(bits: int) -> bool:
        f = fspace.map_from_bits(bits & fmask)
        return _locality_bit(f, src_elt, src_grading, tgt_hom)

    if can_evaluate_locality:
        loc_p = locality_of(particular)
        loc_n = [locality_of(v) for v in null_basis]

    # intertwining slots
    if spec.mode == "almost":
        int_slot = MapSpace.build(src, tgt, "skew", (0, 0),
                                  Ideal.max_ideal(), cap)
    else:
        int_slot = MapSpace.build(src, tgt, "skew", (0, 0), src.ring, cap)

    def intertwine_columns(i1: IotaData, i2: IotaData) -> list[int]:
        cols = []
        for k in range(fspace.dim):
            unit = fspace.map_from_bits(1 << k)
            if spec.mode == "almost":
                u = unit.reduce_to(Ideal.max_ideal())
                defect = u.compose(i1.map) + i2.map.compose(u)
            else:
                defect = unit.compose(i1.map) + i2.map.compose(unit)
            cols.append(int_slot.bits_from_map(defect))
        if hspace is not None:
            for k in range(hspace.dim):
                H = hspace.map_from_bits(1 << k)
                cols.append(int_slot.bits_from_map(chain_defect(H)))
        return cols

    pairs = [(i1, i2) for i1 in src_iotas for i2 in tgt_iotas]
    n_unknowns_total = width
    for (i1, i2) in pairs:
        inner = GF2System(len(null_basis))
        cols = intertwine_columns(i1, i2)
        # translate raw intertwining rows into the t-parameter space
        raw_rows: dict[int, int] = {}
        for k, col in enumerate(cols):
            for t in bits_of(col):
                raw_rows[t] = raw_rows.get(t, 0) | (1 << k)
        feasible = True
        for t, raw in raw_rows.items():
            trow = 0
            for idx, nv in enumerate(null_basis):
                if bin(raw & nv).count("1") % 2:
                    trow |= 1 << idx
            rhs = bin(raw & particular).count("1") % 2
            if not inner.add_equation(trow, rhs):
                feasible = False
                break
        n_equations += len(raw_rows)
        if feasible and can_evaluate_locality:
            lrow = 0
            for idx in range(len(null_basis)):
                if loc_n[idx]:
                    lrow |= 1 << idx
            feasible = inner.add_equation(lrow, 1 ^ loc_p)
        if not feasible:
            continue
        t_bits = inner.particular_solution()
        bits = particular
        for idx in bits_of(t_bits):
            bits ^= null_basis[idx]
        f = fspace.map_from_bits(bits & fmask)
        witness = None
        if hspace is not None:
            witness = hspace.map_from_bits(bits >> fspace.dim)
        ok, witness = _verify_found(f, witness, i1, i2, spec, tgt_hom,
                                    src_elt, src_grading)
        if not ok:
            raise StructuralError("solver produced a map that fails "
                                  "re-verification")
        return LocalCertificate(found=f, witness=witness, iota_pair=(i1, i2))
    return LocalCertificate(token=NonexistenceToken(
        n_unknowns_total, n_equations, cap, len(pairs), spec.mode))


def _verify_found(f: LinMap, witness: LinMap | None, i1: IotaData,
                  i2: IotaData, spec: LocalSearchSpec, tgt_hom: UHomology,
                  src_elt: Element, src_grading: int):
    if not chain_defect(f).is_zero():
        return False, witness
    if spec.mode == "almost":
        u = f.reduce_to(Ideal.max_ideal())
        if not (u.compose(i1.map) + i2.map.compose(u)).is_zero():
            return False, witness
    else:
        lhs = f.compose(i1.map) + i2.map.compose(f)
        if witness is None or not (lhs + chain_defect(witness)).is_zero():
            witness = solve_homotopy(f.compose(i1.map), i2.map.compose(f))
            if witness is None:
                return False, None
    if spec.ideal_override is None:
        if not _locality_bit(f, src_elt, src_grading, tgt_hom):
            return False, witness
    return True, witness


def verify_almost_local(f: LinMap, i1: IotaData, i2: IotaData) -> bool:
    """Re-check the three almost-local conditions for a candidate map."""
    if not chain_defect(f).is_zero():
        return False
    u = f.reduce_to(Ideal.max_ideal())
    if not (u.compose(i1.map) + i2.map.compose(u)).is_zero():
        return False
    src_hom = UHomology(f.source)
    tgt_hom = UHomology(f.target)
    src_elt, grading = _tower_element(src_hom)
    return _locality_bit(f, src_elt, grading, tgt_hom)


# -- self-local equivalences and the connected complex ----------------------

@dataclass(frozen=True)
class KernelSpace:
    """Kernel of an equivariant map on the exponent-truncated module."""

    terms: tuple[tuple[str, int, int], ...]
    rows: tuple[int, ...]  # reduced basis over the term index space

    @property
    def dim(self) -> int:
        return len(self.rows)

    def contains(self, other: "KernelSpace") -> bool:
        if self.terms != other.terms:
            raise StructuralError("kernel spaces over different truncations")
        rows, pivots = rref_basis(list(self.rows))
        for v in other.rows:
            for piv, row in zip(pivots, rows):
                if (v >> piv) & 1:
                    v ^= row
            if v:
                return False
        return True


@dataclass(frozen=True)
class SelfLocalMap:
    map: LinMap
    kernel: KernelSpace


def kernel_space(C: Complex, f: LinMap, cap: int) -> KernelSpace:
    terms = [(g.name, a, b) for g in C.basis
             for a in range(cap + 1) for b in range(cap + 1)]
    index = {t: k for k, t in enumerate(terms)}
    max_exp = 0
    for row in f.action.values():
        for coeff in row.values():
            for m in coeff:
                max_exp = max(max_exp, m.i, m.j)
    out_terms = [(g.name, a, b) for g in C.basis
                 for a in range(cap + max_exp + 1)
                 for b in range(cap + max_exp + 1)]
    out_index = {t: k for k, t in enumerate(out_terms)}
    columns = []
    for (name, a, b) in terms:
        col = 0
        for tgt, coeff in f.of_gen(name).items():
            for m in coeff:
                col ^= 1 << out_index[(tgt, a + m.i, b + m.j)]
        columns.append(col)
    # nullspace of the truncated matrix
    sys = GF2System(len(terms))
    rows: dict[int, int] = {}
    for k, col in enumerate(columns):
        for t in bits_of(col):
            rows[t] = rows.get(t, 0) | (1 << k)
    for row in rows.values():
        sys.add_equation(row, 0)
    basis = sys.nullspace_basis()
    reduced, _ = rref_basis(basis)
    return KernelSpace(tuple(terms), tuple(sorted(reduced)))


class SelfLocalFamily:
    """Affine set of almost self-local maps of (C, iota), in t-coordinates.

    Exposes exact certificates over the whole family (for example that
    a diagonal coefficient is constantly 1), which stay available when
    the family is too large to enumerate member by member.
    """

    def __init__(self, C: Complex, iota: IotaData, budget: int):
        rep = validate_iota(C, iota)
        if not rep.ok:
            raise StructuralError(
                f"involution fails validation: {'; '.join(rep.messages)}")
        self.C = C
        self.iota = iota
        self.cap = auto_cap(C)
        self.hom = UHomology(C)
        if self.hom.decomp.tower_count != 1:
            raise StructuralError("self-local maps need exactly one tower")
        self.fspace = MapSpace.build(C, C, "eq", (0, 0), C.ring, self.cap)
        if self.fspace.dim > budget:
            raise ResourceError(
                f"{self.fspace.dim} unknowns exceed the budget {budget}",
                self.fspace.dim)
        chain_slot = MapSpace.build(C, C, "eq", (-1, -1), C.ring, self.cap)
        int_slot = MapSpace.build(C, C, "skew", (0, 0), Ideal.max_ideal(),
                                  self.cap)
        base = _AffineSearch(self.fspace.dim)
        cols = []
        icols = []
        for k in range(self.fspace.dim):
            unit = self.fspace.map_from_bits(1 << k)
            cols.append(chain_slot.bits_from_map(chain_defect(unit)))
            u = unit.reduce_to(Ideal.max_ideal())
            icols.append(int_slot.bits_from_map(
                u.compose(iota.map) + iota.map.compose(u)))
        if not base.add_columns(cols, chain_slot.dim):
            raise StructuralError("no chain maps at all; malformed complex")
        base.add_columns(icols, int_slot.dim)
        solved = base.solve()
        if solved is None:
            raise StructuralError("no involution-intertwining chain maps")
        self.particular, self.null_basis = solved
        src_elt, grading = _tower_element(self.hom)
        self._tower = (src_elt, grading)

        def loc(bits: int) -> bool:
            f = self.fspace.map_from_bits(bits)
            return _locality_bit(f, src_elt, grading, self.hom)

        self.loc_p = loc(self.particular)
        self.loc_n = [loc(v) for v in self.null_basis]
        self.inner = GF2System(len(self.null_basis))
        lrow = 0
        for idx, bit in enumerate(self.loc_n):
            if bit:
                lrow |= 1 << idx
        if not self.inner.add_equation(lrow, 1 ^ self.loc_p):
            raise StructuralError("no self-local equivalence exists at all")

    def copy_inner(self) -> GF2System:
        return self.inner.copy()

    def bits_from_t(self, t_bits: int) -> int:
        bits = self.particular
        for idx in bits_of(t_bits):
            bits ^= self.null_basis[idx]
        return bits

    def map_from_t(self, t_bits: int) -> LinMap:
        return self.fspace.map_from_bits(self.bits_from_t(t_bits))

    def raw_constraint_to_t(self, raw_row: int) -> tuple[int, int]:
        trow = 0
        for idx, nv in enumerate(self.null_basis):
            if bin(raw_row & nv).count("1") % 2:
                trow |= 1 << idx
        rhs = bin(raw_row & self.particular).count("1") % 2
        return trow, rhs

    def free_dim(self, inner: GF2System) -> int:
        return len(self.null_basis) - inner.rank

    @property
    def dimension(self) -> int:
        return self.free_dim(self.inner)

    def unit_coefficient_constant(self, src: str, tgt: str) -> tuple[bool, int]:
        """Whether <f(src), tgt> takes one value over the whole family.

        Returns (constant?, value at the particular solution).  The
        coefficient is the unit-monomial coordinate, an affine functional
        of the solution parameters, so constancy is decided exactly.
        """
        key = (src, tgt, Mono(0, 0))
        k0 = self.fspace.pair_index.get(key)
        if k0 is None:
            return True, 0
        t_part = self.inner.particular_solution()
        value = (self.bits_from_t(t_part) >> k0) & 1
        for w in self.inner.nullspace_basis():
            raw = 0
            for idx in bits_of(w):
                raw ^= self.null_basis[idx]
            if (raw >> k0) & 1:
                return False, value
        return True, value

    def sample_members(self, count: int, seed: int = 0) -> list[LinMap]:
        """Deterministic sample of family members (first one is the
        particular solution)."""
        import random

        rng = random.Random(seed)
        t_part = self.inner.particular_solution()
        t_null = self.inner.nullspace_basis()
        out = [self.map_from_t(t_part)]
        for _ in range(max(0, count - 1)):
            t = t_part
            for w in t_null:
                if rng.getrandbits(1):
                    t ^= w
            out.append(self.map_from_t(t))
        return out


def self_local_equivalences(C: Complex, iota: IotaData,
                            budget: int = DEFAULT_BUDGET,
                            enumeration_log2: int = 14) -> list[SelfLocalMap]:
    """Enumerate verified almost self-local maps, paired with kernels.

    Raises ResourceError when the solution space is larger than
    2**enumeration_log2 or the unknown count exceeds the budget.
    """
    sls = SelfLocalFamily(C, iota, budget)
    inner = sls.copy_inner()
    dim = sls.free_dim(inner)
    if dim > enumeration_log2:
        raise ResourceError(
            f"2^{dim} self-local maps exceed the enumeration bound", dim)
    t_part = inner.particular_solution()
    t_null = inner.nullspace_basis()
    out = []
    for counter in range(1 << len(t_null)):
        t = t_part
        for idx in bits_of(counter):
            t ^= t_null[idx]
        f = sls.map_from_t(t)
        if not verify_almost_local(f, iota, iota):
            raise StructuralError("enumerated map fails re-verification")
        out.append(SelfLocalMap(f, kernel_space(C, f, sls.cap)))
    out.sort(key=lambda s: s.map.render())
    return out


def _kill_candidates(C: Complex, fspace: MapSpace, order: str):
    """Constraint rows for killing basis vectors, in a deterministic order.

    Singles first (killing any monomial multiple of a generator forces
    f(x) = 0 on the whole generator), then minimal two-term homogeneous
    combinations.
    """
    by_source: dict[str, list[int]] = {}
    for k, (srcn, _, _) in enumerate(fspace.pairs):
        by_source.setdefault(srcn, []).append(k)
    singles = []
    for g in C.basis:
        rows = [(1 << k, 0) for k in by_source.get(g.name, [])]
        singles.append((f"gen {g.name}", rows))
    pairs = []
    names = C.names()
    for xi in range(len(names)):
        for yi in range(xi + 1, len(names)):
            x, y = C.basis[xi], C.basis[yi]
            du, dv = x.gr_u - y.gr_u, x.gr_v - y.gr_v
            if du % 2 or dv % 2:
                continue
            a = max(0, -du // 2)
            b = max(0, -dv // 2)
            a2 = a + du // 2
            b2 = b + dv // 2
            # constraint f(U^a V^b x + U^a2 V^b2 y) = 0, grouped by slot
            slots: dict[tuple[str, int, int], int] = {}
            for k in by_source.get(x.name, []):
                _, tgt, m = fspace.pairs[k]
                key = (tgt, a + m.i, b + m.j)
                slots[key] = slots.get(key, 0) | (1 << k)
            for k in by_source.get(y.name, []):
                _, tgt, m = fspace.pairs[k]
                key = (tgt, a2 + m.i, b2 + m.j)
                slots[key] = slots.get(key, 0) | (1 << k)
            rows = [(row, 0) for row in slots.values()]
            pairs.append((f"pair {x.name}+{y.name}", rows))
    cands = singles + pairs
    if order == "reverse":
        cands = list(reversed(cands))
    return cands


def maximal_self_local_map(C: Complex, iota: IotaData,
                           budget: int = DEFAULT_BUDGET,
                           order: str = "forward") -> tuple[LinMap, KernelSpace, str]:
    """Greedy kernel-maximal self-local equivalence.

    Grows the kernel over a deterministic family of candidate vectors
    until no candidate can be added; the certificate string records that
    maximality is relative to the truncation and candidate family.
    """
    sls = SelfLocalFamily(C, iota, budget)
    inner = sls.copy_inner()
    candidates = _kill_candidates(C, sls.fspace, order)
    accepted: set[str] = set()
    changed = True
    while changed:
        changed = False
        for label, rows in candidates:
            if label in accepted:
                continue
            trial = inner.copy()
            ok = True
            for raw, rhs in rows:
                trow, tr = sls.raw_constraint_to_t(raw)
                if not trial.add_equation(trow, tr ^ rhs):
                    ok = False
                    break
            if ok and trial.feasible:
                inner = trial
                accepted.add(label)
                changed = True
    f = sls.map_from_t(inner.particular_solution())
    if not verify_almost_local(f, iota, iota):
        raise StructuralError("maximal candidate fails re-verification")
    ker = kernel_space(C, f, sls.cap)
    note = (f"maximal within cap {sls.cap} over "
            f"{len(candidates)} candidate vectors ({order} order)")
    return f, ker, note


def image_complex(C: Complex, f: LinMap, name: str = "conn") -> Complex:
    """The image of an equivariant grading-preserving chain map, as a
    free complex on a minimal generating set.

    Valid when ker f and im f intersect trivially (true for
    kernel-maximal self-local maps); the result is then a free direct
    summand subcomplex.
    """
    cap = auto_cap(C)
    max_exp = 0
    for row in f.action.values():
        for coeff in row.values():
            for m in coeff:
                max_exp = max(max_exp, m.i, m.j)
    bound = 2 * cap + max_exp + 2

    gradings = sorted({(g.gr_u, g.gr_v) for g in C.basis}, reverse=True)

    def piece_terms(p, q):
        out = []
        for g in C.basis:
            du, dv = g.gr_u - p, g.gr_v - q
            if du >= 0 and dv >= 0 and du % 2 == 0 and dv % 2 == 0 \
                    and du // 2 <= bound and dv // 2 <= bound:
                out.append((g.name, du // 2, dv // 2))
        return out

    def vec_of_element(elt: Element, terms, index):
        v = 0
        for gname, coeff in elt.items():
            for m in coeff:
                key = (gname, m.i, m.j)
                if key not in index:
                    raise ResourceError("exponent bound exceeded in image "
                                        "construction", m.i + m.j)
                v ^= 1 << index[key]
        return v

    def image_span(p, q):
        """Spanning vectors of f(C_(p,q)) in the (p,q) coordinate space."""
        terms = piece_terms(p, q)
        index = {t: k for k, t in enumerate(terms)}
        vecs = []
        elts = []
        for (gname, a, b) in terms:
            img = f.of_gen(gname)
            if not img:
                continue
            elt: Element = {}
            for tgt, coeff in img.items():
                add_term(elt, tgt, coeff.scale(Mono(a, b)))
            if elt:
                vecs.append(vec_of_element(elt, terms, index))
                elts.append(elt)
        return terms, index, vecs, elts

    generators: list[tuple[str, int, int, Element]] = []
    used_names: set[str] = set()
    for (p, q) in gradings:
        terms, index, vecs, elts = image_span(p, q)
        shifted = []
        for sp, sq, mono in ((p + 2, q, Mono(1, 0)), (p, q + 2, Mono(0, 1))):
            _, _, _, selts = image_span(sp, sq)
            for elt in selts:
                moved: Element = {}
                for gname, coeff in elt.items():
                    add_term(moved, gname, coeff.scale(mono))
                shifted.append(vec_of_element(moved, terms, index))
        # pick image elements completing (U,V) * im inside this piece
        rows, pivots = rref_basis(shifted)
        for vec, elt in zip(vecs, elts):
            v = vec
            for piv, row in zip(pivots, rows):
                if (v >> piv) & 1:
                    v ^= row
            if v == 0:
                continue
            piv = v.bit_length() - 1
            for kdx, row in enumerate(rows):
                if (row >> piv) & 1:
                    rows[kdx] = row ^ v
            idx = 0
            while idx < len(pivots) and pivots[idx] > piv:
                idx += 1
            rows.insert(idx, v)
            pivots.insert(idx, piv)
            label = None
            if len(elt) == 1:
                (only_name, coeff), = elt.items()
                if coeff.is_one() and only_name not in used_names:
                    label = only_name
            if label is None:
                label = f"x{len(generators)}"
            used_names.add(label)
            generators.append((label, p, q, elt))

    from .complexes import Generator  # local import to avoid cycle noise

    basis = [Generator(lbl, p, q) for (lbl, p, q, _) in generators]
    gen_elements = {lbl: elt for (lbl, p, q, elt) in generators}

    diff: dict[str, dict[str, RingElt]] = {}
    for (lbl, p, q, elt) in generators:
        boundary = C.apply_d(elt)
        if not boundary:
            continue
        tp, tq = p - 1, q - 1
        terms = piece_terms(tp, tq)
        index = {t: k for k, t in enumerate(terms)}
        target_vec = vec_of_element(boundary, terms, index)
        unknown_cols = []
        unknown_meta = []
        for (lbl2, p2, q2, elt2) in generators:
            du, dv = p2 - tp, q2 - tq
            if du < 0 or dv < 0 or du % 2 or dv % 2:
                continue
            m = Mono(du // 2, dv // 2)
            moved: Element = {}
            for gname, coeff in elt2.items():
                add_term(moved, gname, coeff.scale(m))
            unknown_cols.append(vec_of_element(moved, terms, index))
            unknown_meta.append((lbl2, m))
        sysq = GF2System(len(unknown_cols))
        rows: dict[int, int] = {}
        for k, col in enumerate(unknown_cols):
            for t in bits_of(col):
                rows[t] = rows.get(t, 0) | (1 << k)
        for t in range(len(terms)):
            sysq.add_equation(rows.get(t, 0), (target_vec >> t) & 1)
        if not sysq.feasible:
            raise StructuralError("image is not closed under d in the "
                                  "computed generating set")
        sol = sysq.particular_solution()
        row_out: dict[str, RingElt] = {}
        for k in bits_of(sol):
            lbl2, m = unknown_meta[k]
            add_term(row_out, lbl2, RingElt((m,)))
        if row_out:
            diff[lbl] = row_out
    return Complex(basis, diff, C.ring, name)


def connected_complex(C: Complex, iota: IotaData,
                      budget: int = DEFAULT_BUDGET,
                      order: str = "forward") -> Complex:
    """Image of a kernel-maximal self-local equivalence."""
    f, _, note = maximal_self_local_map(C, iota, budget, order)
    return image_complex(C, f, name=f"{C.name}_conn")


def concordance_unknotting_bound(C: Complex, iota: IotaData,
                                 budget: int = DEFAULT_BUDGET) -> int:
    """Torsion order of the homology of the connected complex mod V."""
    conn = connected_complex(C, iota, budget)
    return torsion_order(hfk_minus(conn))

"""F2[U]-module homology of C/(V), torsion orders, and hat homology.

The U-module structure is computed by graded Smith normal form: first a
free basis of ker(d), then the image expressed in kernel coordinates,
then a second Smith form whose cokernel is the homology.  Gradings ride
along through every elimination step, so torsion summands come out with
the Maslov grading of their generator.
"""

from __future__ import annotations

from dataclasses import dataclass

from .complexes import Complex
from .errors import StructuralError
from .linalg import SmithForm, UMat, bits_of, kernel_basis, smith_form


@dataclass(frozen=True)
class FUDecomp:
    """An F2[U]-module: free towers plus U-power torsion summands.

    torsion entries are (order k, Maslov grading of the generator),
    meaning a summand F2[U]/(U^k) generated in that grading.
    """

    tower_count: int
    tower_gradings: tuple[int, ...]
    torsion: tuple[tuple[int, int], ...]

    def render(self) -> str:
        parts = [f"tower gr={g}" for g in self.tower_gradings]
        parts += [f"torsion U^{k} gr={g}" for k, g in self.torsion]
        return "; ".join(parts) if parts else "0"


@dataclass(frozen=True)
class HatRanks:
    """F2 ranks of the fully reduced homology by (Maslov, Alexander)."""

    ranks: tuple[tuple[int, int, int], ...]

    @property
    def total(self) -> int:
        return sum(r for _, _, r in self.ranks)


def _v_reduced_matrix(C: Complex) -> UMat:
    """Differential of C/(V) as a graded matrix over F2[U]."""
    n = len(C.basis)
    row_gr = [g.gr_u for g in C.basis]
    col_gr = [g.gr_u - 1 for g in C.basis]
    D = UMat(row_gr, col_gr)
    for src, row in C.diff_items():
        s = C.index(src)
        for tgt, coeff in row.items():
            t = C.index(tgt)
            for m in coeff:
                if m.j == 0:
                    # degree consistency is forced by the grading law
                    D.rows[t] ^= 1 << s
    return D


def _solve_with(snf: SmithForm, K: UMat, G: UMat) -> UMat:
    """Solve K X = G given a precomputed Smith form of K (unit factors)."""
    if snf.rank != K.ncols or any(d != 0 for d in snf.diag_degrees):
        raise StructuralError("kernel basis does not span a direct summand")
    PG = snf.P.mul(G)
    top = UMat(snf.D.row_gr[: K.ncols], G.col_gr, PG.rows[: K.ncols])
    X = snf.Q.mul(top)
    if K.mul(X).rows != G.rows:
        raise StructuralError("vector is not in the kernel summand")
    return X


class UHomology:
    """Homology of C/(V) with explicit summand generators and coordinates."""

    def __init__(self, C: Complex):
        if C.ring.kind not in ("zero", "uv"):
            raise StructuralError(
                "U-module homology needs a complex over the full ring or mod UV")
        self.C = C
        self.D = _v_reduced_matrix(C)
        ker = kernel_basis(self.D)
        # kernel columns carry source gradings shifted by the differential's
        # degree; shift back so they are honest vectors of C/(V)
        self.K = UMat(self.D.row_gr, [g + 1 for g in ker.col_gr], ker.rows)
        self._ksnf = smith_form(self.K)
        X = _solve_with(self._ksnf, self.K, self.D)
        self._xsnf = smith_form(X)
        m = self.K.ncols
        rank = self._xsnf.rank
        degs = self._xsnf.diag_degrees
        torsion = []
        for l in range(rank):
            if degs[l] > 0:
                torsion.append((degs[l], self._xsnf.D.row_gr[l]))
        tower_idx = list(range(rank, m))
        self._tower_indices = tower_idx
        self.decomp = FUDecomp(
            tower_count=len(tower_idx),
            tower_gradings=tuple(sorted(self._xsnf.D.row_gr[l]
                                        for l in tower_idx)),
            torsion=tuple(sorted(torsion)),
        )

    def summand_generator(self, l: int) -> UMat:
        """Generator of coker summand l as a column vector over C/(V)."""
        col = UMat(self._xsnf.Pinv.row_gr, [self._xsnf.Pinv.col_gr[l]])
        for r in range(self._xsnf.Pinv.nrows):
            if self._xsnf.Pinv.get(r, l):
                col.rows[r] = 1
        return self.K.mul(col)

    def tower_generator(self) -> UMat:
        """A cycle generating the free tower; requires exactly one tower."""
        if self.decomp.tower_count != 1:
            raise StructuralError(
                f"expected one tower, found {self.decomp.tower_count}")
        return self.summand_generator(self._tower_indices[0])

    def coordinates(self, v: UMat) -> UMat:
        """Coordinates of a cycle v in the summand basis (column vector)."""
        y = _solve_with(self._ksnf, self.K, v)
        return self._xsnf.P.mul(y)

    def tower_unit_coefficient(self, v: UMat) -> bool:
        """Whether the class of cycle v generates homology mod torsion.

        v must be homogeneous; the coefficient on each tower summand is
        a monomial, and the class generates iff some tower coordinate
        is a unit.  With a single tower this is the locality test.
        """
        w = self.coordinates(v)
        g = v.col_gr[0]
        for l in self._tower_indices:
            if w.rows[l] & 1 and w.row_gr[l] == g:
                return True
        return False

    def vector_from_element(self, elt: dict, grading: int) -> UMat:
        """Column vector for an element of C/(V), given as gen -> U-power set."""
        col = UMat(self.D.row_gr, [grading])
        for name, coeff in elt.items():
            t = self.C.index(name)
            for m in coeff:
                if m.j == 0:
                    col.rows[t] ^= 1
        return col


def hfk_minus(C: Complex) -> FUDecomp:
    """U-module decomposition of the homology of C/(V)."""
    return UHomology(C).decomp


def torsion_order(d: FUDecomp) -> int:
    """Largest k with a summand F2[U]/(U^k); 0 if torsion-free."""
    return max((k for k, _ in d.torsion), default=0)


def locality_rank(C: Complex) -> int:
    """Number of free towers of the homology of C/(V).

    Equals 1 exactly when inverting U and V leaves homology F2[U,V],
    which is the localization condition used everywhere downstream.
    """
    return hfk_minus(C).tower_count


def hfk_hat(C: Complex) -> HatRanks:
    """F2 homology of the fully reduced differential, by (Maslov, Alexander)."""
    buckets: dict[tuple[int, int], list[int]] = {}
    for k, g in enumerate(C.basis):
        buckets.setdefault((g.gr_u, g.gr_v), []).append(k)
    pos = {}
    for key, members in buckets.items():
        for idx, k in enumerate(members):
            pos[k] = idx

    def bucket_matrix(key):
        """Unit-coefficient differential out of bucket `key`, as columns."""
        p, q = key
        cols = []
        for k in buckets.get(key, []):
            col = 0
            row = C.d_of(C.basis[k].name)
            for tgt, coeff in row.items():
                if any(m.i == 0 and m.j == 0 for m in coeff):
                    t = C.index(tgt)
                    col |= 1 << pos[t]
            cols.append(col)
        return cols

    def rank(cols):
        rows = []
        r = 0
        for v in cols:
            for rr in rows:
                low = rr & -rr
                if v & low:
                    v ^= rr
            if v:
                rows.append(v)
                r += 1
        return r

    out = []
    for key in sorted(buckets):
        p, q = key
        dim = len(buckets[key])
        rk_out = rank(bucket_matrix(key))
        rk_in = rank(bucket_matrix((p + 1, q + 1)))
        h = dim - rk_out - rk_in
        if h:
            out.append((p, (p - q) // 2, h))
    return HatRanks(tuple(out))

"""The .cfk text format: bit-exact serialization of complexes and maps.

Grammar (UTF-8, LF line endings, `#` starts a comment):

    complex <name> ring <full|modUV>
    gen <name> gr <grU> <grV>
    d <name> = [mono] <name> + [mono] <name> ...
    iota <name> = <name> + <name> ...          # optional, mod (U,V)
    map <name> variance <eq|skew> : <gen> -> <sum>   # sidecar files

A monomial renders as `U^i V^j` with `^1` omitted and absent factors
dropped; a bare generator name means coefficient 1.  Rendering is
canonical (basis order, then target order, then lexicographic monomial
order), so parse/render round trips are byte-identical.
"""

from __future__ import annotations

from dataclasses import dataclass

from .complexes import Complex, Generator
from .errors import CfkParseError, StructuralError
from .morphism import IotaData, LinMap
from .ring import Ideal, Mono, RingElt

_RING_TAGS = {"zero": "full", "uv": "modUV"}
_TAG_RINGS = {"full": Ideal.zero(), "modUV": Ideal.uv()}


def _render_terms(C: Complex, row: dict[str, RingElt]) -> str:
    terms = []
    for tgt in C.names():
        coeff = row.get(tgt)
        if coeff is None or coeff.is_zero():
            continue
        for m in coeff:
            mono = m.render()
            terms.append(tgt if mono == "1" else f"{mono} {tgt}")
    return " + ".join(terms) if terms else "0"


def render_cfk(C: Complex, iota: IotaData | None = None) -> str:
    if C.ring.kind not in _RING_TAGS:
        raise StructuralError(
            f"only full and mod-UV complexes serialize, not {C.ring.kind}")
    lines = [f"complex {C.name} ring {_RING_TAGS[C.ring.kind]}"]
    for g in C.basis:
        lines.append(f"gen {g.name} gr {g.gr_u} {g.gr_v}")
    for src, row in C.diff_items():
        lines.append(f"d {src} = {_render_terms(C, row)}")
    if iota is not None:
        if iota.mode != "almost":
            raise StructuralError("only almost involutions serialize in .cfk")
        for g in C.basis:
            row = iota.map.action.get(g.name)
            if row:
                lines.append(f"iota {g.name} = {_render_terms(C, row)}")
    return "\n".join(lines) + "\n"


def _parse_sum(tokens: list[str], lineno: int) -> dict[str, RingElt]:
    """Parse `[mono] name + [mono] name + ...` into an action row."""
    if tokens == ["0"]:
        return {}
    row: dict[str, RingElt] = {}
    term: list[str] = []

    def flush():
        if not term:
            raise CfkParseError("empty term in sum", lineno)
        name = term[-1]
        try:
            mono = _parse_mono_tokens(term[:-1])
        except ValueError as err:
            raise CfkParseError(str(err), lineno) from None
        cur = row.get(name, RingElt.zero())
        row[name] = cur + RingElt((mono,))
        term.clear()

    for tok in tokens:
        if tok == "+":
            flush()
        else:
            term.append(tok)
    flush()
    return {k: v for k, v in row.items() if not v.is_zero()}


def _parse_mono_tokens(tokens: list[str]) -> Mono:
    i = j = 0
    for tok in tokens:
        var, _, exp = tok.partition("^")
        k = 1
        if exp:
            k = int(exp)
        if var == "U":
            i += k
        elif var == "V":
            j += k
        elif tok == "1":
            continue
        else:
            raise ValueError(f"bad monomial token {tok!r}")
    return Mono(i, j)


@dataclass(frozen=True)
class CfkFile:
    complex: Complex
    iota: IotaData | None


def parse_cfk(text: str) -> CfkFile:
    name = None
    ring = None
    gens: list[Generator] = []
    known: set[str] = set()
    diff: dict[str, dict[str, RingElt]] = {}
    iota_action: dict[str, dict[str, RingElt]] = {}

    def checked_sum(tokens: list[str], lineno: int) -> dict[str, RingElt]:
        row = _parse_sum(tokens, lineno)
        for tgt in row:
            if tgt not in known:
                raise CfkParseError(f"unknown generator {tgt!r}", lineno)
        return row

    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        tokens = line.split()
        kind = tokens[0]
        if kind == "complex":
            if len(tokens) != 4 or tokens[2] != "ring":
                raise CfkParseError("malformed complex header", lineno)
            if tokens[3] not in _TAG_RINGS:
                raise CfkParseError(f"unknown ring tag {tokens[3]!r}", lineno)
            name, ring = tokens[1], _TAG_RINGS[tokens[3]]
        elif kind == "gen":
            if len(tokens) != 5 or tokens[2] != "gr":
                raise CfkParseError("malformed gen line", lineno)
            try:
                gens.append(Generator(tokens[1], int(tokens[3]), int(tokens[4])))
            except (ValueError, StructuralError) as err:
                raise CfkParseError(str(err), lineno) from None
            known.add(tokens[1])
        elif kind == "d":
            if len(tokens) < 4 or tokens[2] != "=":
                raise CfkParseError("malformed d line", lineno)
            if tokens[1] not in known:
                raise CfkParseError(f"unknown generator {tokens[1]!r}", lineno)
            diff[tokens[1]] = checked_sum(tokens[3:], lineno)
        elif kind == "iota":
            if len(tokens) < 4 or tokens[2] != "=":
                raise CfkParseError("malformed iota line", lineno)
            if tokens[1] not in known:
                raise CfkParseError(f"unknown generator {tokens[1]!r}", lineno)
            iota_action[tokens[1]] = checked_sum(tokens[3:], lineno)
        else:
            raise CfkParseError(f"unknown directive {kind!r}", lineno)
    if name is None or ring is None:
        raise CfkParseError("missing complex header", 1)
    try:
        C = Complex(gens, diff, ring, name)
    except StructuralError as err:
        raise CfkParseError(str(err), 1) from None
    iota = None
    if iota_action:
        try:
            m = LinMap(C, C, "skew", (0, 0), iota_action, Ideal.max_ideal())
            iota = IotaData(m, "almost")
        except StructuralError as err:
            raise CfkParseError(f"bad iota data: {err}", 1) from None
    return CfkFile(C, iota)


def render_map_file(f: LinMap, name: str = "f") -> str:
    header = (f"# map {name}: {f.source.name} -> {f.target.name} "
              f"({f.variance}, bidegree {f.bidegree[0]} {f.bidegree[1]})")
    body = f.render(name)
    return header + "\n" + (body + "\n" if body else "")


def parse_map_file(text: str, source: Complex, target: Complex) -> LinMap:
    action: dict[str, dict[str, RingElt]] = {}
    variance = None
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        tokens = line.split()
        if (len(tokens) < 7 or tokens[0] != "map" or tokens[2] != "variance"
                or tokens[4] != ":" or tokens[6] != "->"):
            raise CfkParseError("malformed map line", lineno)
        tag = tokens[3]
        if tag not in ("eq", "skew"):
            raise CfkParseError(f"unknown variance {tag!r}", lineno)
        if variance is None:
            variance = tag
        elif variance != tag:
            raise CfkParseError("mixed variances in one map file", lineno)
        action[tokens[5]] = _parse_sum(tokens[7:], lineno)
    if variance is None:
        variance = "eq"
    bidegree = _infer_bidegree(action, source, target, variance)
    return LinMap(source, target, variance, bidegree, action, source.ring)


def _infer_bidegree(action, source: Complex, target: Complex,
                    variance: str) -> tuple[int, int]:
    for src, row in action.items():
        gu, gv = source.grading(src)
        if variance == "skew":
            gu, gv = gv, gu
        for tgt, coeff in row.items():
            tu, tv = target.grading(tgt)
            for m in coeff:
                return (tu - 2 * m.i - gu, tv - 2 * m.j - gv)
    return (0, 0)

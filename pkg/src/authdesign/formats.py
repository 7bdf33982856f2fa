"""Line-oriented text formats for designs, base blocks, codes and schemes.

Every file starts with a header ``%NAME key=value ...``. ``#`` starts a
comment. Cells are whitespace-separated points, cells are separated by
``|``. Emission is canonical: sorted cells, ascending ids, single spaces.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterator

from .authcode import AuthCode
from .designs import DesignError, OrderedDesign
from .foundations import DistributionError, dist_uniform, Distribution, format_rat, parse_rat
from .threshold import Rule, SchemeError, ThresholdScheme

HEADER_KEYS = {
    "DESIGN": ("v", "u", "c"),
    "BASEBLOCKS": ("n", "u", "c"),
    "AUTHCODE": ("v", "b", "u"),
    "THRESHOLD22": ("s", "a1", "a2"),
}


class ParseError(ValueError):
    def __init__(self, message: str, line: int | None = None) -> None:
        super().__init__(f"line {line}: {message}" if line is not None else message)
        self.line = line


@dataclass(frozen=True)
class BaseBlocks:
    n: int
    u: int
    c: int
    bases: tuple[tuple[frozenset[int], ...], ...]


@dataclass(frozen=True)
class DesignFile:
    design: OrderedDesign
    c: int


def _lines(text: str) -> Iterator[tuple[int, str]]:
    for no, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if line:
            yield no, line


def _int(token: str, no: int, what: str) -> int:
    try:
        return int(token)
    except ValueError:
        raise ParseError(f"{what}: expected an integer, got {token!r}", no) from None


def _header(text: str) -> tuple[str, dict[str, int], list[tuple[int, str]]]:
    lines = list(_lines(text))
    if not lines:
        raise ParseError("empty file")
    no, head = lines[0]
    if not head.startswith("%"):
        raise ParseError(f"expected a %HEADER line, got {head!r}", no)
    name, *fields = head[1:].split()
    if name not in HEADER_KEYS:
        raise ParseError(f"unknown header %{name}", no)
    values: dict[str, int] = {}
    for f in fields:
        key, sep, val = f.partition("=")
        if not sep:
            raise ParseError(f"malformed header field {f!r}", no)
        if key in values:
            raise ParseError(f"duplicate header key {key!r}", no)
        if key not in HEADER_KEYS[name]:
            raise ParseError(f"unknown header key {key!r} for %{name}", no)
        values[key] = _int(val, no, f"header {key}")
        if values[key] < 0:
            raise ParseError(f"header {key} must be nonnegative", no)
    missing = [k for k in HEADER_KEYS[name] if k not in values]
    if missing:
        raise ParseError(f"header is missing {', '.join(missing)}", no)
    return name, values, lines[1:]


def detect(text: str) -> str:
    return _header(text)[0]


def _cells(body: str, u: int, no: int) -> tuple[frozenset[int], ...]:
    parts = body.split("|")
    if len(parts) != u:
        raise ParseError(f"expected {u} cells separated by '|', found {len(parts)}", no)
    cells = []
    for part in parts:
        toks = part.split()
        if not toks:
            raise ParseError("empty cell", no)
        pts = [_int(t, no, "point") for t in toks]
        if len(set(pts)) != len(pts):
            raise ParseError(f"cell repeats a point: {part.strip()}", no)
        cells.append(frozenset(pts))
    return tuple(cells)


def _fmt_cells(row) -> str:
    return " | ".join(" ".join(str(p) for p in sorted(cell)) for cell in row)


def _dist_line(tokens: list[str], n: int, no: int, what: str) -> Distribution:
    if len(tokens) != n:
        raise ParseError(f"{what} has {len(tokens)} entries, expected {n}", no)
    try:
        return Distribution(tuple(parse_rat(t) for t in tokens))
    except (ValueError, ZeroDivisionError, DistributionError) as exc:
        raise ParseError(f"{what}: {exc}", no) from None


# designs

def parse_design(text: str) -> DesignFile:
    name, hdr, lines = _header(text)
    if name != "DESIGN":
        raise ParseError(f"expected %DESIGN, got %{name}")
    v, u, c = hdr["v"], hdr["u"], hdr["c"]
    rows = []
    for no, line in lines:
        kw, _, rest = line.partition(" ")
        if kw != "row":
            raise ParseError(f"expected 'row', got {kw!r}", no)
        row = _cells(rest, u, no)
        for cell in row:
            if len(cell) != c:
                raise ParseError(f"cell of size {len(cell)}, header says c={c}", no)
        try:
            OrderedDesign(v=v, u=u, rows=(row,))
        except DesignError as exc:
            raise ParseError(f"row {len(rows)}: {str(exc).split(': ', 1)[-1]}", no) from None
        rows.append(row)
    return DesignFile(OrderedDesign(v=v, u=u, rows=tuple(rows)), c)


def emit_design(design: OrderedDesign, c: int | None = None) -> str:
    if c is None:
        sizes = {len(cell) for row in design.rows for cell in row}
        c = sizes.pop() if len(sizes) == 1 else 0
    out = [f"%DESIGN v={design.v} u={design.u} c={c}"]
    out += [f"row {_fmt_cells(row)}" for row in design.rows]
    return "\n".join(out) + "\n"


def parse_baseblocks(text: str) -> BaseBlocks:
    name, hdr, lines = _header(text)
    if name != "BASEBLOCKS":
        raise ParseError(f"expected %BASEBLOCKS, got %{name}")
    n, u, c = hdr["n"], hdr["u"], hdr["c"]
    bases = []
    for no, line in lines:
        kw, _, rest = line.partition(" ")
        if kw != "base":
            raise ParseError(f"expected 'base', got {kw!r}", no)
        row = _cells(rest, u, no)
        for cell in row:
            if len(cell) != c:
                raise ParseError(f"cell of size {len(cell)}, header says c={c}", no)
            for p in cell:
                if not 0 <= p < n:
                    raise ParseError(f"point {p} outside Z_{n}", no)
        try:
            OrderedDesign(v=n, u=u, rows=(row,))
        except DesignError as exc:
            raise ParseError(f"base {len(bases)}: {str(exc).split(': ', 1)[-1]}", no) from None
        bases.append(row)
    return BaseBlocks(n, u, c, tuple(bases))


def emit_baseblocks(bb: BaseBlocks) -> str:
    out = [f"%BASEBLOCKS n={bb.n} u={bb.u} c={bb.c}"]
    out += [f"base {_fmt_cells(row)}" for row in bb.bases]
    return "\n".join(out) + "\n"


# authentication codes

def parse_authcode(text: str) -> AuthCode:
    name, hdr, lines = _header(text)
    if name != "AUTHCODE":
        raise ParseError(f"expected %AUTHCODE, got %{name}")
    v, b, u = hdr["v"], hdr["b"], hdr["u"]
    dist = None
    rows: dict[int, tuple[frozenset[int], ...]] = {}
    for no, line in lines:
        kw, _, rest = line.partition(" ")
        if kw == "sources":
            continue
        if kw == "sourcedist":
            if dist is not None:
                raise ParseError("duplicate sourcedist line", no)
            dist = _dist_line(rest.split(), u, no, "sourcedist")
            continue
        if kw != "key":
            raise ParseError(f"expected 'key', 'sourcedist' or 'sources', got {kw!r}", no)
        ident, colon, body = rest.partition(":")
        if not colon:
            raise ParseError("key line needs 'key <id>: ...'", no)
        k = _int(ident.strip(), no, "key id")
        if not 0 <= k < b:
            raise ParseError(f"key id {k} outside 0..{b - 1}", no)
        if k in rows:
            raise ParseError(f"duplicate key {k}", no)
        row = _cells(body, u, no)
        try:
            OrderedDesign(v=v, u=u, rows=(row,))
        except DesignError as exc:
            raise ParseError(f"key {k}: {str(exc).split(': ', 1)[-1]}", no) from None
        rows[k] = row
    missing = [k for k in range(b) if k not in rows]
    if missing:
        raise ParseError(f"missing key lines for {missing[:5]}")
    matrix = OrderedDesign(v=v, u=u, rows=tuple(rows[k] for k in range(b)))
    return AuthCode(matrix, dist if dist is not None else dist_uniform(u))


def emit_authcode(code: AuthCode) -> str:
    out = [f"%AUTHCODE v={code.v} b={code.b} u={code.u}"]
    if not code.source_dist.is_uniform:
        out.append("sourcedist " + " ".join(format_rat(w) for w in code.source_dist))
    out += [f"key {k}: {_fmt_cells(row)}" for k, row in enumerate(code.matrix.rows)]
    return "\n".join(out) + "\n"


# threshold schemes

def parse_threshold(text: str) -> ThresholdScheme:
    name, hdr, lines = _header(text)
    if name != "THRESHOLD22":
        raise ParseError(f"expected %THRESHOLD22, got %{name}")
    n, a1, a2 = hdr["s"], hdr["a1"], hdr["a2"]
    dist = None
    rules = []
    pairs: set[tuple[int, int]] = set()
    for no, line in lines:
        kw, *toks = line.split()
        if kw == "sources":
            continue
        if kw == "secretdist":
            if dist is not None:
                raise ParseError("duplicate secretdist line", no)
            dist = _dist_line(toks, n, no, "secretdist")
            continue
        if kw != "rule":
            raise ParseError(f"expected 'rule' or 'secretdist', got {kw!r}", no)
        if len(toks) != 4:
            raise ParseError("rule needs '<v1> <v2> <s> <w>'", no)
        v1, v2, s = (_int(t, no, "rule") for t in toks[:3])
        try:
            w = parse_rat(toks[3])
        except (ValueError, ZeroDivisionError) as exc:
            raise ParseError(str(exc), no) from None
        if not (0 <= v1 < a1 and 0 <= v2 < a2 and 0 <= s < n):
            raise ParseError(f"rule {v1} {v2} {s} out of range", no)
        if (v1, v2) in pairs:
            raise ParseError(f"shares ({v1}, {v2}) already have a rule", no)
        pairs.add((v1, v2))
        rules.append(Rule(v1, v2, s, w))
    try:
        return ThresholdScheme(dist if dist is not None else dist_uniform(n), a1, a2, tuple(rules))
    except SchemeError as exc:
        raise ParseError(str(exc)) from None


def emit_threshold(scheme: ThresholdScheme) -> str:
    out = [f"%THRESHOLD22 s={scheme.n_secrets} a1={scheme.a1} a2={scheme.a2}"]
    if not scheme.secret_dist.is_uniform:
        out.append("secretdist " + " ".join(format_rat(w) for w in scheme.secret_dist))
    out += [f"rule {r.v1} {r.v2} {r.s} {format_rat(r.w)}" for r in scheme.rules]
    return "\n".join(out) + "\n"


def parse_dist(text: str) -> tuple[Fraction, ...]:
    """Comma- or space-separated rationals, as passed on the command line."""
    return tuple(parse_rat(t) for t in text.replace(",", " ").split())

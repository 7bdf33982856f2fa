"""Block designs over cyclic groups: development, validation and ordering.

Points are the integers ``0..v-1``. An :class:`OrderedDesign` is a list of
rows; each row is a tuple of pairwise-disjoint cells (frozensets of points).
Plain BIBD blocks are rows of singleton cells once ordered, splitting BIBD
blocks are rows of ``u`` cells of size ``c``.
"""

from __future__ import annotations

import itertools
from collections import Counter
from dataclasses import dataclass
from typing import Iterable, Sequence

from .flow import FlowNetwork

Cell = frozenset
Row = tuple


class DesignError(ValueError):
    """Validation failure. ``witness`` carries the offending data, if any."""

    def __init__(self, message: str, witness: object = None) -> None:
        super().__init__(message)
        self.witness = witness


def _row(cells: Iterable[Iterable[int]]) -> tuple[frozenset[int], ...]:
    return tuple(frozenset(int(p) for p in cell) for cell in cells)


def _check_row(row: Sequence[frozenset[int]], v: int, where: str) -> None:
    seen: set[int] = set()
    for i, cell in enumerate(row):
        if not cell:
            raise DesignError(f"{where}: cell {i} is empty", witness=i)
        for p in cell:
            if not 0 <= p < v:
                raise DesignError(f"{where}: point {p} outside 0..{v - 1}", witness=p)
        overlap = seen & cell
        if overlap:
            p = min(overlap)
            raise DesignError(f"{where}: cells overlap on point {p}", witness=p)
        seen |= cell


@dataclass(frozen=True)
class OrderedDesign:
    v: int
    u: int
    rows: tuple[tuple[frozenset[int], ...], ...]

    def __post_init__(self) -> None:
        rows = tuple(_row(r) for r in self.rows)
        for j, row in enumerate(rows):
            if len(row) != self.u:
                raise DesignError(f"row {j}: has {len(row)} cells, expected {self.u}", witness=j)
            _check_row(row, self.v, f"row {j}")
        object.__setattr__(self, "rows", rows)

    @classmethod
    def from_rows(cls, v: int, rows: Sequence[Sequence[Iterable[int]]]) -> OrderedDesign:
        rows = [_row(r) for r in rows]
        u = len(rows[0]) if rows else 0
        return cls(v=v, u=u, rows=tuple(rows))

    @property
    def b(self) -> int:
        return len(self.rows)

    def blocks(self) -> list[frozenset[int]]:
        """Rows with the cell structure forgotten."""
        return [frozenset().union(*row) for row in self.rows]


@dataclass(frozen=True)
class DesignParams:
    v: int
    b: int
    r: int
    k: int
    lam: int
    u: int
    c: int = 1


@dataclass(frozen=True)
class EDFSpec:
    n: int
    sets: tuple[frozenset[int], ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "sets", tuple(frozenset(s) for s in self.sets))


@dataclass(frozen=True)
class NoneFound:
    """Ordering search gave up. This is not a proof that no ordering exists."""

    nodes: int
    budget_hit: bool


def develop(base_row: Sequence[Iterable[int]], n: int) -> OrderedDesign:
    """Translate ``base_row`` by every element of Z_n, keeping cell order."""
    if n < 1:
        raise DesignError(f"group order must be positive, got {n}")
    base = tuple(frozenset(p % n for p in cell) for cell in base_row)
    raw = [list(cell) for cell in base_row]
    if sum(len(c) for c in raw) != sum(len(c) for c in base):
        raise DesignError("base row repeats a point modulo n")
    _check_row(base, n, "base row")
    rows = [tuple(frozenset((p + t) % n for p in cell) for cell in base) for t in range(n)]
    return OrderedDesign(v=n, u=len(base), rows=tuple(rows))


def develop_bases(bases: Sequence[Sequence[Iterable[int]]], n: int) -> OrderedDesign:
    """Develop each base row in turn; rows of base ``i`` follow those of ``i-1``."""
    rows: list[tuple[frozenset[int], ...]] = []
    for base in bases:
        rows.extend(develop(base, n).rows)
    u = len(rows[0]) if rows else 0
    return OrderedDesign(v=n, u=u, rows=tuple(rows))


def _as_blocks(blocks: OrderedDesign | Iterable[Iterable[int]]) -> list[frozenset[int]]:
    if isinstance(blocks, OrderedDesign):
        return blocks.blocks()
    out = []
    for blk in blocks:
        items = list(blk)
        fs = frozenset(items)
        if len(fs) != len(items):
            raise DesignError(f"block {sorted(items)} repeats a point", witness=tuple(items))
        out.append(fs)
    return out


def _pair_witness(cover: dict[tuple[int, int], int], target: int | None) -> tuple[tuple[int, int], int]:
    # least-covered pair, lexicographically first among ties
    if target is not None:
        bad = [(cnt, pair) for pair, cnt in cover.items() if cnt != target]
    else:
        bad = [(cnt, pair) for pair, cnt in cover.items()]
    cnt, pair = min(bad)
    return pair, cnt


def validate_bibd(blocks: OrderedDesign | Iterable[Iterable[int]], v: int | None = None) -> DesignParams:
    """Return ``(v, b, r, k, lam)`` or raise :class:`DesignError` with a witness.

    Duplicate blocks are allowed. Non-constant pair coverage is reported via
    the least-covered pair.
    """
    if v is None:
        if not isinstance(blocks, OrderedDesign):
            raise TypeError("v is required unless an OrderedDesign is given")
        v = blocks.v
    bl = _as_blocks(blocks)
    if not bl:
        raise DesignError("no blocks")
    sizes = {len(b) for b in bl}
    if len(sizes) != 1:
        j = next(i for i, b in enumerate(bl) if len(b) != len(bl[0]))
        raise DesignError(f"uneven block sizes: block {j} has {len(bl[j])} points, block 0 has {len(bl[0])}", witness=j)
    k = sizes.pop()
    for j, blk in enumerate(bl):
        for p in blk:
            if not 0 <= p < v:
                raise DesignError(f"block {j}: point {p} outside 0..{v - 1}", witness=p)

    cover = {pair: 0 for pair in itertools.combinations(range(v), 2)}
    for blk in bl:
        for pair in itertools.combinations(sorted(blk), 2):
            cover[pair] += 1
    if len(set(cover.values())) > 1:
        pair, cnt = _pair_witness(cover, None)
        raise DesignError(f"pair {pair} covered {cnt} times, coverage is not constant", witness=(pair, cnt))
    lam = next(iter(cover.values())) if cover else 0

    rep = Counter(p for blk in bl for p in blk)
    reps = [rep[p] for p in range(v)]
    if len(set(reps)) != 1:
        p = next(x for x in range(v) if reps[x] != reps[0])
        raise DesignError(f"point {p} lies in {reps[p]} blocks, point 0 in {reps[0]}", witness=(p, reps[p]))
    r = reps[0]
    return DesignParams(v=v, b=len(bl), r=r, k=k, lam=lam, u=k, c=1)


def validate_edf(spec: EDFSpec) -> int:
    """Return lambda if the sets form an external difference family in Z_n."""
    n, sets = spec.n, spec.sets
    if len(sets) < 2:
        raise DesignError("an EDF needs at least two sets")
    sizes = {len(s) for s in sets}
    if len(sizes) != 1:
        raise DesignError(f"sets have different sizes {sorted(sizes)}")
    for s in sets:
        for x in s:
            if not 0 <= x < n:
                raise DesignError(f"element {x} outside Z_{n}", witness=x)
    tally = Counter()
    for i, di in enumerate(sets):
        for j, dj in enumerate(sets):
            if i == j:
                continue
            for x in sorted(di):
                for y in sorted(dj):
                    d = (x - y) % n
                    if d == 0:
                        raise DesignError(f"difference 0 from {x}-{y} (sets {i} and {j} intersect)", witness=(x, y))
                    tally[d] += 1
    counts = [tally[d] for d in range(1, n)]
    if len(set(counts)) > 1:
        low = min(counts)
        d = 1 + counts.index(low)
        raise DesignError(f"difference {d} occurs {low} times, tally is not constant", witness=(d, low))
    return counts[0] if counts else 0


def validate_splitting_bibd(design: OrderedDesign, u: int, c: int) -> DesignParams:
    """Check that every pair of points is split across cells of exactly one block."""
    v = design.v
    if design.u != u:
        raise DesignError(f"design has {design.u} cells per row, expected {u}")
    for j, row in enumerate(design.rows):
        for i, cell in enumerate(row):
            if len(cell) != c:
                raise DesignError(f"row {j} cell {i}: size {len(cell)}, expected {c}", witness=(j, i))
    cover = {pair: 0 for pair in itertools.combinations(range(v), 2)}
    for row in design.rows:
        for a, b in itertools.combinations(row, 2):
            for x in a:
                for y in b:
                    cover[(x, y) if x < y else (y, x)] += 1
    if any(cnt != 1 for cnt in cover.values()):
        pair, cnt = _pair_witness(cover, 1)
        raise DesignError(f"pair {pair} split by {cnt} blocks, expected exactly 1", witness=(pair, cnt))
    rep = Counter(p for blk in design.blocks() for p in blk)
    reps = {rep[p] for p in range(v)}
    if len(reps) != 1:
        raise DesignError(f"replication is not constant: {sorted(reps)}")
    return DesignParams(v=v, b=design.b, r=reps.pop(), k=u * c, lam=1, u=u, c=c)


def equitable_order(blocks: Iterable[Iterable[int]], v: int, k: int) -> OrderedDesign:
    """Order the blocks of a BIBD so each point occurs r/k times per position.

    One position at a time, a flow network picks one point from every block
    such that each point is picked exactly r/k times. The remaining incidence
    graph stays biregular, so every round has a full flow.
    """
    bl = _as_blocks(blocks)
    params = validate_bibd(bl, v)
    if params.k != k:
        raise DesignError(f"blocks have size {params.k}, expected {k}")
    if params.r % k:
        raise DesignError(f"replication {params.r} is not divisible by k={k}")
    per_column = params.r // k
    b = params.b
    remaining = [sorted(blk) for blk in bl]
    columns: list[list[int]] = [[] for _ in range(b)]
    src, sink = b + v, b + v + 1
    for _ in range(k):
        net = FlowNetwork(b + v + 2)
        arcs: list[list[tuple[int, int]]] = []
        for j in range(b):
            net.add_arc(src, j, 1)
            arcs.append([(p, net.add_arc(j, b + p, 1)) for p in remaining[j]])
        for p in range(v):
            net.add_arc(b + p, sink, per_column)
        if net.max_flow(src, sink) != b:
            raise RuntimeError("no full column assignment; the incidence graph is not biregular")
        for j in range(b):
            chosen = next(p for p, arc in arcs[j] if net.flow_on(arc))
            columns[j].append(chosen)
            remaining[j].remove(chosen)
    rows = tuple(tuple(frozenset((p,)) for p in col) for col in columns)
    return OrderedDesign(v=v, u=k, rows=rows)


def check_equitable(design: OrderedDesign) -> int:
    """Return the common per-position multiplicity, or raise with a witness.

    The witness is ``(position, point, count)`` for the first violation in
    position-major, point-ascending order.
    """
    v = design.v
    if not design.u or not design.rows:
        return 0
    total = sum(len(row[0]) for row in design.rows)
    target, rem = divmod(total, v)
    for i in range(design.u):
        counts = Counter(p for row in design.rows for p in row[i])
        for p in range(v):
            if rem or counts[p] != target:
                raise DesignError(
                    f"position {i}: point {p} occurs {counts[p]} times, expected {total}/{v}",
                    witness=(i, p, counts[p]),
                )
    return target


def _eq7_modulus(u: int, c: int) -> int:
    return u * (u - 1) * c * c


def equitable_order_splitting(
    blocks: Sequence[Sequence[Iterable[int]]] | OrderedDesign,
    u: int,
    c: int,
    v: int | None = None,
    budget: int = 200_000,
) -> OrderedDesign | NoneFound:
    """Find an equitable ordering of a splitting BIBD by backtracking.

    Each row's cells are permuted; rows are visited in ascending index and
    permutations in lexicographic order of the sorted cells. Returns
    :class:`NoneFound` when the search is exhausted or ``budget`` nodes have
    been expanded. Raises :class:`DesignError` if the congruence
    ``v = 1 mod u(u-1)c^2`` fails, which rules an ordering out.
    """
    if isinstance(blocks, OrderedDesign):
        v = blocks.v if v is None else v
        rows = list(blocks.rows)
    else:
        if v is None:
            raise TypeError("v is required unless an OrderedDesign is given")
        rows = [_row(r) for r in blocks]
    mod = _eq7_modulus(u, c)
    if mod == 0 or v % mod != 1 % mod:
        raise DesignError(f"v={v} is not 1 mod u(u-1)c^2={mod}; no equitable ordering exists")
    design = OrderedDesign(v=v, u=u, rows=tuple(rows))
    params = validate_splitting_bibd(design, u, c)
    if c == 1:
        return equitable_order([set(r) for r in design.blocks()], v, u)
    return _backtrack_order(design, params.r // u, budget)


def _backtrack_order(design: OrderedDesign, target: int, budget: int) -> OrderedDesign | NoneFound:
    v, u = design.v, design.u
    rows = [tuple(sorted(row, key=sorted)) for row in design.rows]
    b = len(rows)
    perms = list(itertools.permutations(range(u)))
    cap = [[target] * v for _ in range(u)]
    chosen: list[tuple[int, ...]] = []
    nodes = 0

    def fits(row, perm) -> bool:
        return all(cap[pos][p] > 0 for cell, pos in zip(row, perm) for p in cell)

    def apply(row, perm, delta: int) -> None:
        for cell, pos in zip(row, perm):
            for p in cell:
                cap[pos][p] -= delta

    def feasible(start: int) -> bool:
        allowed = []
        for j in range(start, b):
            ok = [perm for perm in perms if fits(rows[j], perm)]
            if not ok:
                return False
            allowed.append({(i, perm[i]) for perm in ok for i in range(u)})
        # per point: route its remaining cells to positions with spare capacity
        for p in range(v):
            cells = [(j, i) for j in range(start, b) for i, cell in enumerate(rows[j]) if p in cell]
            if not cells:
                continue
            m = len(cells)
            net = FlowNetwork(m + u + 2)
            s, t = m + u, m + u + 1
            for idx, (j, i) in enumerate(cells):
                net.add_arc(s, idx, 1)
                for pos in range(u):
                    if (i, pos) in allowed[j - start]:
                        net.add_arc(idx, m + pos, 1)
            for pos in range(u):
                net.add_arc(m + pos, t, cap[pos][p])
            if net.max_flow(s, t) != m:
                return False
        return True

    def search(j: int) -> bool:
        nonlocal nodes
        if j == b:
            return True
        for perm in perms:
            if not fits(rows[j], perm):
                continue
            nodes += 1
            if nodes > budget:
                return False
            apply(rows[j], perm, 1)
            chosen.append(perm)
            if feasible(j + 1) and search(j + 1):
                return True
            chosen.pop()
            apply(rows[j], perm, -1)
            if nodes > budget:
                return False
        return False

    if search(0):
        ordered = []
        for row, perm in zip(rows, chosen):
            out: list[frozenset[int]] = [frozenset()] * u
            for cell, pos in zip(row, perm):
                out[pos] = cell
            ordered.append(tuple(out))
        return OrderedDesign(v=v, u=u, rows=tuple(ordered))
    return NoneFound(nodes=min(nodes, budget), budget_hit=nodes > budget)


def orbit_size(base_row: Sequence[Iterable[int]], n: int) -> int:
    """Size of the Z_n-orbit of a block viewed as an unordered set of cells."""
    base = frozenset(frozenset(p % n for p in cell) for cell in base_row)
    for t in range(1, n + 1):
        if n % t == 0 and frozenset(frozenset((p + t) % n for p in cell) for cell in base) == base:
            return t
    return n


def equitable_order_from_bases(
    bases: Sequence[Sequence[Iterable[int]]], n: int, u: int, c: int, budget: int = 200_000
) -> OrderedDesign | NoneFound:
    """Order a group-generated splitting BIBD.

    When every base block has a full orbit, developing each base in a fixed
    cell order is already equitable. Otherwise the distinct translates are
    handed to the backtracking search.
    """
    mod = _eq7_modulus(u, c)
    if mod == 0 or n % mod != 1 % mod:
        raise DesignError(f"v={n} is not 1 mod u(u-1)c^2={mod}; no equitable ordering exists")
    if all(orbit_size(base, n) == n for base in bases):
        design = develop_bases(bases, n)
        validate_splitting_bibd(design, u, c)
        return design
    rows = []
    for base in bases:
        size = orbit_size(base, n)
        rows.extend(develop(base, n).rows[:size])
    return equitable_order_splitting(rows, u, c, v=n, budget=budget)

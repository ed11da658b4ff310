"""Generator posets per Alexander grading, and their structure checks.

Generators of a fixed Alexander grading are partially ordered by the
existence of a positive connecting domain with prescribed marking
multiplicities.  Covering relations are realized by empty rectangles and
coincide with the boundary matrix of the corresponding chain complex.
On top of the order this module provides interval extraction, the
graded boundary maps of the spectral tower, connected components with
their homology, and the edge-lexicographic labeling used to certify
shellability of closed intervals.
"""

from __future__ import annotations

import collections
import itertools
import random
from dataclasses import dataclass, field

from .complexes import (
    DEFAULT_MAX_ELEMENTS,
    DEFAULT_MAX_GRID,
    ChainComplex,
    Rectangle,
    connecting_domain,
    move_table,
)
from .errors import EmptyInterval, ResourceLimit
from .gradings import alexander, maslov
from .grid import Grid
from .homology import BigradedRanks, homology

__all__ = [
    "ELLabel",
    "GridPoset",
    "alexander_range",
    "build_poset",
    "components",
    "del_tower",
    "del2_lands_in_boundaries",
    "el_label",
    "interval",
    "maximal_chains",
    "el_increasing_chain_check",
    "poset_stats",
    "tower_sum",
]


@dataclass(frozen=True, order=True)
class ELLabel:
    """Edge label (s, i, t), compared lexicographically.

    s is 0 when the rectangle crosses the reference circle, i the number
    of vertical circles crossed to reach the rectangle's left edge from
    the reference circle (leftward for s = 0, rightward for s = 1), and
    t the rectangle's thickness.
    """

    s: int
    i: int
    t: int


@dataclass(frozen=True)
class GridPoset:
    """Elements of one Alexander grading with their positive-domain order.

    ``elements`` are generators in hat mode, or (generator, exponents)
    pairs in truncated minus mode.  ``covers`` lists (upper, lower,
    rectangle) index triples; the rectangle realizes the covering move.
    The full order relation is decided on demand by ``leq``: for any two
    elements there is at most one candidate domain with the required
    marking multiplicities, so a single positivity check settles it.
    """

    grid: Grid
    mode: str
    truncation: int | None
    alexander: int
    elements: tuple
    maslov: tuple[int, ...]
    covers: tuple[tuple[int, int, Rectangle], ...]
    index: dict = field(compare=False, repr=False)

    def __len__(self) -> int:
        return len(self.elements)

    def grade(self, element) -> int:
        return self.maslov[self.index[element]]

    def leq(self, y, x) -> bool:
        """True when y is below x (or equal): a positive domain connects them."""
        yi, xi = self.index[y], self.index[x]
        if yi == xi:
            return True
        if self.maslov[xi] <= self.maslov[yi]:
            return False
        if self.mode == "hat":
            dom = connecting_domain(self.grid, x, y, "zero_XO")
        else:
            (gx, fx), (gy, fy) = x, y
            o_counts = tuple(b - a for a, b in zip(fx, fy))
            if any(v < 0 for v in o_counts):
                return False
            dom = connecting_domain(self.grid, gx, gy, "zero_XO", o_counts)
        return dom is not None and dom.is_positive()


def build_poset(g: Grid, a: int, mode: str = "hat",
                truncation: int | None = None,
                max_grid: int = DEFAULT_MAX_GRID,
                max_elements: int = DEFAULT_MAX_ELEMENTS) -> GridPoset:
    """Poset of the Alexander grading ``a`` of the hat or truncated minus basis.

    Covering edges are read straight off the move table: rectangles
    avoiding all markings (hat) or avoiding X with exponent bumps inside
    the truncation window (minus).
    """
    table = move_table(g, max_grid)
    n = g.n

    if mode == "hat":
        elements = [x for x in table.gens if alexander(g, x) == a]
        grades = [maslov(g, x) for x in elements]
        index = {x: i for i, x in enumerate(elements)}
        covers = []
        for x in elements:
            upper = index[x]
            for rid, j in table.moves[table.gen_index[x]]:
                rect = table.rects[rid]
                if rect.x_rows or rect.o_rows:
                    continue
                covers.append((upper, index[table.gens[j]], rect))
    elif mode == "minus":
        if truncation is None or truncation < 1:
            raise ValueError("minus mode needs a positive truncation bound")
        d = truncation
        if len(table.gens) * d ** n > max_elements:
            raise ResourceLimit(
                f"truncated minus basis has {len(table.gens) * d ** n} "
                f"elements, over the ceiling {max_elements}")
        elements = []
        grades = []
        for x in table.gens:
            ax, mx = alexander(g, x), maslov(g, x)
            for k in itertools.product(range(d), repeat=n):
                t = sum(k)
                if ax - t == a:
                    elements.append((x, k))
                    grades.append(mx - 2 * t)
        index = {e: i for i, e in enumerate(elements)}
        covers = []
        for (x, k) in elements:
            upper = index[(x, k)]
            for rid, j in table.moves[table.gen_index[x]]:
                rect = table.rects[rid]
                if rect.x_rows:
                    continue
                k2 = list(k)
                for orow in rect.o_rows:
                    k2[orow] += 1
                if any(v >= d for v in k2):
                    continue
                covers.append((upper, index[(table.gens[j], tuple(k2))], rect))
    else:
        raise ValueError(f"mode must be 'hat' or 'minus', got {mode!r}")

    return GridPoset(grid=g, mode=mode, truncation=truncation, alexander=a,
                     elements=tuple(elements), maslov=tuple(grades),
                     covers=tuple(covers), index=index)


def alexander_range(g: Grid, mode: str = "hat", truncation: int | None = None,
                    max_grid: int = DEFAULT_MAX_GRID) -> range:
    """Alexander gradings carrying at least one basis element.

    The truncated minus basis reaches ``n * (truncation - 1)`` gradings
    below the plain generators, one step per exponent unit.
    """
    table = move_table(g, max_grid)
    vals = [alexander(g, x) for x in table.gens]
    low = min(vals)
    if mode == "minus":
        if truncation is None or truncation < 1:
            raise ValueError("minus mode needs a positive truncation bound")
        low -= g.n * (truncation - 1)
    return range(low, max(vals) + 1)


# ------------------------------------------------------------- components

def components(p: GridPoset, coefficients: str = "F2",
               signs=None) -> list[tuple[int, BigradedRanks]]:
    """Connected components of the covering graph, with their homology.

    Each component is an honest direct summand of the chain complex, so
    its homology is computed by restricting the differential to it.
    """
    m = len(p.elements)
    adjacent: list[list[int]] = [[] for _ in range(m)]
    for u, l, _ in p.covers:
        adjacent[u].append(l)
        adjacent[l].append(u)
    seen = [False] * m
    comps: list[list[int]] = []
    for start in range(m):
        if seen[start]:
            continue
        stack, comp = [start], []
        seen[start] = True
        while stack:
            v = stack.pop()
            comp.append(v)
            for w in adjacent[v]:
                if not seen[w]:
                    seen[w] = True
                    stack.append(w)
        comps.append(sorted(comp))

    table = move_table(p.grid) if coefficients == "Z" else None
    out = []
    for comp in comps:
        local = {v: i for i, v in enumerate(comp)}
        edges: dict[int, list[tuple[int, int]]] = {v: [] for v in comp}
        for u, l, rect in p.covers:
            if u in local:
                if coefficients == "Z":
                    x = p.elements[u] if p.mode == "hat" else p.elements[u][0]
                    gi = table.gen_index[x]
                    rid = table._rect_ids[rect.key]
                    coeff = signs.sign(gi, rid)
                else:
                    coeff = 1
                edges[u].append((local[l], coeff))
        labels = [p.elements[v] for v in comp]
        gradings = [(p.maslov[v], p.alexander) for v in comp]
        diff = [edges[v] for v in comp]
        cc = ChainComplex(coefficients, p.mode, p.grid, p.truncation,
                          labels, gradings, diff)
        out.append((len(comp), homology(cc)))
    return out


# --------------------------------------------------------------- intervals

def interval(p: GridPoset, y, x, shape: str = "closed") -> GridPoset:
    """Induced sub-poset on [y,x], (y,x] or (y,x).

    Raises EmptyInterval when y is not below x.
    """
    if shape not in ("closed", "open", "half"):
        raise ValueError(f"shape must be closed, open or half, got {shape!r}")
    if not p.leq(y, x):
        raise EmptyInterval(f"{y} is not below {x}")
    members = []
    for z in p.elements:
        if not (p.leq(y, z) and p.leq(z, x)):
            continue
        if shape in ("open", "half") and z == y:
            continue
        if shape == "open" and z == x:
            continue
        members.append(z)
    keep = {p.index[z] for z in members}
    new_index = {z: i for i, z in enumerate(members)}
    covers = tuple((new_index[p.elements[u]], new_index[p.elements[l]], rect)
                   for u, l, rect in p.covers if u in keep and l in keep)
    grades = tuple(p.maslov[p.index[z]] for z in members)
    return GridPoset(grid=p.grid, mode=p.mode, truncation=p.truncation,
                     alexander=p.alexander, elements=tuple(members),
                     maslov=grades, covers=covers, index=new_index)


def maximal_chains(p: GridPoset, y, x):
    """Saturated chains from y up to x, with the rectangles they use.

    Returns a list of (element index tuple, rectangle tuple) pairs, in
    the ambient poset's indexing.  Every cover step raises the grading
    by one, so any cover path from y that stays inside [y,x] and reaches
    x is maximal in the interval.
    """
    if not p.leq(y, x):
        raise EmptyInterval(f"{y} is not below {x}")
    yi, xi = p.index[y], p.index[x]
    up: dict[int, list[tuple[int, Rectangle]]] = collections.defaultdict(list)
    for u, l, rect in p.covers:
        up[l].append((u, rect))
    chains: list[tuple[tuple[int, ...], tuple[Rectangle, ...]]] = []
    stack = [((yi,), ())]
    while stack:
        path, rects = stack.pop()
        last = path[-1]
        if last == xi:
            chains.append((path, rects))
            continue
        for u, rect in up[last]:
            if p.maslov[u] > p.maslov[xi]:
                continue
            if p.leq(p.elements[u], x):
                stack.append((path + (u,), rects + (rect,)))
    return chains


# ----------------------------------------------------------- spectral tower

def del_tower(p: GridPoset, i: int) -> list[int]:
    """The grading-i boundary map as bitmask rows over F2.

    Row x has bit y set when y lies below x with grading difference
    exactly i.  For i = 1 this is the covering relation, which equals
    the boundary matrix of the complex restricted to this grading.
    """
    if i < 1:
        raise ValueError(f"tower index must be positive, got {i}")
    m = len(p.elements)
    rows = [0] * m
    by_grade: dict[int, list[int]] = collections.defaultdict(list)
    for idx, g in enumerate(p.maslov):
        by_grade[g].append(idx)
    for xi in range(m):
        for yi in by_grade.get(p.maslov[xi] - i, ()):
            if p.leq(p.elements[yi], p.elements[xi]):
                rows[xi] |= 1 << yi
    return rows


def tower_sum(p: GridPoset, k: int) -> list[int]:
    """Sum over i + j = k of the composite maps, as bitmask rows.

    All-zero rows certify the tower identity at level k.
    """
    towers = {i: del_tower(p, i) for i in range(1, k)}
    m = len(p.elements)
    out = [0] * m
    for j in range(1, k):
        upper = towers[j]
        lower = towers[k - j]
        for xi in range(m):
            bits = upper[xi]
            acc = 0
            while bits:
                low = bits & -bits
                acc ^= lower[low.bit_length() - 1]
                bits ^= low
            out[xi] ^= acc
    return out


def del2_lands_in_boundaries(p: GridPoset) -> bool:
    """Does the level-2 map send every level-1 cycle into level-1 boundaries?

    This is the homology-level vanishing of the second tower map,
    checked by explicit F2 linear algebra on bitmask vectors.
    """
    m = len(p.elements)
    d1 = del_tower(p, 1)
    d2 = del_tower(p, 2)

    # Row-reduce the image of d1 into pivot form.
    image: dict[int, int] = {}

    def reduce(v: int) -> int:
        while v:
            piv = v.bit_length() - 1
            if piv not in image:
                return v
            v ^= image[piv]
        return 0

    for row in d1:
        rest = reduce(row)
        if rest:
            image[rest.bit_length() - 1] = rest

    # Kernel basis of d1 via elimination with combination tracking.
    pivots: dict[int, tuple[int, int]] = {}  # pivot -> (value, combo)
    kernel: list[int] = []
    for idx in range(m):
        v, combo = d1[idx], 1 << idx
        while v:
            piv = v.bit_length() - 1
            if piv not in pivots:
                pivots[piv] = (v, combo)
                break
            pv, pc = pivots[piv]
            v ^= pv
            combo ^= pc
        else:
            kernel.append(combo)

    for combo in kernel:
        w = 0
        bits = combo
        while bits:
            low = bits & -bits
            w ^= d2[low.bit_length() - 1]
            bits ^= low
        if reduce(w):
            return False
    return True


# ------------------------------------------------------------- EL labeling

def el_label(p: GridPoset, cover: Rectangle, ref_col: int | None = None,
             thickness: str = "width") -> ELLabel:
    """Label of a covering rectangle relative to a vertical reference circle.

    The circle sits just right of column ``ref_col`` (default: the column
    of the X in row 0), inside a vertical band that always contains an X
    and therefore meets no X-avoiding rectangle in a full annulus.  When
    the rectangle's column span crosses the circle s = 0 and i counts
    the vertical circles met going left to the rectangle's left edge;
    otherwise s = 1 and i counts them going right.  The thickness t is
    the rectangle's width (set ``thickness='height'`` for the variant).
    """
    n = p.grid.n
    ref = p.grid.x_cols[0] if ref_col is None else ref_col % n
    a, w = cover.col, cover.width
    if (ref - a) % n < w:
        s = 0
        i = (ref - a) % n + 1
    else:
        s = 1
        i = (a - ref) % n
    if thickness == "width":
        t = cover.width
    elif thickness == "height":
        t = cover.height
    else:
        raise ValueError(f"thickness must be 'width' or 'height', got {thickness!r}")
    return ELLabel(s, i, t)


def el_increasing_chain_check(p: GridPoset, y, x, ref_col: int | None = None,
                              thickness: str = "width") -> bool:
    """One weakly increasing maximal chain in [y,x], and it is lex-least.

    This is the defining property of an edge-lexicographic shelling,
    verified by brute-force chain enumeration.
    """
    labeled = []
    for _, rects in maximal_chains(p, y, x):
        labeled.append(tuple(el_label(p, r, ref_col, thickness) for r in rects))
    increasing = [seq for seq in labeled
                  if all(seq[i] <= seq[i + 1] for i in range(len(seq) - 1))]
    return len(increasing) == 1 and increasing[0] == min(labeled)


# ------------------------------------------------------------------- stats

def poset_stats(g: Grid, mode: str = "hat", truncation: int | None = None,
                coefficients: str = "F2", signs=None, seed: int = 0,
                max_intervals: int = 200, tower_k: int = 4,
                max_grid: int = DEFAULT_MAX_GRID) -> dict:
    """Structure summary across every Alexander grading, as plain data.

    Collects component sizes and ranks, the open-interval parity check,
    the tower identities up to ``tower_k``, and the increasing-chain
    check on closed intervals of length 2..5 (capped at
    ``max_intervals``, sampled deterministically from ``seed``).
    """
    rng = random.Random(seed)
    posets = [build_poset(g, a, mode, truncation, max_grid)
              for a in alexander_range(g, mode, truncation, max_grid)]
    posets = [p for p in posets if len(p)]

    per_grading = []
    total_components = 0
    singletons = 0
    for p in posets:
        comps = components(p, coefficients, signs)
        total_components += len(comps)
        singletons += sum(1 for size, _ in comps if size == 1)
        per_grading.append({
            "alexander": p.alexander,
            "elements": len(p),
            "components": [
                {"size": size, "homology": ranks.to_json_list()}
                for size, ranks in comps
            ],
        })

    pairs = 0
    odd_intervals = 0
    candidates = []
    for p in posets:
        for xi in range(len(p)):
            for yi in range(len(p)):
                if p.maslov[xi] - p.maslov[yi] < 1 or yi == xi:
                    continue
                if not p.leq(p.elements[yi], p.elements[xi]):
                    continue
                pairs += 1
                length = p.maslov[xi] - p.maslov[yi]
                inner = interval(p, p.elements[yi], p.elements[xi], "open")
                if len(inner) % 2:
                    odd_intervals += 1
                if 2 <= length <= 5:
                    candidates.append((p, yi, xi))

    tower_ok = all(not any(tower_sum(p, k))
                   for p in posets for k in range(2, tower_k + 1))
    del2_ok = all(del2_lands_in_boundaries(p) for p in posets)

    rng.shuffle(candidates)
    sampled = candidates[:max_intervals]
    el_failures = sum(
        1 for p, yi, xi in sampled
        if not el_increasing_chain_check(p, p.elements[yi], p.elements[xi]))

    return {
        "grid": {"n": g.n, "x_cols": list(g.x_cols), "o_cols": list(g.o_cols)},
        "mode": mode,
        "truncation": truncation,
        "coefficients": coefficients,
        "gradings": per_grading,
        "components_total": total_components,
        "singletons": singletons,
        "parity": {"pairs": pairs, "odd_open_intervals": odd_intervals,
                   "all_even": odd_intervals == 0},
        "tower": {"max_k": tower_k, "ok": tower_ok,
                  "del2_in_boundaries": del2_ok},
        "el": {"intervals_checked": len(sampled),
               "failures": el_failures, "ok": el_failures == 0},
    }

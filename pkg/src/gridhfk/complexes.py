"""Generators, rectangles, domains and the grid chain complexes.

A generator is a bijection between the horizontal and vertical circles,
stored as a tuple ``x`` with ``x[r]`` the column of the point on
horizontal circle ``r``.  An empty rectangle from ``x`` to ``y`` is an
embedded rectangle on the torus whose lower-left and upper-right corners
are points of ``x``, whose other corners are points of ``y``, and whose
interior misses all generator points; the pair then agrees away from those
two rows.  Rectangles are the index-1 positive domains, so they drive
every differential:

* tilde version: rectangles meeting no X and no O marking;
* minus version: rectangles meeting no X, with the O multiplicities
  recorded as exponents of the formal variables ``U_0..U_{n-1}``, each
  ``U_i`` shifting the bigrading by (-2, -1).

The minus complex is truncated: exponent vectors live below a bound ``d``
coordinate-wise, and terms that would reach ``d`` are dropped (quotient by
the subcomplex they span, so the differential still squares to zero).
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from math import factorial

from .errors import ResourceLimit
from .gradings import alexander, maslov, maslov_index
from .grid import Grid

__all__ = [
    "Generator",
    "Rectangle",
    "Domain",
    "ChainComplex",
    "enumerate_generators",
    "gen_to_colstring",
    "gen_from_colstring",
    "move_table",
    "rect_moves_from",
    "rectangles_between",
    "connecting_domain",
    "build_tilde_complex",
    "build_minus_complex",
]

Generator = tuple[int, ...]

DEFAULT_MAX_GRID = 9
DEFAULT_MAX_ELEMENTS = 200_000


def enumerate_generators(g: Grid, max_grid: int = DEFAULT_MAX_GRID) -> list[Generator]:
    """All n! generators in lexicographic order."""
    if g.n > max_grid:
        raise ResourceLimit(
            f"grid size {g.n} exceeds the ceiling {max_grid} "
            f"({factorial(g.n)} generators); raise max_grid to proceed")
    return list(itertools.permutations(range(g.n)))


def gen_to_colstring(x: Generator) -> str:
    """Digits by column: character ``i`` is the row met on vertical circle i."""
    inv = [0] * len(x)
    for r, c in enumerate(x):
        inv[c] = r
    return "".join(str(r) for r in inv)


def gen_from_colstring(s: str) -> Generator:
    rows = [int(ch) for ch in s]
    x = [0] * len(rows)
    for col, row in enumerate(rows):
        x[row] = col
    return tuple(x)


@dataclass(frozen=True)
class Rectangle:
    """Cells ``[col, col+width] x [row, row+height]`` on the n-torus.

    ``x_rows`` and ``o_rows`` list the rows of the markings the rectangle
    covers; for the minus differential the O rows are the U indices.
    """

    n: int
    col: int
    row: int
    width: int
    height: int
    x_rows: tuple[int, ...] = field(compare=False)
    o_rows: tuple[int, ...] = field(compare=False)

    def cells(self):
        n = self.n
        for dr in range(self.height):
            for dc in range(self.width):
                yield ((self.row + dr) % n, (self.col + dc) % n)

    def coeffs(self) -> list[list[int]]:
        n = self.n
        grid = [[0] * n for _ in range(n)]
        for r, c in self.cells():
            grid[r][c] = 1
        return grid

    @property
    def key(self) -> tuple[int, int, int, int]:
        return (self.col, self.row, self.width, self.height)

    def corner_sw(self) -> tuple[int, int]:
        return (self.col, self.row)

    def corner_ne(self) -> tuple[int, int]:
        n = self.n
        return ((self.col + self.width) % n, (self.row + self.height) % n)


def _col_inside(col: int, a: int, w: int, n: int) -> bool:
    return 0 < (col - a) % n < w


class MoveTable:
    """Every empty rectangle out of every generator, built once per grid.

    ``moves[i]`` lists ``(rect_id, target_generator_id)`` pairs; ``rects``
    holds the distinct rectangles.  X- and O-avoiding subsets are what the
    differentials read off; the sign solver consumes the whole table.
    """

    def __init__(self, g: Grid, max_grid: int = DEFAULT_MAX_GRID):
        self.grid = g
        n = g.n
        self.gens = enumerate_generators(g, max_grid)
        self.gen_index = {x: i for i, x in enumerate(self.gens)}
        self.rects: list[Rectangle] = []
        self._rect_ids: dict[tuple[int, int, int, int], int] = {}
        self.moves: list[list[tuple[int, int]]] = []
        x_cols, o_cols = g.x_cols, g.o_cols

        def rect_id(a: int, b: int, w: int, h: int) -> int:
            rid = self._rect_ids.get((a, b, w, h))
            if rid is None:
                rows = [(b + dr) % n for dr in range(h)]
                xs = tuple(r for r in rows if (x_cols[r] - a) % n < w)
                os_ = tuple(r for r in rows if (o_cols[r] - a) % n < w)
                rid = len(self.rects)
                self.rects.append(Rectangle(n, a, b, w, h, xs, os_))
                self._rect_ids[(a, b, w, h)] = rid
            return rid

        for x in self.gens:
            out: list[tuple[int, int]] = []
            for r1 in range(n):
                c1 = x[r1]
                for r2 in range(r1 + 1, n):
                    c2 = x[r2]
                    y = list(x)
                    y[r1], y[r2] = c2, c1
                    yid = self.gen_index[tuple(y)]
                    for (a, b, w, h) in (
                        (c1, r1, (c2 - c1) % n, (r2 - r1) % n),
                        (c2, r2, (c1 - c2) % n, (r1 - r2) % n),
                    ):
                        interior = True
                        for dr in range(1, h):
                            if _col_inside(x[(b + dr) % n], a, w, n):
                                interior = False
                                break
                        if interior:
                            out.append((rect_id(a, b, w, h), yid))
            self.moves.append(out)


@lru_cache(maxsize=8)
def move_table(g: Grid, max_grid: int = DEFAULT_MAX_GRID) -> MoveTable:
    return MoveTable(g, max_grid)


def rect_moves_from(g: Grid, x: Generator) -> list[tuple[Rectangle, Generator]]:
    """Empty rectangles out of ``x`` with their target generators."""
    table = move_table(g)
    i = table.gen_index[x]
    return [(table.rects[rid], table.gens[j]) for rid, j in table.moves[i]]


def rectangles_between(g: Grid, x: Generator, y: Generator) -> list[Rectangle]:
    """The empty rectangles from ``x`` to ``y`` (at most two exist)."""
    diff = [r for r in range(g.n) if x[r] != y[r]]
    if len(diff) != 2:
        return []
    r1, r2 = diff
    if x[r1] != y[r2] or x[r2] != y[r1]:
        return []
    return [rect for rect, tgt in rect_moves_from(g, x) if tgt == y]


@dataclass(frozen=True)
class Domain:
    """2-chain of cells connecting two generators.

    ``coeffs[r][c]`` is the multiplicity of the cell in row r, column c.
    The defining constraint links the chain's alpha-boundary to the
    generators: at every lattice point, the corner count of the chain
    equals (points of y there) - (points of x there).
    """

    grid: Grid
    x_from: Generator
    y_to: Generator
    coeffs: tuple[tuple[int, ...], ...]

    def verify_boundary(self) -> bool:
        g, n = self.grid, self.grid.n
        d = self.coeffs
        for r in range(n):
            for c in range(n):
                corner = (d[r][c - 1] - d[r - 1][c - 1]) - (d[r][c] - d[r - 1][c])
                want = (1 if self.y_to[r] == c else 0) - (1 if self.x_from[r] == c else 0)
                if corner != want:
                    return False
        return True

    def is_positive(self) -> bool:
        return all(v >= 0 for row in self.coeffs for v in row)

    def multiplicity(self, marking_row: int, marking_col: int) -> int:
        return self.coeffs[marking_row][marking_col]

    def x_multiplicities(self) -> tuple[int, ...]:
        g = self.grid
        return tuple(self.coeffs[r][g.x_cols[r]] for r in range(g.n))

    def o_multiplicities(self) -> tuple[int, ...]:
        g = self.grid
        return tuple(self.coeffs[r][g.o_cols[r]] for r in range(g.n))

    def index(self) -> Fraction:
        return maslov_index(self.coeffs, self.grid.n, self.x_from, self.y_to)


def _staircase_coeffs(g: Grid, x: Generator, y: Generator) -> list[list[int]]:
    n = g.n
    d = [[0] * n for _ in range(n)]
    cur = list(x)
    while True:
        diff = [r for r in range(n) if cur[r] != y[r]]
        if not diff:
            break
        r1 = diff[0]
        ct = y[r1]
        r2 = cur.index(ct)
        a, b = cur[r1], r1
        w, h = (ct - a) % n, (r2 - r1) % n
        for dr in range(h):
            for dc in range(w):
                d[(b + dr) % n][(a + dc) % n] += 1
        cur[r1], cur[r2] = cur[r2], cur[r1]
    return d


def connecting_domain(g: Grid, x: Generator, y: Generator, mode: str = "any",
                      o_counts: tuple[int, ...] | None = None) -> Domain | None:
    """A domain from ``x`` to ``y``.

    mode 'any': a staircase of rectangles, always defined.
    mode 'zero_XO': the unique domain with multiplicity 0 at every X and,
    unless ``o_counts`` prescribes other O multiplicities, at every O;
    returns None when no such domain exists.  Uniqueness holds for knots:
    the marking incidences tie all row and column annuli together, so the
    correction by annuli is forced.
    """
    n = g.n
    base = _staircase_coeffs(g, x, y)
    if mode == "any":
        return Domain(g, x, y, tuple(tuple(row) for row in base))
    if mode != "zero_XO":
        raise ValueError(f"unknown mode {mode!r}")
    if o_counts is None:
        o_counts = (0,) * n

    # Solve base[r][c] + row_shift[r] + col_shift[c] = target at all 2n
    # markings by propagating over the marking incidence graph.
    row_shift: list[int | None] = [None] * n
    col_shift: list[int | None] = [None] * n
    edges = [[] for _ in range(n)]  # row -> [(col, required sum)]
    for r in range(n):
        edges[r].append((g.x_cols[r], -base[r][g.x_cols[r]]))
        edges[r].append((g.o_cols[r], o_counts[r] - base[r][g.o_cols[r]]))
    col_edges = [[] for _ in range(n)]
    for r in range(n):
        for c, s in edges[r]:
            col_edges[c].append((r, s))
    for seed in range(n):
        if row_shift[seed] is not None:
            continue
        row_shift[seed] = 0
        stack = [("row", seed)]
        while stack:
            kind, i = stack.pop()
            if kind == "row":
                for c, s in edges[i]:
                    val = s - row_shift[i]
                    if col_shift[c] is None:
                        col_shift[c] = val
                        stack.append(("col", c))
                    elif col_shift[c] != val:
                        return None
            else:
                for r, s in col_edges[i]:
                    val = s - col_shift[i]
                    if row_shift[r] is None:
                        row_shift[r] = val
                        stack.append(("row", r))
                    elif row_shift[r] != val:
                        return None
    coeffs = tuple(
        tuple(base[r][c] + row_shift[r] + col_shift[c] for c in range(n))
        for r in range(n))
    return Domain(g, x, y, coeffs)


@dataclass
class ChainComplex:
    """Bigraded complex with differential dropping M by 1, fixing A.

    ``labels[i]`` is a generator, or a ``(generator, exponents)`` pair for
    the truncated minus version.  ``diff[i]`` lists ``(j, coeff)`` with
    coefficients in F2 (always 1) or Z.
    """

    coefficients: str
    version: str
    grid: Grid
    truncation: int | None
    labels: list
    gradings: list[tuple[int, int]]
    diff: list[list[tuple[int, int]]]

    def blocks(self) -> dict[tuple[int, int], list[int]]:
        out: dict[tuple[int, int], list[int]] = {}
        for i, ma in enumerate(self.gradings):
            out.setdefault(ma, []).append(i)
        return out

    def d_squared(self) -> dict[tuple[int, int], int]:
        """Nonzero entries of the squared differential (empty means d^2=0)."""
        acc: dict[tuple[int, int], int] = {}
        for i, row in enumerate(self.diff):
            for j, cj in row:
                for k, ck in self.diff[j]:
                    key = (i, k)
                    acc[key] = acc.get(key, 0) + cj * ck
        if self.coefficients == "F2":
            return {k: v % 2 for k, v in acc.items() if v % 2}
        return {k: v for k, v in acc.items() if v}


def build_tilde_complex(g: Grid, coefficients: str = "F2", signs=None,
                        max_grid: int = DEFAULT_MAX_GRID) -> ChainComplex:
    """Fully blocked complex: rectangles avoiding every X and O marking."""
    _check_coefficients(coefficients, signs)
    table = move_table(g, max_grid)
    gradings = [(maslov(g, x), alexander(g, x)) for x in table.gens]
    diff: list[list[tuple[int, int]]] = []
    for i, x in enumerate(table.gens):
        row = []
        for rid, j in table.moves[i]:
            rect = table.rects[rid]
            if rect.x_rows or rect.o_rows:
                continue
            coeff = 1 if coefficients == "F2" else signs.sign(i, rid)
            row.append((j, coeff))
        diff.append(row)
    return ChainComplex(coefficients, "tilde", g, None, list(table.gens),
                        gradings, diff)


def build_minus_complex(g: Grid, d: int, coefficients: str = "F2", signs=None,
                        max_grid: int = DEFAULT_MAX_GRID,
                        max_elements: int = DEFAULT_MAX_ELEMENTS) -> ChainComplex:
    """U-truncated minus complex on pairs (generator, exponent vector).

    Exponents run over ``{0..d-1}^n``; differential terms pushing any
    exponent to ``d`` or beyond are dropped.
    """
    if d < 1:
        raise ValueError(f"truncation bound must be positive, got {d}")
    _check_coefficients(coefficients, signs)
    table = move_table(g, max_grid)
    n = g.n
    total = len(table.gens) * d ** n
    if total > max_elements:
        raise ResourceLimit(
            f"truncated minus basis has {total} elements, over the ceiling "
            f"{max_elements}")
    exps = list(itertools.product(range(d), repeat=n))
    labels = [(x, k) for x in table.gens for k in exps]
    index = {lab: i for i, lab in enumerate(labels)}
    gradings = []
    for x in table.gens:
        m, a = maslov(g, x), alexander(g, x)
        for k in exps:
            t = sum(k)
            gradings.append((m - 2 * t, a - t))
    diff: list[list[tuple[int, int]]] = []
    for (x, k) in labels:
        i = table.gen_index[x]
        row = []
        for rid, j in table.moves[i]:
            rect = table.rects[rid]
            if rect.x_rows:
                continue
            k2 = list(k)
            ok = True
            for orow in rect.o_rows:
                k2[orow] += 1
                if k2[orow] >= d:
                    ok = False
                    break
            if not ok:
                continue
            coeff = 1 if coefficients == "F2" else signs.sign(i, rid)
            row.append((index[(table.gens[j], tuple(k2))], coeff))
        diff.append(row)
    return ChainComplex(coefficients, "minus", g, d, labels, gradings, diff)


def _check_coefficients(coefficients: str, signs) -> None:
    if coefficients not in ("F2", "Z"):
        raise ValueError(f"coefficients must be 'F2' or 'Z', got {coefficients!r}")
    if coefficients == "Z" and signs is None:
        raise ValueError("integer coefficients need a solved sign assignment")

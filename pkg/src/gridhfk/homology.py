"""Bigraded homology of grid chain complexes.

The differential preserves the Alexander grading and drops the Maslov
grading by one, so the complex splits into independent columns indexed by
A, each a chain of finite-dimensional pieces indexed by M.  Every column
is eliminated on its own (optionally on a thread pool) and the per-block
results merge into one immutable table of ranks.
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

from .complexes import ChainComplex
from .errors import InexactDivision, OverflowGuard
from .linalg import f2_rank, invariant_factors

__all__ = [
    "BigradedRanks",
    "homology",
    "extract_hat",
    "poincare",
    "poincare_string",
]


@dataclass(frozen=True)
class BigradedRanks:
    """Homology ranks per (maslov, alexander) pair.

    ``blocks[(m, a)]`` is ``(free_rank, torsion)`` where ``torsion`` is a
    sorted tuple of invariant factors greater than 1.  Zero blocks are
    omitted.
    """

    coefficients: str
    blocks: dict[tuple[int, int], tuple[int, tuple[int, ...]]]

    def free(self, m: int, a: int) -> int:
        return self.blocks.get((m, a), (0, ()))[0]

    def torsion(self, m: int, a: int) -> tuple[int, ...]:
        return self.blocks.get((m, a), (0, ()))[1]

    @property
    def total_rank(self) -> int:
        return sum(f for f, _ in self.blocks.values())

    @property
    def has_torsion(self) -> bool:
        return any(t for _, t in self.blocks.values())

    def alexander_profile(self) -> dict[int, int]:
        """Total free rank per Alexander grading, sparse."""
        prof: dict[int, int] = {}
        for (_, a), (free, _) in self.blocks.items():
            if free:
                prof[a] = prof.get(a, 0) + free
        return prof

    def to_json_list(self) -> list[dict]:
        out = []
        for (m, a) in sorted(self.blocks, key=lambda ma: (-ma[1], -ma[0])):
            free, tors = self.blocks[(m, a)]
            out.append({"m": m, "a": a, "free": free, "torsion": list(tors)})
        return out


def _column_ranks(complex_: ChainComplex, by_m: dict[int, list[int]],
                  pos_of: dict[int, int]):
    """Eliminate one Alexander column.  Returns {(m): (free, torsion)}."""
    diff = complex_.diff
    over_z = complex_.coefficients == "Z"
    rank_between: dict[int, int] = {}
    torsion_at: dict[int, tuple[int, ...]] = {}
    for m, sources in by_m.items():
        targets = by_m.get(m - 1)
        if not targets:
            continue
        if over_z:
            rows = []
            for i in sources:
                row = {pos_of[j]: c for j, c in diff[i] if c}
                if row:
                    rows.append(row)
            factors = invariant_factors(rows)
            rank_between[m] = len(factors)
            tors = tuple(sorted(d for d in factors if d > 1))
            if tors:
                torsion_at[m - 1] = tors
        else:
            masks = []
            for i in sources:
                mask = 0
                for j, c in diff[i]:
                    if c & 1:
                        mask |= 1 << pos_of[j]
                if mask:
                    masks.append(mask)
            rank_between[m] = f2_rank(masks)
    out: dict[int, tuple[int, tuple[int, ...]]] = {}
    for m, indices in by_m.items():
        free = len(indices) - rank_between.get(m, 0) - rank_between.get(m + 1, 0)
        tors = torsion_at.get(m, ())
        if free or tors:
            out[m] = (free, tors)
    return out


def homology(complex_: ChainComplex, threads: int = 1) -> BigradedRanks:
    """Rank (and over Z, torsion) of homology at every bigrading."""
    gradings = complex_.gradings
    for i, row in enumerate(complex_.diff):
        mi, ai = gradings[i]
        for j, c in row:
            if c:
                assert gradings[j] == (mi - 1, ai), \
                    "differential term off the (M-1, A) block"
    assert not complex_.d_squared(), "differential does not square to zero"

    columns: dict[int, dict[int, list[int]]] = {}
    for i, (m, a) in enumerate(gradings):
        columns.setdefault(a, {}).setdefault(m, []).append(i)
    pos_of = {}
    for by_m in columns.values():
        for indices in by_m.values():
            for k, i in enumerate(indices):
                pos_of[i] = k

    def run(a: int):
        return a, _column_ranks(complex_, columns[a], pos_of)

    try:
        if threads > 1:
            with ThreadPoolExecutor(max_workers=threads) as pool:
                results = list(pool.map(run, sorted(columns)))
        else:
            results = [run(a) for a in sorted(columns)]
    except MemoryError as exc:
        raise OverflowGuard("elimination hit the memory ceiling") from exc

    blocks: dict[tuple[int, int], tuple[int, tuple[int, ...]]] = {}
    for a, per_m in results:
        for m, cell in per_m.items():
            blocks[(m, a)] = cell
    return BigradedRanks(complex_.coefficients, blocks)


def poincare(ranks: BigradedRanks) -> dict[tuple[int, int], int]:
    """Free ranks as a Laurent polynomial in q (Maslov) and t (Alexander)."""
    return {ma: free for ma, (free, _) in ranks.blocks.items() if free}


def poincare_string(poly: dict[tuple[int, int], int]) -> str:
    if not poly:
        return "0"
    terms = []
    for m, a in sorted(poly, key=lambda ma: (-ma[1], -ma[0])):
        coeff = poly[(m, a)]
        bits = []
        if m:
            bits.append("q" if m == 1 else f"q^{m}")
        if a:
            bits.append("t" if a == 1 else f"t^{a}")
        if coeff != 1 or not bits:
            bits.insert(0, str(coeff))
        terms.append(" ".join(bits))
    return " + ".join(terms)


def _divide_once(diag: dict[int, int]) -> dict[int, int]:
    """Divide sum(c_a x^a) by (1 + x^-1); raises if the remainder is nonzero."""
    top = max(diag)
    bottom = min(diag)
    quot: dict[int, int] = {}
    prev = 0
    for a in range(top, bottom, -1):
        cur = diag.get(a, 0) - prev
        if cur:
            quot[a] = cur
        prev = cur
    if diag.get(bottom, 0) - prev:
        raise InexactDivision("tensor-factor division left a remainder")
    return quot


def extract_hat(tilde: BigradedRanks, n: int) -> BigradedRanks:
    """Peel n-1 two-step tensor factors off tilde homology.

    The tilde homology of an n x n grid is the hat invariant tensored with
    n-1 copies of a rank-two piece spanning bigradings (0, 0) and (-1, -1),
    so its Poincare polynomial is divisible by (1 + 1/(q t))^(n-1).  The
    quotient's coefficients are the hat ranks.
    """
    if tilde.has_torsion:
        raise InexactDivision("tilde homology has torsion; cannot split off "
                              "free tensor factors")
    diagonals: dict[int, dict[int, int]] = {}
    for (m, a), (free, _) in tilde.blocks.items():
        if free:
            diagonals.setdefault(m - a, {})[a] = free
    blocks: dict[tuple[int, int], tuple[int, tuple[int, ...]]] = {}
    for delta, diag in diagonals.items():
        for _ in range(n - 1):
            diag = _divide_once(diag)
            if not diag:
                break
        for a, coeff in diag.items():
            if coeff < 0:
                raise InexactDivision("tensor-factor quotient has a negative "
                                      "coefficient")
            if coeff:
                blocks[(a + delta, a)] = (coeff, ())
    return BigradedRanks(tilde.coefficients, blocks)

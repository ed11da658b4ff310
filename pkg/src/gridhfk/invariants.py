"""Knot invariants read off the hat homology, and the move-invariance harness.

The Alexander polynomial is the graded Euler characteristic of the hat
groups, the genus is the width of the Alexander support, and fiberedness
is detected by the top group being a single free summand.  The harness
replays commutation and (de)stabilization moves and checks that the hat
rank table never changes.
"""

from __future__ import annotations

import collections
import random
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

from .complexes import build_tilde_complex
from .errors import AsymmetryDetected, IllegalCommutation, NotDestabilizable
from .grid import Grid, commute, destabilize, stabilize
from .homology import BigradedRanks, extract_hat, homology
from .signs import solve_signs

__all__ = [
    "AlexanderPolynomial",
    "InvarianceReport",
    "alexander_polynomial",
    "apply_move",
    "check_invariance",
    "fibered",
    "genus",
    "hat_homology",
    "legal_moves",
]

# A move descriptor is one of
#   ("commute", "row" | "col", index)
#   ("stabilize", row, variant)      variant in "abcd"
#   ("destabilize", row, col)
MoveDescriptor = tuple


@dataclass(frozen=True)
class AlexanderPolynomial:
    """Symmetric Laurent polynomial in t, exponents descending.

    ``mod2`` marks coefficients reduced mod 2 (the best an F2-only
    pipeline can certify); such polynomials carry no overall sign.
    """

    coeffs: tuple[tuple[int, int], ...]
    mod2: bool = False

    def coefficient(self, exponent: int) -> int:
        for a, c in self.coeffs:
            if a == exponent:
                return c
        return 0

    @property
    def degree(self) -> int:
        return max((abs(a) for a, _ in self.coeffs), default=0)

    def as_dict(self) -> dict[int, int]:
        return dict(self.coeffs)

    def __str__(self) -> str:
        if not self.coeffs:
            return "0"
        parts = []
        for a, c in self.coeffs:
            sign = "-" if c < 0 else "+"
            mag = abs(c)
            if a == 0:
                body = str(mag)
            else:
                power = "t" if a == 1 else f"t^{a}"
                body = power if mag == 1 else f"{mag}{power}"
            parts.append((sign, body))
        first_sign, first_body = parts[0]
        text = ("-" if first_sign == "-" else "") + first_body
        for sign, body in parts[1:]:
            text += f" {sign} {body}"
        return text


def _euler_by_alexander(hat: BigradedRanks) -> dict[int, int]:
    chi: dict[int, int] = collections.defaultdict(int)
    for (m, a), (free, _) in hat.blocks.items():
        chi[a] += (-1) ** m * free
    return {a: c for a, c in chi.items() if c}


def alexander_polynomial(hat: BigradedRanks) -> AlexanderPolynomial:
    """Graded Euler characteristic of the hat groups, normalized to 1 at t=1.

    Raises AsymmetryDetected when the result is not symmetric under
    t <-> 1/t or does not take value +-1 at t = 1; both point at a bug
    upstream, not at the input knot.  Over F2 the coefficients are only
    determined mod 2 and the result is flagged.
    """
    mod2 = hat.coefficients == "F2"
    chi = _euler_by_alexander(hat)
    if mod2:
        chi = {a: c % 2 for a, c in chi.items() if c % 2}
    for a, c in chi.items():
        if chi.get(-a, 0) != (c if not mod2 else c % 2):
            raise AsymmetryDetected(
                f"coefficient {c} at t^{a} but {chi.get(-a, 0)} at t^{-a}")
    at_one = sum(chi.values())
    if mod2:
        if at_one % 2 != 1:
            raise AsymmetryDetected(
                f"value at t=1 is {at_one % 2} mod 2, expected 1")
    else:
        if at_one not in (1, -1):
            raise AsymmetryDetected(
                f"value at t=1 is {at_one}, expected +-1 for a knot")
        if at_one == -1:
            chi = {a: -c for a, c in chi.items()}
    ordered = tuple(sorted(chi.items(), key=lambda item: -item[0]))
    return AlexanderPolynomial(ordered, mod2=mod2)


def genus(hat: BigradedRanks) -> int:
    """Highest Alexander grading carrying a nonzero group.

    Also asserts the classical lower bound: the genus is at least the
    degree of the Alexander polynomial.
    """
    assert hat.total_rank > 0, "hat homology of a knot is never zero"
    top = max(a for (_, a), (free, torsion) in hat.blocks.items()
              if free or torsion)
    chi = _euler_by_alexander(hat)
    if hat.coefficients == "F2":
        chi = {a: c % 2 for a, c in chi.items() if c % 2}
    deg = max((abs(a) for a in chi), default=0)
    assert top >= deg, f"genus {top} below polynomial degree {deg}"
    return top


def fibered(hat: BigradedRanks) -> bool:
    """True iff the group in the top Alexander grading is a single Z.

    Needs the integer computation: free ranks alone cannot separate
    Z from Z + torsion, so an F2 table is refused.
    """
    if hat.coefficients != "Z":
        raise ValueError(
            "fiberedness needs integer homology; rerun with Z coefficients")
    top = genus(hat)
    free = sum(f for (_, a), (f, _) in hat.blocks.items() if a == top)
    torsion = any(t for (_, a), (_, t) in hat.blocks.items() if a == top)
    return free == 1 and not torsion


# ------------------------------------------------------------- move harness

def apply_move(g: Grid, move: MoveDescriptor) -> Grid:
    kind = move[0]
    if kind == "commute":
        return commute(g, move[1], move[2])
    if kind == "stabilize":
        return stabilize(g, move[1], move[2])
    if kind == "destabilize":
        return destabilize(g, move[1], move[2])
    raise ValueError(f"unknown move kind {kind!r}")


def legal_moves(g: Grid, max_grid: int = 7) -> list[MoveDescriptor]:
    """Every move legal on ``g``, with stabilizations capped at ``max_grid``.

    The cap keeps randomly grown grids small enough that recomputing
    homology after each move stays cheap.
    """
    out: list[MoveDescriptor] = []
    for axis in ("row", "col"):
        for i in range(g.n):
            try:
                commute(g, axis, i)
            except IllegalCommutation:
                continue
            out.append(("commute", axis, i))
    if g.n < max_grid:
        for r in range(g.n):
            for variant in "abcd":
                out.append(("stabilize", r, variant))
    for r in range(g.n - 1):
        for c in range(g.n - 1):
            try:
                destabilize(g, r, c)
            except NotDestabilizable:
                continue
            out.append(("destabilize", r, c))
    return out


def hat_homology(g: Grid, coefficients: str = "F2",
                 max_grid: int = 9, threads: int = 1) -> BigradedRanks:
    """Hat rank table of the knot presented by ``g``."""
    signs = solve_signs(g, max_grid) if coefficients == "Z" else None
    tilde = homology(build_tilde_complex(g, coefficients, signs, max_grid),
                     threads)
    return extract_hat(tilde, g.n)


@dataclass(frozen=True)
class InvarianceReport:
    """Hat tables along a move sequence, compared against the start."""

    start: Grid
    moves: tuple[MoveDescriptor, ...]
    grids: tuple[Grid, ...]
    tables: tuple[BigradedRanks, ...]
    divergence: int | None

    @property
    def ok(self) -> bool:
        return self.divergence is None

    def summary(self) -> str:
        k = len(self.tables)
        if self.ok:
            return f"PASS: {k}/{k} HFK-hat tables identical"
        i = self.divergence
        return (f"FAIL: HFK-hat changed after move {i} {self.moves[i - 1]!r}: "
                f"expected {dict(sorted(self.tables[0].blocks.items()))}, "
                f"got {dict(sorted(self.tables[i].blocks.items()))}")


def check_invariance(g: Grid, moves, seed: int = 0,
                     coefficients: str = "F2", threads: int = 1,
                     max_grid: int = 7) -> InvarianceReport:
    """Replay moves on ``g`` and verify the hat table never changes.

    ``moves`` is either an explicit sequence of move descriptors or an
    integer count, in which case that many legal moves are sampled with
    the given seed.  The table after every move is compared against the
    starting table; the report records the first divergence, which for a
    correct pipeline never occurs.
    """
    if isinstance(moves, int):
        rng = random.Random(seed)
        sampled: list[MoveDescriptor] = []
        cur = g
        for _ in range(moves):
            candidates = legal_moves(cur, max_grid)
            if not candidates:
                break
            mv = rng.choice(candidates)
            sampled.append(mv)
            cur = apply_move(cur, mv)
        descriptors = tuple(sampled)
    else:
        descriptors = tuple(tuple(m) for m in moves)

    grids = [g]
    for mv in descriptors:
        grids.append(apply_move(grids[-1], mv))

    def table(h: Grid) -> BigradedRanks:
        return hat_homology(h, coefficients, max_grid=max(max_grid, h.n))

    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            tables = list(pool.map(table, grids))
    else:
        tables = [table(h) for h in grids]

    divergence = None
    for i in range(1, len(tables)):
        if tables[i].blocks != tables[0].blocks:
            divergence = i
            break
    return InvarianceReport(start=g, moves=descriptors, grids=tuple(grids),
                            tables=tuple(tables), divergence=divergence)

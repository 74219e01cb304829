"""Anti-Latin squares: validation, decodability, pair search, mutual sets.

An anti-Latin square is a d x d table over Z_d in which every row and
every column contains a duplicated value.  A pair (A, B) of such squares
drives a relay code sending (a_{Y1,Y2}, b_{Y1,Y2}); the pair is usable
iff the second-layer value sets ("Xi sets") indexed by message value are
pairwise disjoint, which this module decides exactly.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from itertools import product
from typing import Optional, Sequence

from .errors import BudgetError

DEFAULT_SEED = 1729


def is_anti_latin(table: Sequence[Sequence[int]]) -> bool:
    """True iff every row and every column has a repeated entry.

    The table must be square with entries in Z_d; anything else raises.
    """
    d = len(table)
    if d == 0:
        raise ValueError("empty table")
    rows = [tuple(r) for r in table]
    if any(len(r) != d for r in rows):
        raise ValueError("table must be square")
    for r in rows:
        for v in r:
            if not isinstance(v, int) or not 0 <= v < d:
                raise ValueError(f"entry {v!r} outside Z_{d}")
    for r in rows:
        if len(set(r)) == d:
            return False
    for j in range(d):
        if len({r[j] for r in rows}) == d:
            return False
    return True


@dataclass(frozen=True)
class AntiLatinSquare:
    """A validated anti-Latin square."""

    d: int
    rows: tuple[tuple[int, ...], ...]

    def __post_init__(self) -> None:
        if len(self.rows) != self.d:
            raise ValueError("row count must equal d")
        if not is_anti_latin(self.rows):
            raise ValueError("table is not an anti-Latin square")

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence[int]]) -> "AntiLatinSquare":
        return cls(len(rows), tuple(tuple(r) for r in rows))

    def entry(self, i: int, j: int) -> int:
        return self.rows[i][j]

    def flat(self) -> tuple[int, ...]:
        return tuple(v for row in self.rows for v in row)

    def relabel(self, perm: Sequence[int]) -> "AntiLatinSquare":
        """Apply a value permutation of Z_d to every entry."""
        return AntiLatinSquare.from_rows(
            [[perm[v] for v in row] for row in self.rows])

    def to_text(self) -> str:
        return "\n".join(" ".join(str(v) for v in row) for row in self.rows) + "\n"

    @classmethod
    def from_text(cls, text: str) -> "AntiLatinSquare":
        rows = [[int(t) for t in line.split()]
                for line in text.strip().splitlines() if line.strip()]
        return cls.from_rows(rows)


@dataclass(frozen=True)
class XiSet:
    """Possible second-edge values given a first-edge value z and message m."""

    z: int
    m: int
    members: frozenset[int]


def xi_set(a: AntiLatinSquare, b: AntiLatinSquare, z: int, m: int) -> XiSet:
    """Values b takes on the cells (l, l+m) where a equals z."""
    if a.d != b.d:
        raise ValueError("size mismatch")
    d = a.d
    members = frozenset(
        b.entry(l, (l + m) % d) for l in range(d) if a.entry(l, (l + m) % d) == z)
    return XiSet(z, m, members)


def is_decodable_pair(a: AntiLatinSquare, b: AntiLatinSquare) -> bool:
    """True iff the Xi sets for each z are pairwise disjoint across messages.

    This is the exact unique-decodability condition for the relay code
    built on (a, b).  The condition is symmetric in (a, b): it fails iff
    two cells on different broken diagonals carry the same (a, b) value
    pair.
    """
    if a.d != b.d:
        raise ValueError("size mismatch")
    d = a.d
    for z in range(d):
        sets = [xi_set(a, b, z, m).members for m in range(d)]
        for m1 in range(d):
            for m2 in range(m1 + 1, d):
                if sets[m1] & sets[m2]:
                    return False
    return True


def is_one_to_one_pair(a: AntiLatinSquare, b: AntiLatinSquare) -> bool:
    """True iff (i, j) -> (a_ij, b_ij) is injective over all d^2 cells."""
    if a.d != b.d:
        raise ValueError("size mismatch")
    d = a.d
    pairs = {(a.entry(i, j), b.entry(i, j))
             for i in range(d) for j in range(d)}
    return len(pairs) == d * d


# ---------------------------------------------------------------------------
# catalog enumeration and canonical representatives

def enumerate_anti_latin(d: int) -> list[AntiLatinSquare]:
    """All d x d anti-Latin squares in lexicographic order (d <= 3)."""
    if d > 3:
        raise BudgetError(f"full enumeration of {d}^{d * d} tables is out of reach")
    out = []
    for flat in product(range(d), repeat=d * d):
        rows = [flat[i * d:(i + 1) * d] for i in range(d)]
        if is_anti_latin(rows):
            out.append(AntiLatinSquare.from_rows(rows))
    return out


def _value_permutations(d: int) -> list[tuple[int, ...]]:
    perms = []

    def rec(prefix):
        if len(prefix) == d:
            perms.append(tuple(prefix))
            return
        for v in range(d):
            if v not in prefix:
                rec(prefix + [v])

    rec([])
    return perms


def canonical_representatives(catalog: Sequence[AntiLatinSquare],
                              d: int) -> list[AntiLatinSquare]:
    """One square per value-relabeling orbit, keeping catalog order.

    Both the anti-Latin property and pair decodability are invariant
    under independent value relabelings of each square, so existence
    searches may range over representatives only.
    """
    perms = _value_permutations(d)
    seen: set[tuple[int, ...]] = set()
    reps = []
    for sq in catalog:
        flat = sq.flat()
        canon = min(tuple(p[v] for v in flat) for p in perms)
        if canon not in seen:
            seen.add(canon)
            reps.append(sq)
    return reps


# ---------------------------------------------------------------------------
# pair search

@dataclass(frozen=True)
class PairSearchResult:
    found: bool
    pair: Optional[tuple[AntiLatinSquare, AntiLatinSquare]]
    proven_empty: bool
    method: str
    examined: int


def reference_decodable_pair(d: int) -> tuple[AntiLatinSquare, AntiLatinSquare]:
    """Known one-to-one (hence decodable) pairs for d = 3 and d = 4."""
    if d == 3:
        a = AntiLatinSquare.from_rows([[0, 1, 0], [1, 1, 2], [0, 2, 2]])
        b = AntiLatinSquare.from_rows([[0, 2, 2], [0, 1, 0], [1, 1, 2]])
        return a, b
    if d == 4:
        a = AntiLatinSquare.from_rows(
            [[0, 1, 3, 3], [0, 1, 2, 0], [1, 1, 2, 3], [0, 2, 2, 3]])
        b = AntiLatinSquare.from_rows(
            [[0, 0, 1, 0], [1, 1, 1, 2], [3, 2, 2, 2], [3, 0, 3, 3]])
        return a, b
    raise ValueError(f"no reference pair stored for d={d}")


def find_decodable_pair(d: int,
                        seed: int = DEFAULT_SEED,
                        budget: int = 400_000) -> PairSearchResult:
    """Search for a decodable pair of d x d anti-Latin squares.

    d=2: exhaustive over all 16 tables, returning a proven NotFound.
    d=3: exhaustive over value-relabeling representatives (complete by
         the relabeling invariance of decodability).
    d>=4: seeded randomized hill-climb; budget exhaustion is reported as
         found=False with proven_empty=False.
    """
    if d < 2:
        raise ValueError("d must be >= 2")
    if d == 2:
        catalog = enumerate_anti_latin(2)
        examined = 0
        for a in catalog:
            for b in catalog:
                examined += 1
                if is_decodable_pair(a, b):
                    return PairSearchResult(True, (a, b), False, "exhaustive", examined)
        return PairSearchResult(False, None, True, "exhaustive", examined)
    if d == 3:
        reps = canonical_representatives(enumerate_anti_latin(3), 3)
        diag = _diagonal_index(3)
        examined = 0
        for a in reps:
            fa = a.flat()
            for b in reps:
                examined += 1
                if _pair_decodable_raw(fa, b.flat(), diag, 3):
                    return PairSearchResult(True, (a, b), False, "exhaustive", examined)
        return PairSearchResult(False, None, True, "exhaustive", examined)
    return _hill_climb_pair(d, seed, budget)


def _diagonal_index(d: int) -> tuple[int, ...]:
    return tuple((j - i) % d for i in range(d) for j in range(d))


def _pair_decodable_raw(fa: Sequence[int], fb: Sequence[int],
                        diag: Sequence[int], d: int) -> bool:
    # decodable iff no (a, b) value pair repeats across two diagonals
    masks = [0] * d
    for i in range(d * d):
        masks[diag[i]] |= 1 << (fa[i] * d + fb[i])
    for m1 in range(d):
        for m2 in range(m1 + 1, d):
            if masks[m1] & masks[m2]:
                return False
    return True


def _anti_latin_violations(rows: list[list[int]], d: int) -> int:
    bad = 0
    for r in rows:
        if len(set(r)) == d:
            bad += 1
    for j in range(d):
        if len({rows[i][j] for i in range(d)}) == d:
            bad += 1
    return bad


def _collision_count(fa: Sequence[int], fb: Sequence[int],
                     diag: Sequence[int], d: int) -> int:
    diags_of_token: dict[int, set[int]] = {}
    for i in range(d * d):
        diags_of_token.setdefault(fa[i] * d + fb[i], set()).add(diag[i])
    return sum(len(s) - 1 for s in diags_of_token.values())


def _hill_climb_pair(d: int, seed: int, budget: int) -> PairSearchResult:
    rng = random.Random(seed)
    diag = _diagonal_index(d)

    def fresh() -> list[list[int]]:
        return [[rng.randrange(d) for _ in range(d)] for _ in range(d)]

    def score(a: list[list[int]], b: list[list[int]]) -> int:
        fa = [v for row in a for v in row]
        fb = [v for row in b for v in row]
        return (_anti_latin_violations(a, d) + _anti_latin_violations(b, d)
                + _collision_count(fa, fb, diag, d))

    steps = 0
    while steps < budget:
        a, b = fresh(), fresh()
        current = score(a, b)
        stall = 0
        while steps < budget and stall < 60 * d * d:
            steps += 1
            target = a if rng.random() < 0.5 else b
            i, j = rng.randrange(d), rng.randrange(d)
            old = target[i][j]
            target[i][j] = rng.randrange(d)
            candidate = score(a, b)
            if candidate <= current:
                stall = stall + 1 if candidate == current else 0
                current = candidate
                if current == 0:
                    pair = (AntiLatinSquare.from_rows(a), AntiLatinSquare.from_rows(b))
                    if is_decodable_pair(*pair):
                        return PairSearchResult(True, pair, False, "hill-climb", steps)
            else:
                target[i][j] = old
                stall += 1
    return PairSearchResult(False, None, False, "hill-climb", steps)


# ---------------------------------------------------------------------------
# mutual sets (the open quantities A(d) and B(d))

@dataclass(frozen=True)
class MaxSetResult:
    size: int
    squares: tuple[AntiLatinSquare, ...]
    mode: str
    method: str
    exact: bool


def _pair_predicate(mode: str):
    if mode == "decodable":
        return is_decodable_pair
    if mode == "one-to-one":
        return is_one_to_one_pair
    raise ValueError(f"unknown mode {mode!r}")


def _max_clique(adj: list[int], n: int) -> list[int]:
    """Exact maximum clique via branch and bound with greedy coloring.

    Deterministic given the vertex order; adjacency is bitmask-encoded.
    """
    best: list[int] = []

    def color_sort(p: int) -> tuple[list[int], list[int]]:
        order: list[int] = []
        bounds: list[int] = []
        color = 0
        rest = p
        while rest:
            color += 1
            avail = rest
            while avail:
                v = (avail & -avail).bit_length() - 1
                avail &= avail - 1
                avail &= ~adj[v]
                rest &= ~(1 << v)
                order.append(v)
                bounds.append(color)
        return order, bounds

    def expand(p: int, clique: list[int]) -> None:
        nonlocal best
        if p == 0:
            if len(clique) > len(best):
                best = clique.copy()
            return
        order, bounds = color_sort(p)
        for i in range(len(order) - 1, -1, -1):
            if len(clique) + bounds[i] <= len(best):
                return
            v = order[i]
            clique.append(v)
            expand(p & adj[v], clique)
            clique.pop()
            p &= ~(1 << v)

    expand((1 << n) - 1, [])
    return best


def compatibility_graph(catalog: Sequence[AntiLatinSquare],
                        d: int, mode: str) -> list[int]:
    """Bitmask adjacency over the catalog under the pairwise predicate."""
    n = len(catalog)
    flats = [sq.flat() for sq in catalog]
    diag = _diagonal_index(d)
    adj = [0] * n
    if mode == "decodable":
        # precompute per-square diagonal split of cell indices
        for i in range(n):
            fi = flats[i]
            for j in range(i + 1, n):
                if _pair_decodable_raw(fi, flats[j], diag, d):
                    adj[i] |= 1 << j
                    adj[j] |= 1 << i
    else:
        _pair_predicate(mode)  # validates the mode name
        cells = d * d
        # a one-to-one partner forces every value to appear exactly d
        # times in each square, so unbalanced squares are isolated
        balanced = [i for i in range(n)
                    if all(flats[i].count(v) == d for v in range(d))]
        for ii, i in enumerate(balanced):
            fi = flats[i]
            for j in balanced[ii + 1:]:
                fj = flats[j]
                if len({(fi[c], fj[c]) for c in range(cells)}) == cells:
                    adj[i] |= 1 << j
                    adj[j] |= 1 << i
    return adj


def max_mutual_set(d: int,
                   mode: str = "decodable",
                   method: str = "exact",
                   seed: int = DEFAULT_SEED,
                   budget: int = 60_000) -> MaxSetResult:
    """Largest found set of pairwise-compatible anti-Latin squares.

    mode "decodable" targets A(d), "one-to-one" targets B(d); singleton
    sets satisfy the pairwise condition vacuously, so results are >= 1.
    The exact method (d <= 3 only) enumerates the full catalog, builds
    the compatibility graph, and solves maximum clique to optimality.
    The heuristic method reports a certified lower bound.
    """
    predicate = _pair_predicate(mode)
    if method == "exact":
        if d > 3:
            raise BudgetError("exact mode is limited to d <= 3")
        catalog = enumerate_anti_latin(d)
        adj = compatibility_graph(catalog, d, mode)
        clique = _max_clique(adj, len(catalog))
        squares = tuple(catalog[i] for i in sorted(clique))
        if not squares:
            squares = (catalog[0],)
        _validate_certificate(squares, predicate)
        return MaxSetResult(len(squares), squares, mode, "exact", True)
    if method != "heuristic":
        raise ValueError(f"unknown method {method!r}")
    squares = _greedy_mutual_set(d, predicate, seed, budget)
    _validate_certificate(squares, predicate)
    return MaxSetResult(len(squares), squares, mode, "heuristic", False)


def _validate_certificate(squares: Sequence[AntiLatinSquare], predicate) -> None:
    for i in range(len(squares)):
        for j in range(i + 1, len(squares)):
            if not predicate(squares[i], squares[j]):
                raise AssertionError("certificate fails its own pairwise predicate")


def _greedy_mutual_set(d: int, predicate, seed: int,
                       budget: int) -> tuple[AntiLatinSquare, ...]:
    """Grow a compatible set by hill-climbing one new member at a time."""
    rng = random.Random(seed)
    diag = _diagonal_index(d)
    one_to_one = predicate is is_one_to_one_pair

    def member_score(rows: list[list[int]], members: list[AntiLatinSquare]) -> int:
        flat = [v for row in rows for v in row]
        s = _anti_latin_violations(rows, d)
        for m in members:
            fm = m.flat()
            if one_to_one:
                cells = d * d
                s += cells - len({(fm[c], flat[c]) for c in range(cells)})
            else:
                s += _collision_count(fm, flat, diag, d)
        return s

    best: list[AntiLatinSquare] = []
    steps = 0
    while steps < budget:
        members: list[AntiLatinSquare] = []
        # keep adding members until the budget runs out or we stall
        while steps < budget:
            rows = [[rng.randrange(d) for _ in range(d)] for _ in range(d)]
            current = member_score(rows, members)
            stall = 0
            grown = False
            while steps < budget and stall < 40 * d * d:
                steps += 1
                if current == 0:
                    members.append(AntiLatinSquare.from_rows(rows))
                    grown = True
                    break
                i, j = rng.randrange(d), rng.randrange(d)
                old = rows[i][j]
                rows[i][j] = rng.randrange(d)
                cand = member_score(rows, members)
                if cand <= current:
                    stall = stall + 1 if cand == current else 0
                    current = cand
                else:
                    rows[i][j] = old
                    stall += 1
            if not grown:
                break
        if len(members) > len(best):
            best = members
    if not best:
        raise BudgetError("heuristic search produced no certificate within budget")
    return tuple(best)

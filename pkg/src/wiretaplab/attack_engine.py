"""Wiretap attack enumeration, exact simulation, and code classification.

Eve taps one first-layer edge (e(1) or e(2)) and one second-layer edge
(e(3) or e(4)).  Four attack classes are modeled: the second edge may be
fixed (deterministic) or chosen from the first observation (adaptive),
and the tapped first-layer symbol may be forwarded unchanged (passive)
or replaced by a function of the observed value (active).  Layer-1
symbols are observable before layer-2 symbols; adaptivity only flows
forward.

Eve's view is the pair (true first observation, second observation); a
substituted value is her own choice and carries no information.  All
laws are exact: atoms are uniform over (message, scrambles, relay
randomness) and every secrecy verdict is decided by integer-weight
comparisons, never float thresholds.  Adaptive classes are classified by
optimizing the selector per first observation, which is exact because
the leakage objective is separable across observations; this covers the
full selector space without materializing it.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from itertools import product
from typing import Iterable, Iterator, Optional, Sequence

from .anti_latin import find_decodable_pair, reference_decodable_pair
from .errors import BudgetError
from .info_theory import JointDistribution, _entropy_of_weights, _project
from .onehop_codes import (
    OneHopCode,
    anti_latin_code,
    enumerate_onehop_codes,
    scalar_linear_code,
    standard_nonlinear_code,
    vector_linear_code,
)


class AttackClass(Enum):
    DETERMINISTIC_PASSIVE = "deterministic-passive"
    ADAPTIVE_PASSIVE = "adaptive-passive"
    DETERMINISTIC_ACTIVE = "deterministic-active"
    ADAPTIVE_ACTIVE = "adaptive-active"

    @property
    def is_active(self) -> bool:
        return self in (AttackClass.DETERMINISTIC_ACTIVE, AttackClass.ADAPTIVE_ACTIVE)

    @property
    def is_adaptive(self) -> bool:
        return self in (AttackClass.ADAPTIVE_PASSIVE, AttackClass.ADAPTIVE_ACTIVE)

    @classmethod
    def from_name(cls, name: str) -> "AttackClass":
        for k in cls:
            if k.value == name:
                return k
        raise ValueError(f"unknown attack class {name!r}")


class SecurityLevel(Enum):
    PERFECT = "perfectly-secret"
    IMPERFECT = "imperfectly-secret"
    INSECURE = "insecure"


# worst-to-best for family summaries
_LEVEL_RANK = {SecurityLevel.INSECURE: 0, SecurityLevel.IMPERFECT: 1,
               SecurityLevel.PERFECT: 2}


def _identity(d: int) -> tuple[int, ...]:
    return tuple(range(d))


@dataclass(frozen=True)
class AttackStrategy:
    """One complete wiretap plan.

    modification maps the observed first-layer symbol to the value the
    relay receives (identity for passive attacks; applied in every shot
    for two-shot codes).  selector maps each possible first-layer view,
    in lexicographic order, to the tapped second-layer edge; a constant
    selector is a deterministic attack.
    """

    d: int
    shots: int
    klass: AttackClass
    first_edge: int
    modification: tuple[int, ...]
    selector: tuple[int, ...]

    def __post_init__(self) -> None:
        if self.first_edge not in (1, 2):
            raise ValueError("first_edge must be 1 or 2")
        if len(self.modification) != self.d or \
                not all(0 <= v < self.d for v in self.modification):
            raise ValueError("modification must be a map on Z_d")
        if len(self.selector) != self.d ** self.shots or \
                not all(e in (3, 4) for e in self.selector):
            raise ValueError("selector must map every first-layer view to e(3)/e(4)")
        if not self.klass.is_active and self.modification != _identity(self.d):
            raise ValueError("passive attacks must carry the identity modification")
        if not self.klass.is_adaptive and len(set(self.selector)) != 1:
            raise ValueError("deterministic attacks must have a constant selector")

    @property
    def fixed_second_edge(self) -> Optional[int]:
        return self.selector[0] if len(set(self.selector)) == 1 else None

    def view_index(self, view: tuple[int, ...]) -> int:
        idx = 0
        for v in view:
            idx = idx * self.d + v
        return idx

    def second_edge_for(self, view: tuple[int, ...]) -> int:
        return self.selector[self.view_index(view)]

    def to_json_dict(self) -> dict:
        out = {
            "class": self.klass.value,
            "first_edge": self.first_edge,
            "modification": list(self.modification),
        }
        fixed = self.fixed_second_edge
        if fixed is not None and not self.klass.is_adaptive:
            out["second_edge"] = fixed
        else:
            out["selector"] = list(self.selector)
        return out


def _constant_selector(d: int, shots: int, edge: int) -> tuple[int, ...]:
    return (edge,) * (d ** shots)


def _modifications(d: int, active: bool) -> Iterator[tuple[int, ...]]:
    if active:
        yield from product(range(d), repeat=d)
    else:
        yield _identity(d)


_ENUMERATION_CAP = 2_500_000


def enumerate_attacks(d: int, klass: AttackClass,
                      shots: int = 1) -> list[AttackStrategy]:
    """Complete, duplicate-free strategy list in canonical order.

    Canonical order is first_edge, then modification map, then selector,
    each lexicographic.  Counts for single-shot codes: 4 deterministic-
    passive, 2*2^d adaptive-passive, 4*d^d deterministic-active, and
    2*d^d*2^d adaptive-active.  Two-shot selectors range over all d^2
    first-layer views, so adaptive spaces grow to 2^(d^2) selectors.
    """
    if klass.is_active and d > 6:
        raise BudgetError("active modification space d^d is out of budget for d > 6")
    views = d ** shots
    mods = d ** d if klass.is_active else 1
    selectors = 2 ** views if klass.is_adaptive else 2
    total = 2 * mods * selectors
    if total > _ENUMERATION_CAP:
        raise BudgetError(
            f"{total} strategies exceed the enumeration budget; "
            "classification handles these spaces without materializing them")
    out = []
    for first_edge in (1, 2):
        for mod in _modifications(d, klass.is_active):
            if klass.is_adaptive:
                for sel in product((3, 4), repeat=views):
                    out.append(AttackStrategy(d, shots, klass, first_edge, mod, sel))
            else:
                for edge in (3, 4):
                    out.append(AttackStrategy(
                        d, shots, klass, first_edge, mod,
                        _constant_selector(d, shots, edge)))
    return out


# ---------------------------------------------------------------------------
# exact simulation

def _base_law(code: OneHopCode, first_edge: int,
              modification: Sequence[int]) -> tuple[dict, int]:
    """Exact joint weights of (M, view..., Y3, Y4, decoded) under an attack.

    The view holds Eve's true observations on her first-layer edge, one
    per shot.  The relay consumes the modified symbol in every shot.
    """
    pos = first_edge - 1
    weights: dict[tuple, int] = {}
    count = 0
    for key in code.encoder_inputs():
        m, scrambles = key[0], key[1:]
        first = code.first_layer_symbols(m, scrambles)
        view = tuple(first[2 * shot + pos] for shot in range(code.shots))
        relay_in = list(first)
        for shot in range(code.shots):
            relay_in[2 * shot + pos] = modification[first[2 * shot + pos]]
        relay_in = tuple(relay_in)
        for lp in code.relay_random_values():
            y3, y4 = code.relay_output(relay_in, lp)
            atom = (m,) + view + (y3, y4, code.decoder[(y3, y4)])
            weights[atom] = weights.get(atom, 0) + 1
            count += 1
    return weights, count


def _view_variable_names(shots: int) -> tuple[str, ...]:
    return ("Z1",) if shots == 1 else ("Z1A", "Z1B")


def simulate_attack(code: OneHopCode, strategy: AttackStrategy) -> JointDistribution:
    """Exact joint law of (M, Eve's view, decoder output) for one strategy."""
    if strategy.d != code.d or strategy.shots != code.shots:
        raise ValueError("strategy shape does not match the code")
    base, total = _base_law(code, strategy.first_edge, strategy.modification)
    weights: dict[tuple, int] = {}
    s = code.shots
    for atom, w in base.items():
        m, view, y3, y4, mhat = atom[0], atom[1:1 + s], atom[1 + s], atom[2 + s], atom[3 + s]
        z2 = y3 if strategy.second_edge_for(view) == 3 else y4
        k = (m,) + view + (z2, mhat)
        weights[k] = weights.get(k, 0) + w
    d = code.d
    variables = [("M", d)] + [(n, d) for n in _view_variable_names(s)] + \
        [("Z2", d), ("MHAT", d)]
    return JointDistribution.from_weights(variables, weights)


# ---------------------------------------------------------------------------
# exact weight-table predicates

def _independent_weights(weights: dict, total: int,
                         m_index: int, cond_indices: tuple[int, ...]) -> bool:
    """Exact independence of position m_index from the listed positions."""
    joint = _project(weights, (m_index,) + tuple(cond_indices))
    wm = _project(joint, (0,))
    wc = _project(joint, tuple(range(1, 1 + len(cond_indices))))
    for key, w in joint.items():
        if w * total != wm[(key[0],)] * wc[key[1:]]:
            return False
    return True


def _is_functional(weights: dict, m_index: int, cond_indices: tuple[int, ...]) -> bool:
    seen: dict[tuple, int] = {}
    for key in weights:
        kc = tuple(key[i] for i in cond_indices)
        prior = seen.setdefault(kc, key[m_index])
        if prior != key[m_index]:
            return False
    return True


def _mi_bits(weights: dict, total: int, m_index: int,
             view_indices: tuple[int, ...]) -> float:
    hm = _entropy_of_weights(_project(weights, (m_index,)), total)
    hv = _entropy_of_weights(_project(weights, view_indices), total)
    hmv = _entropy_of_weights(
        _project(weights, tuple(sorted((m_index,) + view_indices))), total)
    return hm + hv - hmv


@dataclass(frozen=True)
class SecurityVerdict:
    """Outcome of classifying one code against one attack class."""

    code_id: str
    klass: AttackClass
    level: SecurityLevel
    max_leakage_bits: float
    witness: AttackStrategy

    def to_json_dict(self) -> dict:
        return {
            "code_id": self.code_id,
            "class": self.klass.value,
            "level": self.level.value,
            "max_leakage_bits": self.max_leakage_bits,
            "witness": self.witness.to_json_dict(),
        }


def _classify_deterministic(code: OneHopCode, klass: AttackClass) -> SecurityVerdict:
    s = code.shots
    view_idx = tuple(range(1, 1 + s))
    best_leak = -1.0
    best_witness = None
    functional_witness = None
    all_independent = True
    for first_edge in (1, 2):
        for mod in _modifications(code.d, klass.is_active):
            base, total = _base_law(code, first_edge, mod)
            for edge in (3, 4):
                col = 1 + s if edge == 3 else 2 + s
                view = _project(base, (0,) + view_idx + (col,))
                idx = tuple(range(1, 2 + s))
                leak = _mi_bits(view, total, 0, idx)
                functional = _is_functional(view, 0, idx)
                if all_independent and not _independent_weights(view, total, 0, idx):
                    all_independent = False
                strategy = None
                if functional and functional_witness is None:
                    strategy = AttackStrategy(
                        code.d, s, klass, first_edge, mod,
                        _constant_selector(code.d, s, edge))
                    functional_witness = strategy
                if leak > best_leak + 1e-15:
                    if strategy is None:
                        strategy = AttackStrategy(
                            code.d, s, klass, first_edge, mod,
                            _constant_selector(code.d, s, edge))
                    best_leak = leak
                    best_witness = strategy
    if functional_witness is not None:
        level = SecurityLevel.INSECURE
    elif all_independent:
        level = SecurityLevel.PERFECT
    else:
        level = SecurityLevel.IMPERFECT
    return SecurityVerdict(code.name, klass, level, max(best_leak, 0.0), best_witness)


def _classify_adaptive(code: OneHopCode, klass: AttackClass) -> SecurityVerdict:
    """Exact classification over every adaptive selector.

    For a fixed tap edge and modification, the leakage of selector s is
    H(M) - sum_v P(v) H(M | V=v, W_s(v)), so the maximizing selector
    picks the second edge per view independently; ties prefer e(3),
    giving the first maximizer in canonical enumeration order.
    """
    d, s = code.d, code.shots
    views = list(product(range(d), repeat=s))
    best_leak = -1.0
    best_witness = None
    insecure_witness = None
    all_independent = True
    for first_edge in (1, 2):
        for mod in _modifications(d, klass.is_active):
            base, total = _base_law(code, first_edge, mod)
            # split by view; entries are (m, y3, y4) weights
            by_view: dict[tuple, dict] = {}
            for atom, w in base.items():
                v = atom[1:1 + s]
                slice_w = by_view.setdefault(v, {})
                k = (atom[0], atom[1 + s], atom[2 + s])
                slice_w[k] = slice_w.get(k, 0) + w
            if not _independent_weights(base, total, 0, tuple(range(1, 1 + s))):
                all_independent = False
            h_m = _entropy_of_weights(_project(base, (0,)), total)
            cond_sum = 0.0
            selector = [3] * (d ** s)
            recoverable_everywhere = True
            for v in views:
                slice_w = by_view.get(v)
                if slice_w is None:
                    continue  # unreachable view; selector entry stays e(3)
                slice_total = sum(slice_w.values())
                best_h = None
                best_edge = 3
                slice_can_recover = False
                for edge, col in ((3, 1), (4, 2)):
                    pair = _project(slice_w, (0, col))
                    h_mw = _entropy_of_weights(pair, slice_total)
                    h_w = _entropy_of_weights(_project(pair, (1,)), slice_total)
                    h = h_mw - h_w
                    if _is_functional(pair, 0, (1,)):
                        slice_can_recover = True
                    if all_independent and not _independent_weights(
                            pair, slice_total, 0, (1,)):
                        all_independent = False
                    if best_h is None or h < best_h - 1e-15:
                        best_h = h
                        best_edge = edge
                idx = 0
                for x in v:
                    idx = idx * d + x
                selector[idx] = best_edge
                cond_sum += (slice_total / total) * best_h
                if not slice_can_recover:
                    recoverable_everywhere = False
            leak = h_m - cond_sum
            if recoverable_everywhere and insecure_witness is None:
                insecure_witness = AttackStrategy(
                    d, s, klass, first_edge, mod, tuple(selector))
            if leak > best_leak + 1e-15:
                best_leak = leak
                best_witness = AttackStrategy(
                    d, s, klass, first_edge, mod, tuple(selector))
    if insecure_witness is not None:
        level = SecurityLevel.INSECURE
    elif all_independent:
        level = SecurityLevel.PERFECT
    else:
        level = SecurityLevel.IMPERFECT
    return SecurityVerdict(code.name, klass, level, max(best_leak, 0.0), best_witness)


def classify(code: OneHopCode, klass: AttackClass) -> SecurityVerdict:
    """Evaluate every strategy of the class and return the verdict.

    insecure: some strategy makes M a function of Eve's view (exact
    support test).  perfectly-secret: every strategy's view is exactly
    independent of M.  imperfectly-secret: everything else.  The witness
    is the first maximum-leakage strategy in canonical order.
    """
    if klass.is_adaptive:
        return _classify_adaptive(code, klass)
    return _classify_deterministic(code, klass)


# ---------------------------------------------------------------------------
# Table reproduction

TABLE_COLUMNS = ("deterministic-passive", "active", "adaptive")

_COLUMN_CLASS = {
    "deterministic-passive": AttackClass.DETERMINISTIC_PASSIVE,
    "active": AttackClass.DETERMINISTIC_ACTIVE,
    "adaptive": AttackClass.ADAPTIVE_ACTIVE,
}


@dataclass(frozen=True)
class TableRow:
    family: str
    d: int
    cells: dict[str, SecurityLevel]


@dataclass(frozen=True)
class ClassificationTable:
    rows: tuple[TableRow, ...]

    def to_json_dict(self) -> dict:
        return {"columns": list(TABLE_COLUMNS),
                "rows": [{"family": r.family, "d": r.d,
                          "cells": {c: r.cells[c].value for c in TABLE_COLUMNS}}
                         for r in self.rows]}

    def to_csv(self) -> str:
        lines = ["family,d," + ",".join(TABLE_COLUMNS)]
        for r in self.rows:
            lines.append(",".join(
                [r.family, str(r.d)] + [r.cells[c].value for c in TABLE_COLUMNS]))
        return "\n".join(lines) + "\n"

    def to_text(self) -> str:
        headers = ["code family", "d"] + list(TABLE_COLUMNS)
        body = [[r.family, str(r.d)] + [r.cells[c].value for c in TABLE_COLUMNS]
                for r in self.rows]
        widths = [max(len(row[i]) for row in [headers] + body)
                  for i in range(len(headers))]
        fmt = "  ".join(f"{{:<{w}}}" for w in widths)
        lines = [fmt.format(*headers), fmt.format(*["-" * w for w in widths])]
        lines += [fmt.format(*row) for row in body]
        return "\n".join(lines) + "\n"


def _affine_relay_code(d: int, params: tuple[int, ...]) -> Optional[OneHopCode]:
    """Standard encoder plus the affine relay given by six coefficients.

    Returns None when the message is not recoverable from (Y3, Y4).
    """
    p, q, s0, t, u, w0 = params
    encoder = {(m, l): ((l, (m + l) % d),) for m, l in product(range(d), repeat=2)}
    relay = {(y1, y2): ((p * y1 + q * y2 + s0) % d, (t * y1 + u * y2 + w0) % d)
             for y1, y2 in product(range(d), repeat=2)}
    support: dict[tuple[int, int], int] = {}
    for m, l in product(range(d), repeat=2):
        y34 = relay[(l, (m + l) % d)]
        prior = support.setdefault(y34, m)
        if prior != m:
            return None
    decoder = {k: support.get(k, 0) for k in product(range(d), repeat=2)}
    return OneHopCode(d, 1, 1, False, encoder, relay, decoder,
                      name=f"scalar-affine-{'-'.join(map(str, params))}")


def _scalar_linear_row(d: int) -> dict[str, SecurityLevel]:
    """Family-best level per column over all correct affine-relay codes.

    A code insecure under deterministic-passive attacks stays insecure
    under every superset class, so only codes that beat insecurity in
    the first column need evaluation under the larger classes.
    """
    survivors = []
    best = {c: SecurityLevel.INSECURE for c in TABLE_COLUMNS}
    found_any = False
    for params in product(range(d), repeat=6):
        code = _affine_relay_code(d, params)
        if code is None:
            continue
        found_any = True
        verdict = classify(code, AttackClass.DETERMINISTIC_PASSIVE)
        if verdict.level is not SecurityLevel.INSECURE:
            survivors.append((code, verdict.level))
    if not found_any:
        raise RuntimeError("no correct affine relay exists; encoder sweep bug")
    for code, det_level in survivors:
        if _LEVEL_RANK[det_level] > _LEVEL_RANK[best["deterministic-passive"]]:
            best["deterministic-passive"] = det_level
        for column in ("active", "adaptive"):
            level = classify(code, _COLUMN_CLASS[column]).level
            if _LEVEL_RANK[level] > _LEVEL_RANK[best[column]]:
                best[column] = level
    return best


def _code_row(code: OneHopCode) -> dict[str, SecurityLevel]:
    return {c: classify(code, _COLUMN_CLASS[c]).level for c in TABLE_COLUMNS}


def classification_table(d_list: Sequence[int]) -> ClassificationTable:
    """Security level grid for the one-hop code families, per alphabet size.

    Rows are the single-shot no-relay-randomness setting: the scalar-
    linear family (exhausted over affine relay tables), the standard
    non-linear code at d=2, an anti-Latin code for d>2, and the two-shot
    vector-linear code.  Columns map to deterministic-passive,
    deterministic-active, and adaptive-active attacks.
    """
    rows = []
    for d in d_list:
        rows.append(TableRow("scalar-linear", d, _scalar_linear_row(d)))
        if d == 2:
            rows.append(TableRow("standard-nonlinear", d,
                                 _code_row(standard_nonlinear_code(2))))
        if d > 2:
            if d in (3, 4):
                pair = reference_decodable_pair(d)
            else:
                result = find_decodable_pair(d)
                if not result.found:
                    raise BudgetError(f"no decodable pair found for d={d}")
                pair = result.pair
            rows.append(TableRow("anti-latin", d, _code_row(anti_latin_code(*pair))))
        rows.append(TableRow("vector-linear", d, _code_row(vector_linear_code(d))))
    return ClassificationTable(tuple(rows))


_I = SecurityLevel.INSECURE
_S = SecurityLevel.IMPERFECT
_P = SecurityLevel.PERFECT

# expected grid: scalar-linear insecure everywhere; standard non-linear
# imperfect only against deterministic-passive; anti-Latin imperfect
# everywhere; vector-linear perfect everywhere
TABLE1_EXPECTED = {
    "scalar-linear": (_I, _I, _I),
    "standard-nonlinear": (_S, _I, _I),
    "anti-latin": (_S, _S, _S),
    "vector-linear": (_P, _P, _P),
}


def table_mismatches(table: ClassificationTable) -> list[str]:
    """Cells that disagree with the expected summary grid."""
    out = []
    for row in table.rows:
        expected = TABLE1_EXPECTED[row.family]
        for column, want in zip(TABLE_COLUMNS, expected):
            got = row.cells[column]
            if got is not want:
                out.append(f"{row.family} d={row.d} {column}: "
                           f"expected {want.value}, got {got.value}")
    return out


# ---------------------------------------------------------------------------
# exhaustive sweeps

@dataclass(frozen=True)
class NonexistenceReport:
    """Outcome of sweeping every correct d=2 code against one attack class."""

    klass: AttackClass
    total_codes: int
    level_counts: dict[SecurityLevel, int]
    counterexamples: tuple[str, ...]          # names of non-insecure codes
    witnesses: dict[str, AttackStrategy]      # per-code insecurity witnesses

    @property
    def all_insecure(self) -> bool:
        return not self.counterexamples


def exhaustive_nonexistence_check(
        d: int = 2,
        klass: AttackClass = AttackClass.ADAPTIVE_PASSIVE) -> NonexistenceReport:
    """Classify every correct no-relay-randomness code over Z_2.

    Against adaptive attacks the sweep is expected to find no code that
    avoids full message recovery; the report carries any counterexamples
    and a per-code insecurity witness.
    """
    if d != 2:
        raise ValueError("the exhaustive sweep is defined for d=2")
    counts = {level: 0 for level in SecurityLevel}
    counterexamples = []
    witnesses = {}
    total = 0
    for code in enumerate_onehop_codes(2):
        total += 1
        verdict = classify(code, klass)
        counts[verdict.level] += 1
        if verdict.level is SecurityLevel.INSECURE:
            witnesses[code.name] = verdict.witness
        else:
            counterexamples.append(code.name)
    return NonexistenceReport(klass, total, counts, tuple(counterexamples), witnesses)


@dataclass(frozen=True)
class ScalarLinearSweepReport:
    d: int
    encoders_examined: int
    pairs_examined: int
    correct_codes: int
    insecure: int
    imperfect: int
    perfect: int

    @property
    def all_insecure(self) -> bool:
        return self.imperfect == 0 and self.perfect == 0


def exhaustive_scalar_linear_check(d: int) -> ScalarLinearSweepReport:
    """Sweep every affine encoder x affine relay pair under passive taps.

    A code is correct when M is recoverable from (Y3, Y4); it is counted
    insecure when one of the four deterministic-passive views determines
    M exactly.  Encoders that already lose M in (Y1, Y2) cannot be
    correct and are pruned up front.
    """
    if d > 3:
        raise BudgetError("the d^12 affine sweep is out of budget for d > 3")
    atoms = list(product(range(d), repeat=2))
    encoders = []
    encoders_examined = 0
    for a, b, e, c, f, g in product(range(d), repeat=6):
        encoders_examined += 1
        table = tuple(((a * m + b * l + e) % d, (c * m + f * l + g) % d)
                      for m, l in atoms)
        support: dict[tuple[int, int], int] = {}
        ok = True
        for (m, _), y12 in zip(atoms, table):
            prior = support.setdefault(y12, m)
            if prior != m:
                ok = False
                break
        if ok:
            encoders.append(table)
    relays = [tuple(((p * y1 + q * y2 + s0) % d, (t * y1 + u * y2 + w0) % d)
                    for y1, y2 in product(range(d), repeat=2))
              for p, q, s0, t, u, w0 in product(range(d), repeat=6)]
    relay_index = {pair: i for i, pair in enumerate(product(range(d), repeat=2))}

    pairs = 0
    correct = insecure = imperfect = perfect = 0
    for enc in encoders:
        for rel in relays:
            pairs += 1
            y34 = tuple(rel[relay_index[y12]] for y12 in enc)
            support = {}
            ok = True
            for (m, _), out in zip(atoms, y34):
                prior = support.setdefault(out, m)
                if prior != m:
                    ok = False
                    break
            if not ok:
                continue
            correct += 1
            # deterministic-passive views: (Y_i, Y_j) for i in 1,2; j in 3,4
            recovered = False
            saw_dependence = False
            for i in (0, 1):
                for j in (0, 1):
                    seen: dict[tuple[int, int], int] = {}
                    functional = True
                    for (m, _), y12, out in zip(atoms, enc, y34):
                        key = (y12[i], out[j])
                        prior = seen.setdefault(key, m)
                        if prior != m:
                            functional = False
                    if functional:
                        recovered = True
                        break
                    counts: dict[tuple[int, int, int], int] = {}
                    for (m, _), y12, out in zip(atoms, enc, y34):
                        k = (m, y12[i], out[j])
                        counts[k] = counts.get(k, 0) + 1
                    view_counts: dict[tuple[int, int], int] = {}
                    m_counts: dict[int, int] = {}
                    for (m, v1, v2), w in counts.items():
                        view_counts[(v1, v2)] = view_counts.get((v1, v2), 0) + w
                        m_counts[m] = m_counts.get(m, 0) + w
                    for (m, v1, v2), w in counts.items():
                        if w * len(atoms) != m_counts[m] * view_counts[(v1, v2)]:
                            saw_dependence = True
                            break
                if recovered:
                    break
            if recovered:
                insecure += 1
            elif saw_dependence:
                imperfect += 1
            else:
                perfect += 1
    return ScalarLinearSweepReport(d, encoders_examined, pairs, correct,
                                   insecure, imperfect, perfect)


# ---------------------------------------------------------------------------
# linear codes neutralize active attacks (checked, not proved)

def _is_affine_table(table: dict, d: int, arity: int, out_arity: int) -> bool:
    """True iff the table equals a matrix-plus-offset map over Z_d."""
    zero = (0,) * arity
    offset = table[zero]
    offset = offset if isinstance(offset, tuple) else (offset,)
    columns = []
    for pos in range(arity):
        unit = tuple(1 if i == pos else 0 for i in range(arity))
        val = table[unit]
        val = val if isinstance(val, tuple) else (val,)
        columns.append(tuple((val[o] - offset[o]) % d for o in range(out_arity)))
    for key, val in table.items():
        val = val if isinstance(val, tuple) else (val,)
        for o in range(out_arity):
            acc = offset[o]
            for pos in range(arity):
                acc += key[pos] * columns[pos][o]
            if acc % d != val[o]:
                return False
    return True


def code_is_affine(code: OneHopCode) -> bool:
    enc_flat = {k: tuple(v for pair in out for v in pair)
                for k, out in code.encoder.items()}
    if not _is_affine_table(enc_flat, code.d, 1 + code.scramble_count, 2 * code.shots):
        return False
    relay_arity = 2 * code.shots + (1 if code.relay_randomness else 0)
    return _is_affine_table(dict(code.relay), code.d, relay_arity, 2)


def linear_active_reduction_check(code: OneHopCode) -> bool:
    """Empirical check that active attacks add nothing against affine codes.

    For every tap pair and every substitution map, Eve's active view must
    match the passive view on the same edges after a shift she can
    compute from her own first observation.  Verified by exact joint-law
    comparison over all candidate shifts; non-affine codes are rejected.
    """
    if not code_is_affine(code):
        raise ValueError("code tables are not affine over Z_d")
    d, s = code.d, code.shots
    view_positions = tuple(range(1, 1 + s))
    for first_edge in (1, 2):
        passive, total = _base_law(code, first_edge, _identity(d))
        passive_views = {}
        for edge_col in (1 + s, 2 + s):
            by_v: dict[tuple, dict] = {}
            for atom, w in passive.items():
                v = atom[1:1 + s]
                k = (atom[0], atom[edge_col])
                slot = by_v.setdefault(v, {})
                slot[k] = slot.get(k, 0) + w
            passive_views[edge_col] = by_v
        for mod in product(range(d), repeat=d):
            active, _ = _base_law(code, first_edge, mod)
            for edge_col in (1 + s, 2 + s):
                by_v: dict[tuple, dict] = {}
                for atom, w in active.items():
                    v = atom[1:1 + s]
                    k = (atom[0], atom[edge_col])
                    slot = by_v.setdefault(v, {})
                    slot[k] = slot.get(k, 0) + w
                for v, active_slice in by_v.items():
                    passive_slice = passive_views[edge_col][v]
                    if not any(
                            all(passive_slice.get((m, (w2 - delta) % d), 0) == wt
                                for (m, w2), wt in active_slice.items())
                            and sum(active_slice.values()) == sum(passive_slice.values())
                            for delta in range(d)):
                        return False
    return True


# ---------------------------------------------------------------------------
# extended two-shot mode: per-shot edge re-selection

def check_extended_two_shot_secrecy(code: OneHopCode) -> bool:
    """Perfect secrecy when Eve may re-select her first-layer edge per shot.

    Covers every adaptive-active strategy of the extended mode exactly by
    conditioning: the shot-2 edge choice, both substituted values, and
    the second-layer choice may each depend on everything Eve saw before,
    so it suffices that M stays exactly independent at every stage for
    every fixed choice and every substituted constant.
    """
    if code.shots != 2:
        raise ValueError("extended mode applies to two-shot codes")
    d = code.d
    atoms = []
    for key in code.encoder_inputs():
        m, scrambles = key[0], key[1:]
        atoms.append((m, code.first_layer_symbols(m, scrambles)))

    def independent(pairs: Iterable[tuple[int, int]]) -> bool:
        weights: dict[tuple[int, int], int] = {}
        for k in pairs:
            weights[k] = weights.get(k, 0) + 1
        total = sum(weights.values())
        wm = _project(weights, (0,))
        wv = _project(weights, (1,))
        return all(w * total == wm[(m,)] * wv[(v,)]
                   for (m, v), w in weights.items())

    for i1 in (1, 2):
        p1 = i1 - 1
        if not independent((m, first[p1]) for m, first in atoms):
            return False
        for i2 in (1, 2):
            p2 = 2 + i2 - 1
            for a in range(d):
                slice_a = [(m, first) for m, first in atoms if first[p1] == a]
                if not slice_a:
                    continue
                if not independent((m, first[p2]) for m, first in slice_a):
                    return False
                for a2 in range(d):
                    slice_a2 = [(m, first) for m, first in slice_a
                                if first[p2] == a2]
                    if not slice_a2:
                        continue
                    for x1, x2 in product(range(d), repeat=2):
                        outs = []
                        for m, first in slice_a2:
                            relay_in = list(first)
                            relay_in[p1] = x1
                            relay_in[p2] = x2
                            for lp in code.relay_random_values():
                                y34 = code.relay_output(tuple(relay_in), lp)
                                outs.append((m, y34))
                        for col in (0, 1):
                            if not independent((m, y34[col]) for m, y34 in outs):
                                return False
    return True

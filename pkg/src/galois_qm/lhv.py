"""Two-party correlation tables and local hidden-variable analysis.

A :class:`BipartiteTable` gives, for every pair of settings ``(a, b)``, the
joint probabilities of the outcomes ``++, +-, -+, --``.  The feasibility
oracle decides exactly (rational arithmetic) whether the table is a convex
mixture of deterministic local strategies.  The Hardy-style checker reaches
a no-go verdict by a separate route: it propagates the values forced by
zero-probability cells and lists positive-probability outcomes that no
surviving deterministic assignment can produce.
"""

from __future__ import annotations

import itertools
import json
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Mapping, Sequence

from . import limits
from .probability import OutcomeDistribution, frac_str, parse_frac
from .simplex import feasible_point

OUTCOMES = ("++", "+-", "-+", "--")
_SIGN = {"+": 1, "-": -1}
_CELL_KEYS = ("p_pp", "p_pm", "p_mp", "p_mm")


def _pair(outcome: str) -> tuple[int, int]:
    return _SIGN[outcome[0]], _SIGN[outcome[1]]


def _label(s: int) -> str:
    return "+1" if s > 0 else "-1"


@dataclass(frozen=True)
class BipartiteTable:
    settings_a: tuple[str, ...]
    settings_b: tuple[str, ...]
    cells: Mapping[tuple[str, str], tuple[Fraction, Fraction, Fraction, Fraction]]

    def __post_init__(self):
        if len(set(self.settings_a)) != len(self.settings_a) or len(set(self.settings_b)) != len(self.settings_b):
            raise ValueError("setting labels must be unique per party")
        for a in self.settings_a:
            for b in self.settings_b:
                if (a, b) not in self.cells:
                    raise ValueError(f"missing cell ({a}, {b})")
                probs = self.cells[(a, b)]
                if len(probs) != 4:
                    raise ValueError(f"cell ({a}, {b}) must have 4 probabilities")
                if any(p < 0 for p in probs):
                    raise ValueError(f"cell ({a}, {b}) has a negative probability")
                if sum(probs) != 1:
                    raise ValueError(f"cell ({a}, {b}) sums to {sum(probs)}, not 1")
        extra = set(self.cells) - {(a, b) for a in self.settings_a for b in self.settings_b}
        if extra:
            raise ValueError(f"cells for unknown settings: {sorted(extra)}")

    def prob(self, a: str, b: str, outcome: str) -> Fraction:
        return self.cells[(a, b)][OUTCOMES.index(outcome)]

    def distribution(self, a: str, b: str) -> OutcomeDistribution:
        return OutcomeDistribution(tuple(
            (_pair(o), p) for o, p in zip(OUTCOMES, self.cells[(a, b)])
        ))

    def correlator(self, a: str, b: str) -> Fraction:
        pp, pm, mp, mm = self.cells[(a, b)]
        return pp - pm - mp + mm


def make_table(settings_a: Sequence[str], settings_b: Sequence[str], cells: Mapping) -> BipartiteTable:
    """Convenience constructor accepting ints/strings/Fractions for probabilities."""
    fixed = {}
    for key, probs in cells.items():
        fixed[tuple(key)] = tuple(p if isinstance(p, Fraction) else parse_frac(str(p)) for p in probs)
    return BipartiteTable(tuple(settings_a), tuple(settings_b), fixed)


# -- CHSH --------------------------------------------------------------------

def chsh_functional(table: BipartiteTable, a: str, a2: str, b: str, b2: str) -> Fraction:
    """|P(a,b) + P(a,b') + P(a',b) - P(a',b')|."""
    for s in (a, a2):
        if s not in table.settings_a:
            raise KeyError(f"unknown setting {s!r} for party A")
    for s in (b, b2):
        if s not in table.settings_b:
            raise KeyError(f"unknown setting {s!r} for party B")
    c = table.correlator
    return abs(c(a, b) + c(a, b2) + c(a2, b) - c(a2, b2))


def chsh_all_signs(table: BipartiteTable, a: str, a2: str, b: str, b2: str) -> Fraction:
    """Max over the 8 placements of one minus sign and an overall sign."""
    terms = [table.correlator(x, y) for x, y in ((a, b), (a, b2), (a2, b), (a2, b2))]
    best = Fraction(0)
    for minus in range(4):
        s = sum((-t if k == minus else t for k, t in enumerate(terms)), Fraction(0))
        best = max(best, s, -s)
    return best


def chsh_table_max(table: BipartiteTable) -> Fraction:
    """Max of the CHSH functional over all setting quadruples of the table."""
    best = Fraction(0)
    for a, a2 in itertools.product(table.settings_a, repeat=2):
        for b, b2 in itertools.product(table.settings_b, repeat=2):
            best = max(best, chsh_functional(table, a, a2, b, b2))
    return best


# -- feasibility oracle ---------------------------------------------------------

@dataclass(frozen=True)
class DeterministicStrategy:
    """A fixed +-1 answer for every setting of each party."""

    values_a: tuple[int, ...]
    values_b: tuple[int, ...]

    def outcome(self, table: BipartiteTable, a: str, b: str) -> str:
        s = self.values_a[table.settings_a.index(a)]
        t = self.values_b[table.settings_b.index(b)]
        return ("+" if s > 0 else "-") + ("+" if t > 0 else "-")

    def describe(self, table: BipartiteTable) -> str:
        parts = [f"{a}1={_label(v)}" for a, v in zip(table.settings_a, self.values_a)]
        parts += [f"{b}2={_label(v)}" for b, v in zip(table.settings_b, self.values_b)]
        return " ".join(parts)


def strategies(table: BipartiteTable) -> list[DeterministicStrategy]:
    na, nb = len(table.settings_a), len(table.settings_b)
    limits.check("GALOIS_QM_MAX_LHV_SETTINGS", na + nb, "total number of settings")
    return [
        DeterministicStrategy(vals[:na], vals[na:])
        for vals in itertools.product((1, -1), repeat=na + nb)
    ]


@dataclass
class BellCertificate:
    """Inequality sum coeff * P(a,b,outcome) <= bound, valid for every local model."""

    coefficients: dict[tuple[str, str, str], Fraction]
    bound: Fraction
    table_value: Fraction

    def describe(self) -> str:
        terms = []
        for (a, b, o), c in self.coefficients.items():
            sign = "-" if c < 0 else "+"
            mag = abs(c)
            coef = "" if mag == 1 else f"{frac_str(mag)}*"
            terms.append(f"{sign} {coef}P({a}{b};{o})")
        lhs = " ".join(terms).lstrip("+ ") or "0"
        return f"{lhs} <= {frac_str(self.bound)}, but the table gives {frac_str(self.table_value)}"


@dataclass
class FeasibilityResult:
    feasible: bool
    weights: dict[DeterministicStrategy, Fraction] = field(default_factory=dict)
    certificate: BellCertificate | None = None


def _constraint_rows(table: BipartiteTable, strats: list[DeterministicStrategy]):
    rows, rhs, labels = [], [], []
    for a in table.settings_a:
        for b in table.settings_b:
            for o in OUTCOMES:
                rows.append([Fraction(int(s.outcome(table, a, b) == o)) for s in strats])
                rhs.append(table.prob(a, b, o))
                labels.append((a, b, o))
    return rows, rhs, labels


def lhv_feasible(table: BipartiteTable) -> FeasibilityResult:
    """Decide whether the table is a mixture of deterministic local strategies."""
    strats = strategies(table)
    rows, rhs, labels = _constraint_rows(table, strats)
    res = feasible_point(rows, rhs)
    if res.feasible:
        weights = {s: w for s, w in zip(strats, res.x) if w}
        return FeasibilityResult(True, weights)
    coeffs = {lab: y for lab, y in zip(labels, res.farkas) if y}
    value = sum((y * r for y, r in zip(res.farkas, rhs)), Fraction(0))
    return FeasibilityResult(False, certificate=BellCertificate(coeffs, Fraction(0), value))


def recompose(table: BipartiteTable, weights: Mapping[DeterministicStrategy, Fraction]) -> BipartiteTable:
    """The table produced by a weighted mixture of deterministic strategies."""
    cells = {}
    for a in table.settings_a:
        for b in table.settings_b:
            probs = dict.fromkeys(OUTCOMES, Fraction(0))
            for s, w in weights.items():
                probs[s.outcome(table, a, b)] += w
            cells[(a, b)] = tuple(probs[o] for o in OUTCOMES)
    return BipartiteTable(table.settings_a, table.settings_b, cells)


def certificate_holds(table: BipartiteTable, cert: BellCertificate) -> bool:
    """Check the certificate: every strategy respects the bound, the table violates it."""
    def value(prob):
        return sum((c * prob(a, b, o) for (a, b, o), c in cert.coefficients.items()), Fraction(0))
    for s in strategies(table):
        if value(lambda a, b, o: Fraction(int(s.outcome(table, a, b) == o))) > cert.bound:
            return False
    return value(table.prob) > cert.bound


# -- no-signaling ---------------------------------------------------------------------

@dataclass
class MarginalCheck:
    party: str
    setting: str
    marginals: dict[str, Fraction]  # partner setting -> P(outcome +1)
    consistent: bool


@dataclass
class SignalingReport:
    passed: bool
    checks: list[MarginalCheck]


def no_signaling_check(table: BipartiteTable) -> SignalingReport:
    checks = []
    for a in table.settings_a:
        marg = {b: table.prob(a, b, "++") + table.prob(a, b, "+-") for b in table.settings_b}
        checks.append(MarginalCheck("A", a, marg, len(set(marg.values())) == 1))
    for b in table.settings_b:
        marg = {a: table.prob(a, b, "++") + table.prob(a, b, "-+") for a in table.settings_a}
        checks.append(MarginalCheck("B", b, marg, len(set(marg.values())) == 1))
    return SignalingReport(all(c.consistent for c in checks), checks)


# -- Hardy-style implication chain ---------------------------------------------------------

@dataclass
class ExcludedOutcome:
    a: str
    b: str
    outcome: str
    probability: Fraction

    def describe(self) -> str:
        return f"({self.a}1 {self.b}2) = ({self.outcome}) has probability {frac_str(self.probability)}"


@dataclass
class HardyResult:
    closes: bool
    transcript: list[str]
    consistent: list[DeterministicStrategy]
    excluded: list[ExcludedOutcome]


def _var_name(var: tuple[str, str]) -> str:
    party, setting = var
    return f"{setting}{1 if party == 'A' else 2}"


def hardy_chain_check(table: BipartiteTable) -> HardyResult:
    """Propagate zero-probability cells from each value of the first A setting.

    A zero cell ``P(a,b;st) = 0`` forbids ``A_a = s`` together with
    ``B_b = t``, so fixing one side forces the other.  After propagation the
    remaining free variables are enumerated.  The chain *closes* when some
    outcome of positive probability is produced by none of the surviving
    deterministic assignments; that alone rules out any local model.
    """
    strategies(table)  # size guard
    zeros = []
    for a in table.settings_a:
        for b in table.settings_b:
            for o in OUTCOMES:
                if table.prob(a, b, o) == 0:
                    s, t = _pair(o)
                    zeros.append((("A", a), s, ("B", b), t, f"P({a}1{b}2;{o})=0"))
    variables = [("A", a) for a in table.settings_a] + [("B", b) for b in table.settings_b]
    root = variables[0]
    transcript: list[str] = []
    consistent: list[DeterministicStrategy] = []

    for root_val in (1, -1):
        assign = {root: root_val}
        queue = [root]
        steps = []
        contradiction = None
        while queue and contradiction is None:
            var = queue.pop(0)
            val = assign[var]
            for va, s, vb, t, why in zeros:
                for mine, my_val, other, other_val in ((va, s, vb, t), (vb, t, va, s)):
                    if mine != var or val != my_val:
                        continue
                    forced = -other_val
                    if other not in assign:
                        assign[other] = forced
                        queue.append(other)
                        steps.append(f"{_var_name(var)}={_label(val)} -> {_var_name(other)}={_label(forced)}  [{why}]")
                    elif assign[other] != forced:
                        contradiction = f"{_var_name(other)} forced both ways  [{why}]"
        head = f"branch {_var_name(root)}={_label(root_val)}:"
        transcript.append(head)
        transcript.extend("  " + s for s in steps)
        if contradiction:
            transcript.append("  contradiction: " + contradiction)
            continue
        free = [v for v in variables if v not in assign]
        survivors = 0
        for vals in itertools.product((1, -1), repeat=len(free)):
            full = dict(assign)
            full.update(zip(free, vals))
            if any(full[va] == s and full[vb] == t for va, s, vb, t, _ in zeros):
                continue
            survivors += 1
            consistent.append(DeterministicStrategy(
                tuple(full[("A", a)] for a in table.settings_a),
                tuple(full[("B", b)] for b in table.settings_b),
            ))
        chain = ", ".join(f"{_var_name(v)}={_label(assign[v])}" for v in assign)
        transcript.append(f"  forced: {chain}")
        if free:
            transcript.append(f"  free: {', '.join(_var_name(v) for v in free)}; {survivors} completion(s) survive")

    realized = {(a, b, s.outcome(table, a, b)) for s in consistent
                for a in table.settings_a for b in table.settings_b}
    excluded = [
        ExcludedOutcome(a, b, o, table.prob(a, b, o))
        for a in table.settings_a for b in table.settings_b for o in OUTCOMES
        if table.prob(a, b, o) > 0 and (a, b, o) not in realized
    ]
    for e in excluded:
        transcript.append("excluded classically: " + e.describe())
    return HardyResult(bool(excluded), transcript, consistent, excluded)


# -- serialization -----------------------------------------------------------------------------

class TableFormatError(ValueError):
    pass


def table_to_document(table: BipartiteTable) -> dict:
    return {
        "settings_a": list(table.settings_a),
        "settings_b": list(table.settings_b),
        "cells": [
            {"a": a, "b": b, **{k: frac_str(p) for k, p in zip(_CELL_KEYS, table.cells[(a, b)])}}
            for a in table.settings_a for b in table.settings_b
        ],
    }


def dumps_table(table: BipartiteTable) -> str:
    return json.dumps(table_to_document(table), indent=2) + "\n"


def table_from_document(doc) -> BipartiteTable:
    if not isinstance(doc, dict):
        raise TableFormatError("top level: expected an object")
    for key in ("settings_a", "settings_b", "cells"):
        if key not in doc:
            raise TableFormatError(f"{key}: missing field")
    settings = {}
    for key in ("settings_a", "settings_b"):
        val = doc[key]
        if not isinstance(val, list) or not all(isinstance(s, str) for s in val) or not val:
            raise TableFormatError(f"{key}: expected a nonempty list of strings")
        settings[key] = tuple(val)
    if not isinstance(doc["cells"], list):
        raise TableFormatError("cells: expected a list")
    cells = {}
    for k, cell in enumerate(doc["cells"]):
        where = f"cells[{k}]"
        if not isinstance(cell, dict):
            raise TableFormatError(f"{where}: expected an object")
        for key in ("a", "b") + _CELL_KEYS:
            if key not in cell:
                raise TableFormatError(f"{where}.{key}: missing field")
        probs = []
        for key in _CELL_KEYS:
            raw = cell[key]
            try:
                if not isinstance(raw, str):
                    raise ValueError
                probs.append(parse_frac(raw))
            except (ValueError, ZeroDivisionError):
                raise TableFormatError(f"{where}.{key}: expected a \"num/den\" string, got {raw!r}") from None
        if any(x < 0 for x in probs):
            raise TableFormatError(f"{where}: negative probability")
        if sum(probs) != 1:
            raise TableFormatError(f"{where}: probabilities sum to {frac_str(sum(probs))}, not 1")
        pair = (cell["a"], cell["b"])
        if pair in cells:
            raise TableFormatError(f"{where}: duplicate cell {pair}")
        cells[pair] = tuple(probs)
    try:
        return BipartiteTable(settings["settings_a"], settings["settings_b"], cells)
    except ValueError as exc:
        raise TableFormatError(f"cells: {exc}") from None


def loads_table(text: str) -> BipartiteTable:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise TableFormatError(f"line {exc.lineno}, column {exc.colno}: {exc.msg}") from None
    return table_from_document(doc)


# -- preset and bridged tables -------------------------------------------------------------------

def pr_box_table() -> BipartiteTable:
    """Perfect correlation except anticorrelation on the (a', b') pair."""
    h, z = Fraction(1, 2), Fraction(0)
    same, opposite = (h, z, z, h), (z, h, h, z)
    cells = {(a, b): opposite if (a, b) == ("a1", "b1") else same
             for a in ("a0", "a1") for b in ("b0", "b1")}
    return BipartiteTable(("a0", "a1"), ("b0", "b1"), cells)


def independent_table() -> BipartiteTable:
    """Two independent fair coins for every setting pair."""
    q = Fraction(1, 4)
    cells = {(a, b): (q, q, q, q) for a in ("a0", "a1") for b in ("b0", "b1")}
    return BipartiteTable(("a0", "a1"), ("b0", "b1"), cells)


def table_from_observables(psi, settings_a: Mapping, settings_b: Mapping) -> BipartiteTable:
    """Evaluate a two-particle state of the probability model on every setting pair.

    ``settings_a`` / ``settings_b`` map labels to spin observables.
    """
    from .gqm import JOINT_LABELS, ProductObservable, measure
    cells = {}
    for a, obs_a in settings_a.items():
        for b, obs_b in settings_b.items():
            dist = measure(ProductObservable(obs_a, obs_b), psi)
            cells[(a, b)] = tuple(dist[lab] for lab in JOINT_LABELS)
    return BipartiteTable(tuple(settings_a), tuple(settings_b), cells)


def gqm_singlet_xy_table(spec=None) -> BipartiteTable:
    """Singlet table for X = A_01 and Y = A_02 on both particles (q = 3 by default)."""
    from .field import field_new
    from .gqm import singlet, spin_observable
    spec = spec or field_new(3)
    obs = {"X": spin_observable(spec, 0, 1), "Y": spin_observable(spec, 0, 2)}
    return table_from_observables(singlet(spec), obs, obs)


class IndeterminateTableError(ValueError):
    """The expectation-value model fixes constraints, not a probability table."""

    def __init__(self, constraints: dict):
        self.constraints = constraints
        super().__init__("the expectation-value model does not predict joint probabilities; "
                         "see .constraints for what each setting pair implies")


def table_from_bqm(psi, settings_a: Mapping, settings_b: Mapping):
    """Always refuses, attaching the probability constraints for every setting pair."""
    from .bqm import kronecker, probability_constraints
    constraints = {
        (a, b): probability_constraints(psi, kronecker(op_a, op_b))
        for a, op_a in settings_a.items() for b, op_b in settings_b.items()
    }
    raise IndeterminateTableError(constraints)

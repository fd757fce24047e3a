"""Command-line interface: ``galois-qm <command> [options]``.

Exit codes: 0 success, 1 usage error, 2 size-guard refusal, 3 internal
invariant failure.
"""

from __future__ import annotations

import argparse
import shlex
import sys
from fractions import Fraction

from . import bqm, gqm, lhv
from .field import field_new, field_of_order, format_element
from .limits import GuardError, limit
from .probability import frac_str
from .projective import canonicalize, canonicalize_matrix, enumerate_pgl
from .report import FORMATS, RunReport, render

PUBLISHED = "published"
DERIVED = "derived"


class UsageError(Exception):
    pass


class InvariantError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.prog}: {message}")


def _ensure(cond: bool, what: str) -> None:
    if not cond:
        raise InvariantError(what)


def _vec(v, signed=True) -> str:
    return "(" + ", ".join(format_element(x, signed) for x in v) + ")"


def _row(v, signed=True) -> str:
    return "[" + " ".join(format_element(x, signed) for x in v) + "]"


def _mat(m) -> str:
    return "[" + "; ".join(" ".join(format_element(x, True) for x in r) for r in m.rows) + "]"


def _field_for_q(q: int):
    try:
        return field_of_order(q)
    except ValueError as exc:
        raise UsageError(str(exc)) from None


def _bqm_field(p: int):
    try:
        return bqm.bqm_field(p)
    except ValueError as exc:
        raise UsageError(str(exc)) from None


def _poly(coeffs) -> str:
    terms = []
    for k in range(len(coeffs) - 1, -1, -1):
        c = coeffs[k]
        if not c:
            continue
        mono = "" if k == 0 else "x" if k == 1 else f"x^{k}"
        terms.append(str(c) if not mono else mono if c == 1 else f"{c}{mono}")
    return "+".join(terms)


def _sign(x: int) -> str:
    return f"+{x}" if x > 0 else str(x)


# -- table1 ------------------------------------------------------------------

def cmd_table1(args, report: RunReport) -> None:
    spec = _field_for_q(args.q)
    report.parameters.update(q=str(args.q), modulus=_poly(spec.modulus) if spec.n > 1 else "none",
                             generator=format_element(spec.generator))
    state = gqm.singlet(spec)
    report.add("singlet", DERIVED, state=_vec(state.vector, signed=False))
    for row in gqm.table1(spec):
        if not row.present:
            report.add("table1", "absent: needs 4 distinct state indices", observable=row.observable,
                       pp="absent", pm="absent", mp="absent", mm="absent", ev="absent")
            continue
        probs = row.distribution.probabilities
        _ensure(sum(probs) == 1, "table1 row does not sum to 1")
        report.add("table1", PUBLISHED, observable=row.observable,
                   **{k: frac_str(p) for k, p in zip(("pp", "pm", "mp", "mm"), probs)},
                   ev=frac_str(row.expectation))


# -- counts --------------------------------------------------------------------

def cmd_counts(args, report: RunReport) -> None:
    if args.model == "gqm":
        if args.q is None:
            raise UsageError("counts --model gqm needs --q")
        spec = _field_for_q(args.q)
        q = spec.q
        report.parameters.update(model="gqm", q=str(q))
        census = gqm.classify_two_particle(spec)
        formulas = {
            "total": q**3 + q**2 + q + 1,
            "product": (q + 1) ** 2,
            "entangled": q * (q * q - 1),
        }
        for key, expected in formulas.items():
            got = getattr(census, key)
            _ensure(got == expected, f"{key} count {got} differs from formula {expected}")
            report.add("counts", f"{PUBLISHED}: closed-form count, confirmed by enumeration",
                       quantity=key, value=got)
        return
    if args.p is None:
        raise UsageError("counts --model bqm needs --p")
    spec = _bqm_field(args.p)
    report.parameters.update(model="bqm", p=str(args.p), q=str(spec.q))
    prov = PUBLISHED if args.p == 3 else DERIVED
    one = bqm.classify_states(spec, 2)
    report.add("counts", prov, dim=2, quantity="total", value=one.total)
    report.add("counts", prov, dim=2, quantity="physical", value=one.physical)
    report.add("counts", prov, dim=2, quantity="unphysical", value=one.unphysical)
    two = bqm.classify_states(spec, 4)
    _ensure(two.entangled_physical + two.entangled_unphysical == two.entangled, "entangled split")
    report.add("counts", prov, dim=4, quantity="total", value=two.total)
    report.add("counts", prov, dim=4, quantity="product", value=two.product)
    report.add("counts", prov, dim=4, quantity="entangled", value=two.entangled)
    report.add("counts", prov, dim=4, quantity="physical", value=two.entangled_physical)
    report.add("counts", prov, dim=4, quantity="unphysical", value=two.entangled_unphysical)
    report.add("counts", DERIVED, dim=4, quantity="product_physical", value=two.product_physical)
    report.add("counts", DERIVED, dim=4, quantity="all_physical", value=two.physical)
    report.notes.append("dim-4 physical/unphysical count entangled states only")


# -- chsh ------------------------------------------------------------------------

def cmd_chsh(args, report: RunReport) -> None:
    if args.model == "gqm":
        if args.q is None:
            raise UsageError("chsh --model gqm needs --q")
        spec = _field_for_q(args.q)
        exhaustive = True if args.exhaustive else False if args.singlet else None
        report.parameters.update(model="gqm", q=str(spec.q))
        res = gqm.chsh_max(spec, exhaustive)
        report.parameters["mode"] = res.mode
        for w in res.witnesses[:1]:
            check = gqm.chsh_value(spec, w.state, w.a, w.a2, w.b, w.b2)
            _ensure(check == res.value, "witness does not reproduce the maximum")
        report.add("chsh", f"{PUBLISHED}: classical bound 2", quantity="max", value=frac_str(res.value))
        report.add("chsh", DERIVED, quantity="states_searched", value=res.states_searched)
        report.add("chsh", DERIVED, quantity="states_attaining", value=res.states_attaining)
        for w in res.witnesses[:args.witnesses]:
            names = [gqm.spin_observable(spec, *x).name for x in (w.a, w.a2, w.b, w.b2)]
            report.add("witness", DERIVED, state=_vec(w.state.rep, False),
                       a=names[0], a2=names[1], b=names[2], b2=names[3], value=frac_str(w.value))
        if res.mode == "singlet":
            report.notes.append("singlet-only search; valid because local PGL(2,q) acts "
                                "transitively on entangled states")
            if spec.q <= limit("GALOIS_QM_MAX_PGL_Q"):
                orbit = gqm.local_orbit(gqm.singlet(spec))
                census = gqm.classify_two_particle(spec)
                _ensure(orbit == set(census.entangled_states),
                        "local PGL orbit of the singlet is not the entangled set")
                report.add("reduction", DERIVED, check="local PGL(2,q) orbit of singlet = entangled set",
                           orbit_size=len(orbit), entangled=census.entangled)
            else:
                report.notes.append("transitivity not re-checked: q exceeds GALOIS_QM_MAX_PGL_Q")
        return
    if args.p is None:
        raise UsageError("chsh --model bqm needs --p")
    spec = _bqm_field(args.p)
    report.parameters.update(model="bqm", p=str(args.p), q=str(spec.q))
    res = bqm.chsh_max_bqm(spec)
    paulis = bqm.pauli_analogs(spec)
    u = bqm.u_state(spec)
    u_val = bqm.chsh_bqm(u, paulis[1], paulis[3], paulis[3], paulis[1])
    _ensure(u_val <= res.value, "|U> exceeds the global maximum")
    report.add("chsh", f"{PUBLISHED}: super-quantum bound 4" if args.p == 3 else DERIVED,
               quantity="max", value=res.value)
    report.add("chsh", DERIVED, quantity="states_searched", value=res.states_searched)
    report.add("chsh", DERIVED, quantity="states_attaining", value=res.states_attaining)
    report.add("chsh", PUBLISHED if args.p == 3 else DERIVED,
               quantity="U_state_value (s1,s3,s3,s1)", value=u_val)
    in_witnesses = any(w.state == u.point for w in res.witnesses)
    report.add("chsh", DERIVED, quantity="U_state_among_witnesses", value=str(in_witnesses).lower())
    for w in res.witnesses[:args.witnesses]:
        report.add("witness", DERIVED, state=_vec(w.state.rep), a=w.settings[0], a2=w.settings[1],
                   b=w.settings[2], b2=w.settings[3], value=w.value)


# -- lhv ---------------------------------------------------------------------------

PRESETS = ("gqm-singlet-xy", "pr-box", "independent")
CHECKS = ("feasibility", "signaling", "hardy", "chsh")


def _load_table(args, report: RunReport) -> lhv.BipartiteTable:
    if args.input and args.preset:
        raise UsageError("give either --input or --preset, not both")
    if args.input:
        report.parameters["input"] = args.input
        try:
            with open(args.input, encoding="utf-8") as fh:
                text = fh.read()
        except OSError as exc:
            raise UsageError(f"cannot read {args.input}: {exc.strerror}") from None
        try:
            return lhv.loads_table(text)
        except lhv.TableFormatError as exc:
            raise UsageError(f"{args.input}: {exc}") from None
    preset = args.preset or "gqm-singlet-xy"
    report.parameters["preset"] = preset
    if preset == "gqm-singlet-xy":
        q = args.q or 3
        report.parameters["q"] = str(q)
        return lhv.gqm_singlet_xy_table(_field_for_q(q))
    if preset == "pr-box":
        return lhv.pr_box_table()
    return lhv.independent_table()


def cmd_lhv(args, report: RunReport) -> str | None:
    table = _load_table(args, report)
    if args.emit_table:
        return lhv.dumps_table(table)
    checks = CHECKS if not args.check or "all" in args.check else tuple(args.check)
    report.parameters["checks"] = ",".join(checks)
    published_preset = args.preset in (None, "gqm-singlet-xy") and not args.input and args.q in (None, 3)
    for (a, b), probs in table.cells.items():
        report.add("table", DERIVED, a=a, b=b,
                   **{k: frac_str(p) for k, p in zip(("pp", "pm", "mp", "mm"), probs)})
    if "chsh" in checks:
        report.add("chsh", DERIVED, quantity="max_over_settings", value=frac_str(lhv.chsh_table_max(table)))
    if "feasibility" in checks:
        res = lhv.lhv_feasible(table)
        report.add("feasibility", PUBLISHED if published_preset else DERIVED,
                   quantity="local_model_exists", value=str(res.feasible).lower())
        if res.feasible:
            _ensure(lhv.recompose(table, res.weights) == table, "decomposition does not recompose")
            for strat, w in res.weights.items():
                report.add("decomposition", DERIVED, strategy=strat.describe(table), weight=frac_str(w))
        else:
            _ensure(lhv.certificate_holds(table, res.certificate), "certificate fails verification")
            report.add("certificate", DERIVED, inequality=res.certificate.describe())
    if "signaling" in checks:
        sig = lhv.no_signaling_check(table)
        report.add("signaling", DERIVED, quantity="no_signaling", value=str(sig.passed).lower())
        for c in sig.checks:
            margs = ", ".join(f"{k}:{frac_str(v)}" for k, v in c.marginals.items())
            report.add("marginals", DERIVED, party=c.party, setting=c.setting,
                       p_plus_by_partner_setting=margs, consistent=str(c.consistent).lower())
    if "hardy" in checks:
        hardy = lhv.hardy_chain_check(table)
        report.add("hardy", PUBLISHED if published_preset else DERIVED,
                   quantity="chain_closes", value=str(hardy.closes).lower())
        for k, line in enumerate(hardy.transcript):
            report.add("hardy_transcript", DERIVED, step=k, line=line)
        if hardy.closes:
            _ensure(not lhv.lhv_feasible(table).feasible, "Hardy chain closes on a local table")
    return None


# -- bqm-detail ---------------------------------------------------------------------------

WHATS = ("states", "systems", "pauli", "u-state", "constraints", "pu")


def _labels(spec) -> dict:
    names = bqm.named_states(spec) if spec.p == 3 else {}
    return {canonicalize(v): k for k, v in names.items()}


def cmd_bqm_detail(args, report: RunReport) -> None:
    spec = _bqm_field(args.p)
    report.parameters.update(p=str(args.p), what=args.what)
    prov = PUBLISHED if args.p == 3 else DERIVED
    labels = _labels(spec)
    paulis = bqm.pauli_analogs(spec)

    def name(pt):
        return labels.get(pt, f"#{pt.index}")

    if args.what == "states":
        from .projective import enumerate_projective
        for pt in sorted(enumerate_projective(spec, 2), key=lambda pt: (name(pt), pt.index)):
            phys = bqm.is_physical(pt.rep)
            dual = _row(bqm.conjugate_dual(pt.rep)) if phys else "none"
            report.add("states", prov, label=name(pt), ket=_vec(pt.rep), physical=str(phys).lower(),
                       dual=dual, sigma1_ev=_sign(bqm.expectation(paulis[1], pt).value) if phys else "n/a")
    elif args.what == "systems":
        for k, system in enumerate(bqm.enumerate_biorthogonal_systems(spec)):
            _ensure(system.is_biorthogonal(), "system pairing is not the identity")
            report.add("systems", prov, system=k,
                       kets=" ".join(f"{name(pt)}={_vec(pt.rep)}" for pt in system.kets),
                       bras=" ".join(_row(b) for b in system.bras))
    elif args.what == "pauli":
        for k in (1, 2, 3):
            h = paulis[k]
            report.add("pauli", prov, operator=f"sigma{k}",
                       system=" ".join(name(pt) for pt in h.system.kets),
                       eigenvalues=" ".join(format_element(e, True) for e in h.eigenvalues),
                       matrix=_mat(h.matrix))
    elif args.what == "u-state":
        u = bqm.u_state(spec)
        report.add("u_state", prov, ket=_vec(u.vector), dual=_row(u.dual))
        for x, y in ((1, 1), (1, 3), (3, 3), (3, 1)):
            rec = bqm.expectation(bqm.kronecker(paulis[x], paulis[y]), u)
            report.add("correlators", prov, operator=f"sigma{x} x sigma{y}",
                       raw=format_element(rec.raw, True), value=_sign(rec.value))
        value = bqm.chsh_bqm(u, paulis[1], paulis[3], paulis[3], paulis[1])
        report.add("chsh", prov, settings="a=s1 a'=s3 b=s3 b'=s1", value=value)
    elif args.what == "constraints":
        u = bqm.u_state(spec)
        for x in (1, 2, 3):
            for y in (1, 2, 3):
                cs = bqm.probability_constraints(u, bqm.kronecker(paulis[x], paulis[y]))
                forced = ", ".join(f"P({k})=0" for k in cs.forced) or "none"
                sums = ", ".join("+".join(f"P({k})" for k in group) + f"={frac_str(t)}"
                                 for group, t in cs.sums)
                report.add("constraints", prov if (x, y) == (3, 3) else DERIVED,
                           operator=f"sigma{x} x sigma{y}", ev=_sign(cs.expectation),
                           forced=forced, sums=sums, free_parameters=cs.free_parameters)
    else:
        pu = bqm.enumerate_pu(spec)
        pgl = set(enumerate_pgl(spec))
        systems = bqm.enumerate_biorthogonal_systems(spec)
        closed = bqm.is_closed_group(pu)
        inside = all(m in pgl for m in pu)
        preserves = all(bqm.maps_systems_to_systems(m, systems) for m in pu)
        _ensure(closed and inside and preserves, "PU group checks failed")
        report.add("pu", DERIVED, quantity="order", value=len(pu))
        report.add("pu", DERIVED, quantity="closed", value=str(closed).lower())
        report.add("pu", PUBLISHED if args.p == 3 else DERIVED, quantity="subgroup_of_pgl", value=str(inside).lower())
        report.add("pu", PUBLISHED if args.p == 3 else DERIVED, quantity="maps_systems_to_systems",
                   value=str(preserves).lower())
        for k, m in enumerate(pu):
            _ensure(canonicalize_matrix(m) == m, "non-canonical PU representative")
            report.add("elements", DERIVED, index=k, matrix=_mat(m))


# -- entry point -------------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="galois-qm", description="Quantum-like models over Galois fields.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def fmt(p):
        p.add_argument("--format", choices=FORMATS, default="text")

    p = sub.add_parser("table1", help="singlet product-observable table")
    p.add_argument("--q", type=int, required=True)
    fmt(p)

    p = sub.add_parser("counts", help="state counts for either model")
    p.add_argument("--model", choices=("gqm", "bqm"), required=True)
    p.add_argument("--q", type=int)
    p.add_argument("--p", type=int)
    fmt(p)

    p = sub.add_parser("chsh", help="maximal CHSH value")
    p.add_argument("--model", choices=("gqm", "bqm"), required=True)
    p.add_argument("--q", type=int)
    p.add_argument("--p", type=int)
    mode = p.add_mutually_exclusive_group()
    mode.add_argument("--exhaustive", action="store_true", help="search every entangled state")
    mode.add_argument("--singlet", action="store_true", help="search the singlet only")
    p.add_argument("--witnesses", type=int, default=5, help="number of witnesses to list")
    fmt(p)

    p = sub.add_parser("lhv", help="hidden-variable analysis of a correlation table")
    p.add_argument("--input", help="table document (JSON)")
    p.add_argument("--preset", choices=PRESETS)
    p.add_argument("--q", type=int, help="field order for the gqm-singlet-xy preset")
    p.add_argument("--check", action="append", choices=CHECKS + ("all",))
    p.add_argument("--emit-table", action="store_true", help="print the table document and exit")
    fmt(p)

    p = sub.add_parser("bqm-detail", help="catalogues of the expectation-value model")
    p.add_argument("--p", type=int, required=True)
    p.add_argument("--what", choices=WHATS, required=True)
    fmt(p)
    return parser


COMMANDS = {
    "table1": cmd_table1,
    "counts": cmd_counts,
    "chsh": cmd_chsh,
    "lhv": cmd_lhv,
    "bqm-detail": cmd_bqm_detail,
}


def main(argv: list[str] | None = None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    try:
        args = build_parser().parse_args(argv)
    except UsageError as exc:
        print(exc, file=sys.stderr)
        return 1
    report = RunReport("galois-qm " + shlex.join(argv), {})
    try:
        raw = COMMANDS[args.command](args, report)
    except UsageError as exc:
        print(f"galois-qm {args.command}: {exc}", file=sys.stderr)
        return 1
    except GuardError as exc:
        print(f"galois-qm {args.command}: refused: {exc}", file=sys.stderr)
        return 2
    except InvariantError as exc:
        print(f"galois-qm {args.command}: invariant failure: {exc}", file=sys.stderr)
        return 3
    sys.stdout.write(raw if raw is not None else render(report, args.format))
    return 0


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())

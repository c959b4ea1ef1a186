"""Command line interface over knowledge-base files.

Subcommands:
  check     coherence verdict, agreeing class dump, zero-layer table
  extend    coherent interval for a conditional event (or the file's queries)
  entails   whether a rule's conditional event admits only the value 1
  defaults  consistency of the rule base, by both routes when applicable
  rules     instantiate a named inference schema and test its claim
  atoms     the atoms of the algebra generated by the assessed events

Exit codes: 0 for positive verdicts, 1 for negative verdicts, 2 for input
errors.  With --format json each run prints one versioned JSON document in
which every probability is an exact "n/d" string; reports are byte-identical
across runs on identical input.
"""

from __future__ import annotations

import argparse
import json
import random
import sys
from fractions import Fraction

from .coherence import (
    CoherenceError,
    Coherent,
    ConditionalEvent,
    INFINITY,
    check_coherence,
)
from .defaults import (
    DefaultKB,
    FAILING,
    SCHEMAS,
    check_rule_schema,
    consistent_boolean,
    consistent_coherence,
    universe_literals,
)
from .extension import IncoherentBase, coherent_interval
from .kbfile import KBFileError, KnowledgeBase, load_kb
from .logic import And, LogicError, Prop, Universe, format_formula

FORMAT_VERSION = "cohprob/1"


class CommandError(ValueError):
    """A problem with the command line itself rather than the kb file."""


def _rat(q: Fraction) -> str:
    return f"{q.numerator}/{q.denominator}"


def _rank_json(r):
    return "inf" if r is INFINITY else r


def _world_text(u: Universe, world: int) -> str:
    if not u.props:
        return "true"
    parts = []
    for i, name in enumerate(u.props):
        parts.append(name if world >> i & 1 else f"~{name}")
    return " & ".join(parts)


def _atom_texts(u: Universe, atom) -> list[str]:
    return [_world_text(u, w) for w in atom.worlds]


def _atom_label(u: Universe, atom) -> str:
    texts = _atom_texts(u, atom)
    if len(texts) == 1:
        return texts[0]
    return f"{texts[0]} (+{len(texts) - 1} more)"


def _interval_json(interval) -> dict:
    return {
        "lo": _rat(interval.lo),
        "hi": _rat(interval.hi),
        "degenerate": interval.degenerate,
    }


def _conj(event: ConditionalEvent) -> And:
    return And(event.consequent, event.conditioning)


# ---------------------------------------------------------------------------
# Subcommand handlers: each returns (exit code, human lines, json payload).


def _cmd_check(kb: KnowledgeBase, args) -> tuple[int, list[str], dict]:
    result = check_coherence(kb.assessment)
    if not isinstance(result, Coherent):
        lines = ["INCOHERENT", f"failing layer: {result.layer}"]
        return 1, lines, {"verdict": "incoherent",
                          "failing_layer": result.layer}
    ac = result.agreeing_class
    u = kb.universe
    lines = ["COHERENT", f"layers: {len(ac.layers)}"]
    atoms_json = []
    lines.append("atoms:")
    for i, atom in enumerate(ac.atoms):
        lines.append(f"  {i}: {_atom_label(u, atom)}")
        atoms_json.append({"index": i, "worlds": _atom_texts(u, atom)})
    layers_json = []
    for k, masses in enumerate(ac.layers):
        positive = [
            f"P({i}) = {_rat(m)}" for i, m in enumerate(masses) if m > 0
        ]
        lines.append(f"layer {k}: " + ", ".join(positive))
        layers_json.append({"index": k, "masses": [_rat(m) for m in masses]})
    entries_json = []
    lines.append("zero-layers:")
    for i, entry in enumerate(ac.entries):
        event = entry.event
        ord_eh = ac.zero_layer(_conj(event))
        ord_h = ac.zero_layer(event.conditioning)
        ord_cond = ac.conditional_zero_layer(event)
        eh_text = format_formula(_conj(event))
        h_text = format_formula(event.conditioning)
        lines.append(
            f"  {event} = {_rat(entry.value)}; resolves at layer "
            f"{ac.resolution[i]}; ord({eh_text}) = {ord_eh}, "
            f"ord({h_text}) = {ord_h}, ord({event}) = {ord_cond}"
        )
        entries_json.append({
            "event": str(event),
            "value": _rat(entry.value),
            "layer": ac.resolution[i],
            "ord_eh": _rank_json(ord_eh),
            "ord_h": _rank_json(ord_h),
            "ord": _rank_json(ord_cond),
            "eh_atoms": ac.atom_indices(_conj(event)),
            "h_atoms": ac.atom_indices(event.conditioning),
        })
    payload = {
        "verdict": "coherent",
        "layers": layers_json,
        "atoms": atoms_json,
        "entries": entries_json,
    }
    return 0, lines, payload


def _cmd_extend(kb: KnowledgeBase, args) -> tuple[int, list[str], dict]:
    if args.event is not None:
        consequent, conditioning = kb.universe.parse_conditional(args.event)
        targets = [ConditionalEvent(consequent, conditioning)]
        explicit = True
    else:
        targets = kb.queries
        explicit = False
        if not targets:
            raise CommandError(
                "no query lines in the file and no event argument"
            )
    lines = []
    results = []
    try:
        for target in targets:
            interval = coherent_interval(kb.assessment, target)
            if explicit:
                lines.append(str(interval))
            else:
                lines.append(f"{target}: {interval}")
            results.append({"event": str(target), **_interval_json(interval)})
    except IncoherentBase:
        return 1, ["INCOHERENT base assessment"], {"verdict": "incoherent"}
    return 0, lines, {"verdict": "coherent", "intervals": results}


def _cmd_entails(kb: KnowledgeBase, args) -> tuple[int, list[str], dict]:
    conditioning, consequent = kb.universe.parse_default(args.rule)
    target = ConditionalEvent(consequent, conditioning)
    if not isinstance(check_coherence(kb.assessment), Coherent):
        raise CommandError(
            "the knowledge base is inconsistent; entailment is undefined"
        )
    interval = coherent_interval(kb.assessment, target)
    entailed = interval.lo == 1
    word = "YES" if entailed else "NO"
    rule_text = (f"{format_formula(conditioning)} => "
                 f"{format_formula(consequent)}")
    lines = [f"{word}; interval {interval}"]
    payload = {
        "rule": rule_text,
        "entailed": entailed,
        "interval": _interval_json(interval),
    }
    return (0 if entailed else 1), lines, payload


def _cmd_defaults(kb: KnowledgeBase, args) -> tuple[int, list[str], dict]:
    view = kb.default_kb
    coherence = consistent_coherence(view)
    lines = []
    payload: dict = {"rules": [str(r) for r in view.rules],
                     "extra": [f"{e.event} = {_rat(e.value)}"
                               for e in view.extra]}
    if coherence:
        lines.append("consistent: yes")
        payload["consistent"] = True
        payload["failing_layer"] = None
    else:
        lines.append(f"consistent: no (coherence fails at layer "
                     f"{coherence.layer})")
        payload["consistent"] = False
        payload["failing_layer"] = coherence.layer
    if view.extra:
        lines.append("subset criterion: not applicable "
                     "(the file assesses values below 1)")
        payload["subset_criterion"] = {"applicable": False,
                                       "consistent": None,
                                       "violating_rules": None}
    else:
        boolean = consistent_boolean(view)
        if boolean:
            lines.append("subset criterion: yes")
            payload["subset_criterion"] = {"applicable": True,
                                           "consistent": True,
                                           "violating_rules": None}
        else:
            numbers = [i + 1 for i in boolean.subset]
            lines.append("subset criterion: no (violating rules: "
                         + ", ".join(str(n) for n in numbers) + ")")
            for n in numbers:
                lines.append(f"  {n}. {view.rules[n - 1]}")
            payload["subset_criterion"] = {"applicable": True,
                                           "consistent": False,
                                           "violating_rules": numbers}
    return (0 if coherence else 1), lines, payload


def _clone_universe(u: Universe) -> Universe:
    out = Universe(max_props=u.max_props)
    out.declare(*u.props)
    for axiom in u.axioms:
        out.add_axiom(axiom)
    return out


def _parse_map(u: Universe, text: str, slots) -> dict:
    mapping = {}
    for part in text.split(","):
        name, eq, formula = part.partition("=")
        name = name.strip()
        if not eq or name not in slots:
            raise CommandError(
                f"--map expects slot=formula pairs over {', '.join(slots)}"
            )
        mapping[name] = u.parse(formula.strip())
    return mapping


def _schema_report_lines(report) -> list[str]:
    lines = [f"schema: {report.schema} ({report.kind})"]
    for premise in report.premises:
        kind = "negative premise" if report.kind == "cs" else "premise"
        lines.append(f"{kind}: {premise}")
    lines.append(f"conclusion: {report.conclusion}")
    if not report.applicable:
        lines.append(f"not applicable: {report.reason}")
        lines.append("verdict: vacuous")
        return lines
    if report.kind == "cs":
        if report.premise_intervals:
            bands = ", ".join(str(iv) for iv in report.premise_intervals)
            lines.append(f"negative premise bands: {bands}")
        lines.append("premises hold: "
                     + ("yes" if report.premises_hold else "no"))
        lines.append(f"note: {report.note}")
    else:
        lines.append("premises consistent: "
                     + ("yes" if report.premises_consistent else "no"))
    if report.interval is not None:
        lines.append(f"conclusion interval: {report.interval}")
    if report.entailed is not None:
        lines.append("entailed: " + ("yes" if report.entailed else "no"))
    lines.append("verdict: "
                 + ("as expected" if report.as_expected else "COUNTEREXAMPLE"))
    return lines


def _schema_report_json(report) -> dict:
    return {
        "schema": report.schema,
        "kind": report.kind,
        "premises": [str(p) for p in report.premises],
        "conclusion": str(report.conclusion),
        "applicable": report.applicable,
        "reason": report.reason or None,
        "premises_consistent": report.premises_consistent,
        "premises_hold": report.premises_hold,
        "premise_intervals": [
            _interval_json(iv) for iv in report.premise_intervals
        ],
        "entailed": report.entailed,
        "interval": (_interval_json(report.interval)
                     if report.interval is not None else None),
        "as_expected": report.as_expected,
    }


def _cmd_rules(kb: KnowledgeBase, args) -> tuple[int, list[str], dict]:
    try:
        schema = SCHEMAS[args.schema]
    except KeyError:
        raise CommandError(
            f"unknown schema {args.schema!r}; choose from "
            + ", ".join(sorted(SCHEMAS))
        ) from None

    if args.random is not None:
        literals = universe_literals(kb.universe)
        if len(literals) < len(schema.slots):
            raise CommandError(
                "the universe has too few propositions for random instances"
            )
        rng = random.Random(args.seed)
        reports = []
        for _ in range(args.random):
            mapping = dict(zip(
                schema.slots, rng.sample(literals, len(schema.slots))
            ))
            reports.append(check_rule_schema(schema, kb.default_kb, mapping))
        applicable = sum(r.applicable for r in reports)
        expected = sum(r.as_expected for r in reports)
        witnessed = sum(
            r.applicable and bool(r.premises_consistent)
            and r.entailed is False for r in reports
        )
        if schema.kind == FAILING:
            ok = witnessed > 0
            verdict = ("failure witnessed" if ok
                       else "no failure witnessed")
        else:
            ok = expected == len(reports)
            verdict = "as expected" if ok else "COUNTEREXAMPLE"
        lines = [
            f"schema: {schema.name} ({schema.kind})",
            f"instances: {len(reports)}",
            f"applicable: {applicable}",
            f"as expected: {expected}",
        ]
        if schema.kind == FAILING:
            lines.append(f"failures witnessed: {witnessed}")
        lines.append(f"verdict: {verdict}")
        payload = {
            "schema": schema.name,
            "kind": schema.kind,
            "instances": len(reports),
            "applicable": applicable,
            "as_expected": expected,
            "failures_witnessed": witnessed,
            "ok": ok,
        }
        return (0 if ok else 1), lines, payload

    u = _clone_universe(kb.universe)
    if args.map:
        mapping = _parse_map(u, args.map, schema.slots)
        missing = [s for s in schema.slots if s not in mapping]
        if missing:
            raise CommandError(
                f"--map is missing slots: {', '.join(missing)}"
            )
    else:
        fresh = [s for s in schema.slots if s not in u.props]
        if fresh:
            u.declare(*fresh)
        mapping = {s: Prop(s) for s in schema.slots}
    base = DefaultKB(u, kb.default_kb.rules, kb.default_kb.extra)
    report = check_rule_schema(schema, base, mapping, with_interval=True)
    lines = _schema_report_lines(report)
    return (0 if report.as_expected else 1), lines, _schema_report_json(report)


def _cmd_atoms(kb: KnowledgeBase, args) -> tuple[int, list[str], dict]:
    u = kb.universe
    events = kb.assessment.event_list()
    atoms = u.atoms(events)
    lines = ["columns:"]
    for j, event in enumerate(events):
        lines.append(f"  {j}: {format_formula(event)}")
    lines.append(f"atoms: {len(atoms)}")
    atoms_json = []
    for i, atom in enumerate(atoms):
        bits = "".join("1" if b else "0" for b in atom.signature)
        label = _atom_label(u, atom)
        lines.append(f"  {i}: [{bits}] {label}")
        atoms_json.append({
            "index": i,
            "signature": bits,
            "worlds": _atom_texts(u, atom),
        })
    payload = {
        "columns": [format_formula(event) for event in events],
        "atoms": atoms_json,
    }
    return 0, lines, payload


# ---------------------------------------------------------------------------
# Argument parsing and dispatch.


def _fraction_arg(text: str) -> Fraction:
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(
            f"{text!r} is not a rational (write n or n/d)"
        ) from None


def _seed_arg(text: str) -> int:
    try:
        value = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"{text!r} is not an integer") \
            from None
    if not 0 <= value < 2 ** 64:
        raise argparse.ArgumentTypeError("seed must fit in 64 unsigned bits")
    return value


def _build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("kb", help="knowledge-base file")
    common.add_argument("--max-props", type=int, default=16,
                        help="proposition bound (default 16)")
    common.add_argument("--format", choices=("human", "json"),
                        default="human", help="report format")
    common.add_argument("--alpha", type=_fraction_arg, default=None,
                        help="value for the alpha placeholder")
    common.add_argument("--seed", type=_seed_arg, default=0,
                        help="seed for randomized sweeps")

    parser = argparse.ArgumentParser(
        prog="cohprob",
        description="Coherence, extension bands, and default-rule entailment "
                    "for conditional probability assessments.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("check", parents=[common],
                       help="decide coherence and dump the agreeing class")
    p.set_defaults(handler=_cmd_check)

    p = sub.add_parser("extend", parents=[common],
                       help="coherent interval for a conditional event")
    p.add_argument("event", nargs="?", default=None,
                   help='conditional event "<E> | <H>" '
                        "(defaults to the file's query lines)")
    p.set_defaults(handler=_cmd_extend)

    p = sub.add_parser("entails", parents=[common],
                       help="test entailment of a rule")
    p.add_argument("rule", help='rule "<H> => <E>"')
    p.set_defaults(handler=_cmd_entails)

    p = sub.add_parser("defaults", parents=[common],
                       help="consistency of the rule base")
    p.set_defaults(handler=_cmd_defaults)

    p = sub.add_parser("rules", parents=[common],
                       help="instantiate and test an inference schema")
    p.add_argument("--schema", required=True,
                   help="schema name (e.g. Cut, Or, Transitivity)")
    p.add_argument("--map", default=None,
                   help="slot assignments, e.g. "
                        '"A=penguin,B=bird,C=fly"')
    p.add_argument("--random", type=int, default=None, metavar="N",
                   help="test N seeded random literal instances")
    p.set_defaults(handler=_cmd_rules)

    p = sub.add_parser("atoms", parents=[common],
                       help="atom table of the generated algebra")
    p.set_defaults(handler=_cmd_atoms)
    return parser


def main(argv=None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        kb = load_kb(args.kb, max_props=args.max_props, alpha=args.alpha)
        code, lines, payload = args.handler(kb, args)
    except (CommandError, KBFileError, LogicError, CoherenceError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    if args.format == "json":
        document = {"format": FORMAT_VERSION, "command": args.command}
        document.update(payload)
        print(json.dumps(document, indent=2, sort_keys=True))
    else:
        for line in lines:
            print(line)
    return code


if __name__ == "__main__":
    raise SystemExit(main())

"""Command-line driver: ``surfext analyze|classify|mmp|blowup|verify|cones``."""
from __future__ import annotations

import argparse
import hashlib
import json
import sys
from dataclasses import dataclass, field

from . import dualgraph
from .arith import format_rational
from .classify import Rejection, classify_lc_graph, main_lc_rationale
from .discrepancy import LatticeError, NotLogCanonical, discrepancies, is_prime
from .dualgraph import GraphError, SchemaError
from .formpull import InfeasibleParameters, cone_params, verify_e8, verify_veronese
from .formpull.examples import E8_PRIMES
from .mmp import (
    ContractionError,
    ContractionState,
    SearchCapError,
    contract,
    extension_verdict,
    find_tame_order,
)

EXIT_OK = 0
EXIT_NOT_LC = 1
EXIT_INPUT = 2


class InputFailure(Exception):
    """Unreadable or malformed graph file."""


def _prime(text: str) -> int:
    try:
        p = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"{text!r} is not an integer") from None
    if not is_prime(p):
        raise argparse.ArgumentTypeError(f"{p} is not a prime")
    return p


def _read_graph(path: str) -> tuple:
    try:
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise InputFailure(f"cannot read {path}: {exc.strerror}") from None
    try:
        g = dualgraph.loads(text)
    except SchemaError as exc:
        raise InputFailure(f"schema error at {exc}") from None
    except (GraphError, ValueError) as exc:
        raise InputFailure(str(exc)) from None
    return g, hashlib.sha256(dualgraph.dumps(g).encode()).hexdigest()


def _emit_json(doc) -> None:
    sys.stdout.write(json.dumps(doc, indent=2, sort_keys=True) + "\n")


def _jsonable(x):
    if isinstance(x, dict):
        return {str(k): _jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_jsonable(v) for v in x]
    return x


@dataclass
class AnalysisReport:
    input_digest: str
    discrepancies: dict
    sing_class: str
    lc_class: dict | None
    trace: list = field(default_factory=list)
    verdicts: dict = field(default_factory=dict)
    citations: list = field(default_factory=list)
    notes: list = field(default_factory=list)

    def to_dict(self) -> dict:
        return {
            "input_digest": self.input_digest,
            "discrepancies": self.discrepancies,
            "class": {"singularity": self.sing_class, "lc_class": self.lc_class},
            "trace": self.trace,
            "verdicts": self.verdicts,
            "citations": self.citations,
        }

    def to_text(self) -> str:
        lines = [f"input sha256 {self.input_digest[:16]}", "discrepancies:"]
        lines += [f"  {k}: {v}" for k, v in self.discrepancies.items()]
        lines.append(f"class: {self.sing_class}")
        if self.lc_class:
            if "tag" in self.lc_class:
                lines.append(f"lc class: {self.lc_class['tag']}")
            else:
                lines.append(f"lc class: unmatched ({self.lc_class['rejection']})")
        if self.trace:
            lines.append("tame contraction order:")
            for i, st in enumerate(self.trace, start=1):
                lines.append(
                    f"  {i}. {st['contracted']}  lambda={st['lambda']}  "
                    f"(K+D).P={st['degree']}  P^2={st['self_intersection']}"
                )
        for name, v in self.verdicts.items():
            lines.append(f"{name}: {v['value']}  [{', '.join(v['citations'])}]")
        lines += [f"note: {n}" for n in self.notes]
        return "\n".join(lines)


def _class_payload(g) -> dict:
    cls = classify_lc_graph(g)
    if isinstance(cls, Rejection):
        out = {"rejection": cls.reason}
        if cls.suggestion:
            out["suggestion"] = cls.suggestion
        return out
    return {"tag": cls.tag, "data": _jsonable(cls.data)}


def build_report(g, digest: str, p: int, mode: str) -> AnalysisReport:
    rep = discrepancies(g)
    report = AnalysisReport(
        input_digest=digest,
        discrepancies={k: format_rational(v) for k, v in rep.values.items()},
        sing_class=str(rep.sing_class),
        lc_class=None,
    )
    if not rep.sing_class.is_lc:
        return report
    report.lc_class = _class_payload(g)
    try:
        tame = find_tame_order(g, p, mode)
    except SearchCapError as exc:
        tame = None
        report.notes.append(str(exc))
    if tame is not None:
        report.trace = [s.to_dict() for s in tame.steps]
    verdict = extension_verdict(g, p, mode)
    report.verdicts = verdict.to_dict()
    report.citations = [c.to_dict() for c in verdict.justification]
    return report


def cmd_analyze(args) -> int:
    g, digest = _read_graph(args.graph)
    try:
        report = build_report(g, digest, args.char, args.mode)
    except LatticeError as exc:
        print(f"not contractible: {exc}", file=sys.stderr)
        return EXIT_NOT_LC
    if args.json:
        _emit_json(report.to_dict())
    else:
        print(report.to_text())
    return EXIT_OK if report.verdicts else EXIT_NOT_LC


def cmd_classify(args) -> int:
    g, _ = _read_graph(args.graph)
    try:
        rep = discrepancies(g)
    except LatticeError as exc:
        print(f"not contractible: {exc}", file=sys.stderr)
        return EXIT_NOT_LC
    if not rep.sing_class.is_lc:
        print(f"not log canonical ({rep.sing_class})", file=sys.stderr)
        return EXIT_NOT_LC
    doc = _class_payload(g)
    if args.char is not None and "tag" in doc:
        r = main_lc_rationale(g, args.char)
        doc["rationale"] = {
            "case": r.case,
            "route": r.route,
            "p": r.p,
            "certified": r.certified,
            "blocked_by": list(r.blocked_by),
            "citations": list(r.citations),
            "notes": list(r.notes),
        }
    if args.json:
        _emit_json(doc)
        return EXIT_OK
    if "tag" not in doc:
        print(f"unmatched: {doc['rejection']}")
        if "suggestion" in doc:
            print(f"suggestion: {doc['suggestion']}")
        return EXIT_OK
    print(f"class: {doc['tag']}")
    for k, v in doc["data"].items():
        print(f"  {k}: {v}")
    if "rationale" in doc:
        r = doc["rationale"]
        status = "certified" if r["certified"] else "blocked: " + "; ".join(r["blocked_by"])
        print(f"route at p = {r['p']}: {r['route']} ({status})")
        for n in r["notes"]:
            print(f"  {n}")
    return EXIT_OK


def cmd_mmp(args) -> int:
    g, _ = _read_graph(args.graph)
    try:
        rep = discrepancies(g)
    except LatticeError as exc:
        print(f"not contractible: {exc}", file=sys.stderr)
        return EXIT_NOT_LC
    if not rep.sing_class.is_lc:
        print(f"not log canonical ({rep.sing_class})", file=sys.stderr)
        return EXIT_NOT_LC
    if args.order:
        state = ContractionState.start(g)
        steps = []
        for vid in args.order.split(","):
            try:
                state, step = contract(state, vid.strip(), args.char)
            except (ContractionError, GraphError, KeyError) as exc:
                print(f"step {len(steps) + 1}: {exc}", file=sys.stderr)
                return EXIT_INPUT
            steps.append(step)
        doc = {"order": [s.contracted_vertex for s in steps], "found": True,
               "trace": [s.to_dict() for s in steps]}
    else:
        try:
            tame = find_tame_order(g, args.char, args.mode)
        except SearchCapError as exc:
            print(str(exc), file=sys.stderr)
            return EXIT_INPUT
        doc = {
            "order": list(tame.order) if tame else None,
            "found": tame is not None,
            "trace": [s.to_dict() for s in tame.steps] if tame else [],
        }
    if args.json:
        _emit_json(doc)
    elif not doc["found"]:
        print(f"no tame contraction order at p = {args.char} ({args.mode})")
    else:
        for i, st in enumerate(doc["trace"], start=1):
            print(f"{i}. contract {st['contracted']}: lambda={st['lambda']} "
                  f"(K+D).P={st['degree']} P^2={st['self_intersection']} tame={st['tame']}")
        if not doc["trace"]:
            print("nothing to contract")
    return EXIT_OK


def _center(text: str) -> tuple:
    vid, _, mult = text.partition(":")
    try:
        return vid, int(mult) if mult else 1
    except ValueError:
        raise argparse.ArgumentTypeError(f"bad multiplicity in {text!r}") from None


def cmd_blowup(args) -> int:
    g, _ = _read_graph(args.graph)
    center = dict(args.center)
    if len(center) != len(args.center):
        print("a curve is named twice in the center", file=sys.stderr)
        return EXIT_INPUT
    try:
        h = dualgraph.blowup(g, center, args.new_id)
    except (GraphError, KeyError) as exc:
        msg = exc.args[0] if exc.args else str(exc)
        print(f"invalid center: {msg}", file=sys.stderr)
        return EXIT_INPUT
    before, after = dualgraph.determinant(g), dualgraph.determinant(h)
    report = {"det_before": format_rational(before), "det_after": format_rational(after),
              "abs_det_preserved": abs(before) == abs(after)}
    if args.json:
        _emit_json({"graph": dualgraph.graph_to_dict(h), **report})
        return EXIT_OK
    text = dualgraph.dumps(h)
    summary = f"det before {report['det_before']}, after {report['det_after']}"
    if args.output:
        with open(args.output, "w", encoding="utf-8") as fh:
            fh.write(text)
        print(summary)
    else:
        sys.stdout.write(text)
        print(summary, file=sys.stderr)
    return EXIT_OK


def cmd_verify(args, parser) -> int:
    if args.example == "e8":
        if args.char not in E8_PRIMES:
            parser.error(f"verify e8 is defined only for --char in {list(E8_PRIMES)}")
        r = verify_e8(args.char)
        gamma, alpha, beta = r.expected
        doc = {
            "example": "e8",
            "p": r.p,
            "sigma": r.sigma,
            "strict_transform": "u^4 v^14 (w^2 + u v (u + 1))" if r.strict_transform_ok else "mismatch",
            "du_coefficient": str(r.coefficient),
            "computed": {"gamma": r.gamma, "alpha": r.alpha, "beta": r.beta, "scalar": r.scalar},
            "expected": {"gamma": gamma, "alpha": alpha, "beta": beta},
            "pole_order": r.poles.pole_order,
            "verdict": r.poles.verdict,
            "passed": r.passed,
        }
    else:
        r = verify_veronese(args.char)
        doc = {
            "example": "veronese",
            "p": r.p,
            "log_form_compatible": r.log_form_compatible,
            "regular_form_compatible": r.regular_form_compatible,
            "pole_order": [r.chart0.pole_order, r.chart1.pole_order],
            "verdict": [r.chart0.verdict, r.chart1.verdict],
            "involution": r.involution,
            "passed": r.passed,
        }
    if args.json:
        _emit_json(doc)
    elif args.example == "e8":
        print(f"sigma = {doc['sigma']} over F_{doc['p']}")
        print(f"strict transform factor: {doc['strict_transform']}")
        print(f"pulled back form: [{doc['du_coefficient']}] du")
        c = doc["computed"]
        print(f"= {c['scalar']} * u^{c['alpha']} (u+1)^{c['beta']} / w^{c['gamma']} du")
        print(f"pole order along w = 0: {doc['pole_order']} ({doc['verdict']})")
        print("PASS" if doc["passed"] else "FAIL")
    else:
        print(f"y1^-1 dy1 pulls back to y0^-1 dy0 over F_{doc['p']}: {doc['log_form_compatible']}")
        print(f"dy1 pulls back to dy0: {doc['regular_form_compatible']}")
        print(f"pole order along E: {doc['pole_order'][0]} ({doc['verdict'][0]})")
        print("PASS" if doc["passed"] else "FAIL")
    return EXIT_OK if doc["passed"] else 1


def cmd_cones(args) -> int:
    try:
        rec = cone_params(args.case, args.n, args.p)
    except InfeasibleParameters as exc:
        if args.json:
            _emit_json({"case": args.case, "n": args.n, "p": args.p, "feasible": False,
                        "violated_bound": f"n >= {exc.bound} = {exc.value}"})
        else:
            print(f"infeasible: {exc}")
        return 1
    doc = {"feasible": True, **rec.to_dict()}
    if args.json:
        _emit_json(doc)
    else:
        for k, v in doc.items():
            print(f"{k}: {v}")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="surfext", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    def graph_cmd(name, help_text, need_char=True, with_mode=False):
        sp = sub.add_parser(name, help=help_text)
        sp.add_argument("graph", help="dual graph JSON file")
        sp.add_argument("--char", type=_prime, required=need_char, help="characteristic p")
        if with_mode:
            sp.add_argument("--mode", choices=("greedy", "exhaustive"), default="exhaustive")
        sp.add_argument("--json", action="store_true", help="machine-readable output")
        return sp

    graph_cmd("analyze", "discrepancies, class, tame order and verdicts", with_mode=True)
    graph_cmd("classify", "match against the lc classes", need_char=False)
    mp = graph_cmd("mmp", "search for a tame contraction order", with_mode=True)
    mp.add_argument("--order", help="comma-separated curves to contract in this order instead")

    bp = sub.add_parser("blowup", help="blow up a point on one or two curves")
    bp.add_argument("graph")
    bp.add_argument("--center", type=_center, action="append", required=True,
                    metavar="ID[:MULT]", help="curve through the point (repeat for two curves)")
    bp.add_argument("--new-id", help="id of the exceptional curve (default F1, F2, ...)")
    bp.add_argument("-o", "--output", help="write the graph here instead of stdout")
    bp.add_argument("--json", action="store_true")

    vp = sub.add_parser("verify", help="form-level checks of the counterexamples")
    vp.add_argument("example", choices=("e8", "veronese"))
    vp.add_argument("--char", type=_prime, required=True)
    vp.add_argument("--json", action="store_true")

    cp = sub.add_parser("cones", help="parameters of the cyclic-cover cones")
    cp.add_argument("case", choices=("fano", "fano-sqrt", "calabi-yau"))
    cp.add_argument("n", type=int)
    cp.add_argument("p", type=_prime)
    cp.add_argument("--json", action="store_true")
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        if args.command == "verify":
            return cmd_verify(args, parser)
        if args.command == "cones":
            if args.n < 2:
                parser.error("n must be at least 2")
            return cmd_cones(args)
        handler = {
            "analyze": cmd_analyze,
            "classify": cmd_classify,
            "mmp": cmd_mmp,
            "blowup": cmd_blowup,
        }[args.command]
        return handler(args)
    except InputFailure as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except NotLogCanonical as exc:
        print(f"not log canonical: {exc}", file=sys.stderr)
        return EXIT_NOT_LC


if __name__ == "__main__":
    sys.exit(main())

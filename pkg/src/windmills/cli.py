"""Command-line front end.  Every command prints one JSON report; verdicts
live in the report, never in the exit status (0 ran, 2 usage, 3 bad input)."""

from __future__ import annotations

import argparse
import json
import os
import sys
import time
from pathlib import Path

from .coherence import (BLOCK_FORM, SINGLE_B_FORM, Certificate, certify_coherence, decide_trivial,
                        enlargement_loop, replay_certificate, scheme_weights, verify_spelling)
from .complex import ComplexError, TwoComplex, build_standard_complex, parse_complex, parse_subcomplex
from .diagrams import AreaOracle, enumerate_minimal_diagrams, validate_diagram
from .folding import is_pi1_injective
from .hypotheses import ROUTES
from .pullback import structure_report
from .windmill import (BOUNDARY, GENERATOR, build_boundary_graph, build_generator_graph,
                       certify_splitting_windmill, check_windmill, compute_essence)
from .words import PresentationError, cyclic_reduce, parse_presentation, parse_word

SCHEMA = 1


class InputError(Exception):
    pass


def _default_max_area() -> int:
    try:
        return int(os.environ.get("WINDMILL_MAX_AREA", "8"))
    except ValueError:
        raise InputError("WINDMILL_MAX_AREA must be an integer") from None


# ------------------------------------------------------------------ inputs

class Loaded:
    def __init__(self, x: TwoComplex, presentation=None, a_edges=None, a_vertices=None):
        self.x = x
        self.presentation = presentation
        self.a_edges = a_edges
        self.a_vertices = a_vertices


def _read(arg: str) -> tuple[str, bool]:
    p = Path(arg)
    if p.is_file():
        return p.read_text(), True
    return arg, False


def load_input(arg: str) -> Loaded:
    text, _ = _read(arg)
    try:
        if text.lstrip().startswith("<"):
            p = parse_presentation(text)
            return Loaded(build_standard_complex(p), p)
        x = parse_complex(text)
        edges, vertices = parse_subcomplex(x, text)
        return Loaded(x, None, edges or None, vertices)
    except (PresentationError, ComplexError, ValueError) as exc:
        raise InputError(str(exc)) from None


def _a_edges(loaded: Loaded, names: str | None) -> frozenset[int]:
    x = loaded.x
    if names:
        try:
            return frozenset(x.edge_id(n.strip()) for n in names.split(",") if n.strip())
        except ValueError:
            raise InputError(f"unknown letter in --a {names!r}") from None
    if loaded.a_edges is not None:
        return frozenset(loaded.a_edges)
    # default: every generator except the last one
    return frozenset(range(len(x.edges) - 1))


def _word(loaded: Loaded, text: str):
    try:
        return parse_word(text, loaded.x.names)
    except (PresentationError, ValueError) as exc:
        raise InputError(str(exc)) from None


def _separator(loaded: Loaded, mode: str, a):
    if mode == BOUNDARY:
        return build_boundary_graph(loaded.x, a, loaded.a_vertices)
    return build_generator_graph(loaded.x, a)


# ---------------------------------------------------------------- commands

def _fmt(x: TwoComplex, w) -> str:
    return x.format(w) if w else "1"


def cmd_parse(args) -> dict:
    loaded = load_input(args.input)
    if loaded.presentation is not None:
        p = loaded.presentation
        return {"presentation": str(p), "generators": list(p.generators),
                "relators": [p.format(r) for r in p.relators], "exponents": list(p.exponents),
                "normalized": p.normalized}
    x = loaded.x
    return {"vertices": len(x.vertices), "edges": len(x.edges), "faces": [_fmt(x, f.boundary) for f in x.faces]}


def _graph_report(x: TwoComplex, sep) -> dict:
    graph, classes = compute_essence(x, sep)
    return {
        "kind": sep.kind,
        "A": [x.edge_name(e) for e in sorted(sep.a_edges)],
        "gamma_points": len(sep.gamma_points),
        "chords": [{"face": fd.face, "from": c.start_gp, "to": c.end_gp, "label": _fmt(x, c.label)}
                   for fd in sep.per_face for c in fd.chords],
        "components": sep.components(),
        "essence": {"classes": len(set(classes.values())), "component_ranks": graph.betti_numbers(),
                    "injective": is_pi1_injective(graph).injective},
    }


def cmd_graph(args) -> dict:
    loaded = load_input(args.input)
    return _graph_report(loaded.x, _separator(loaded, args.mode, _a_edges(loaded, args.a)))


def cmd_windmill(args) -> dict:
    loaded = load_input(args.input)
    x = loaded.x
    a = _a_edges(loaded, args.a)
    sep = _separator(loaded, args.mode, a)
    verdicts, ok = check_windmill(x, sep)
    from .hypotheses import inclusion_verdict

    inc = inclusion_verdict(x, a)
    split = certify_splitting_windmill(x, sep, inc.verdict)
    return {
        "A": [x.edge_name(e) for e in sorted(a)],
        "mode": args.mode,
        "windmill": ok,
        "faces": [{"face": v.face, "chords": v.chords, "unlinked": v.unlinked, "z_connected": v.z_connected}
                  for v in verdicts],
        "inclusion": {"route": inc.route, "verdict": inc.verdict, "reason": inc.reason},
        "splitting": {"verdict": split.verdict, "essence_injective": split.essence_injective,
                      "reasons": split.reasons},
    }


def cmd_hypotheses(args) -> dict:
    loaded = load_input(args.input)
    a = _a_edges(loaded, args.a)
    routes = [args.route] if args.route else list(ROUTES)
    out = []
    for r in routes:
        v = ROUTES[r](loaded.x, a)
        out.append({"route": r, "verdict": v.verdict, "reason": v.reason})
    return {"A": [loaded.x.edge_name(e) for e in sorted(a)], "routes": out}


def cmd_certify(args) -> dict:
    if args.verify_certificate:
        text, _ = _read(args.verify_certificate)
        try:
            data = json.loads(text)
        except json.JSONDecodeError as exc:
            raise InputError(f"certificate is not JSON: {exc}") from None
        data = data.get("result", {}).get("certificate", data)
        try:
            cert = Certificate.from_dict(data)
            ok, problems = replay_certificate(cert)
        except (TypeError, KeyError, PresentationError, ValueError) as exc:
            raise InputError(f"malformed certificate: {exc}") from None
        return {"replayed": ok, "problems": problems, "verdict": cert.verdict, "route": cert.route}
    if args.input is None:
        raise InputError("certify needs a presentation")
    loaded = load_input(args.input)
    if loaded.presentation is None:
        raise InputError("certify needs a presentation, not a general complex")
    a = args.a.split(",") if args.a else None
    try:
        cert = certify_coherence(loaded.presentation, a)
    except ValueError:
        raise InputError(f"unknown letter in --a {args.a!r}") from None
    return {"verdict": cert.verdict, "route": cert.route, "certificate": cert.to_dict()}


def _diagram_dict(d, x: TwoComplex) -> dict:
    return {
        "area": d.area,
        "boundary": _fmt(x, d.boundary_word()),
        "faces": [[c.x_face, c.offset, c.orientation, list(c.darts)] for c in d.faces],
        "alpha": sorted([a, b] for a, b in d.alpha.items()),
        "labels": sorted([k, x.edge_name(e), s] for k, (e, s) in d.label.items()),
        "outer": list(d.boundary),
    }


def cmd_word(args) -> dict:
    loaded = load_input(args.input)
    w = _word(loaded, args.decide)
    res = decide_trivial(loaded.x, w, args.max_area)
    out = {"word": _fmt(loaded.x, w), "verdict": res.verdict, "area": res.area, "max_area": args.max_area}
    if res.diagram is not None:
        out["diagram"] = _diagram_dict(res.diagram, loaded.x)
    return out


def cmd_spell(args) -> dict:
    loaded = load_input(args.input)
    x = loaded.x
    w = cyclic_reduce(_word(loaded, args.word))
    if not w:
        raise InputError("the word reduces to the empty word")
    res = decide_trivial(x, w, args.max_area)
    if res.verdict != "Trivial":
        return {"word": _fmt(x, w), "trivial": res.verdict, "witness": None}
    a = _a_edges(loaded, args.a)
    try:
        wit = verify_spelling(x, w, a, args.form)
    except ValueError as exc:
        raise InputError(str(exc)) from None
    out = {"word": _fmt(x, w), "trivial": res.verdict, "A": [x.edge_name(e) for e in sorted(a)], "form": args.form}
    if wit is None:
        out["witness"] = None
        out["inconsistency"] = "no spelling witness for a trivial word"
    else:
        out["witness"] = {"Q": _fmt(x, wit.q), "S": _fmt(x, wit.s), "position": wit.position,
                          "offset": wit.offset, "orientation": wit.orientation, "b_letters": wit.b_letters}
    return out


def cmd_diagrams(args) -> dict:
    loaded = load_input(args.input)
    x = loaded.x
    w = cyclic_reduce(_word(loaded, args.boundary))
    if not w:
        raise InputError("the boundary reduces to the empty word")
    res = enumerate_minimal_diagrams(x, w, args.max_area, AreaOracle(x))
    sep = _separator(loaded, args.mode, _a_edges(loaded, args.a))
    items = []
    for d in res.diagrams:
        rep = structure_report(d, x, sep)
        items.append({"diagram": _diagram_dict(d, x), "valid": validate_diagram(d, x).valid,
                      "extreme": rep.extreme, "dangling": rep.dangling, "violations": rep.violations()})
    out = {"boundary": _fmt(x, w), "status": res.status, "min_area": res.min_area, "count": len(items),
           "diagrams": items}
    if args.svg and res.diagrams:
        from .pullback import pullback_separator
        from .render import render_svg

        d = res.diagrams[0]
        Path(args.svg).write_text(render_svg(d, x, pullback_separator(d, x, sep)))
        out["svg"] = args.svg
    return out


def cmd_enlarge(args) -> dict:
    loaded = load_input(args.input)
    x = loaded.x
    seed = _a_edges(loaded, args.seed_edges)
    unit = _a_edges(loaded, args.unit) if args.unit else frozenset(range(len(x.edges))) - seed or seed
    w = scheme_weights(x, unit)
    res = enlargement_loop(x, seed, (), w, args.budget, args.max_area)
    return {
        "status": res.status,
        "unit": [x.edge_name(e) for e in sorted(unit)],
        "perimeters": [str(p) for p in res.perimeters],
        "strictly_decreasing": res.strictly_decreasing,
        "trace": [{"loop": _fmt(x, s.loop), "attached_faces": s.attached_faces, "perimeter": str(s.perimeter)}
                  for s in res.trace],
    }


# ------------------------------------------------------------------ parser

def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="windmills", description=__doc__)
    sub = ap.add_subparsers(dest="command", required=True)

    def add(name, fn, needs_input=True, **kw):
        p = sub.add_parser(name, **kw)
        if needs_input:
            p.add_argument("input", help="presentation text, .pres file or complex file")
        p.set_defaults(fn=fn)
        return p

    add("parse", cmd_parse, help="echo the normalized presentation")
    for name, fn, h in (("graph", cmd_graph, "separator and essence graphs"),
                        ("windmill", cmd_windmill, "windmill predicate and splitting certificate")):
        p = add(name, fn, help=h)
        p.add_argument("--mode", choices=[BOUNDARY, GENERATOR], default=GENERATOR)
        p.add_argument("--a", help="comma separated letters of A")
    p = add("hypotheses", cmd_hypotheses, help="inclusion routes for A")
    p.add_argument("--route", choices=list(ROUTES))
    p.add_argument("--a")
    p = sub.add_parser("certify", help="coherence certificate")
    p.add_argument("input", nargs="?")
    p.add_argument("--a")
    p.add_argument("--verify-certificate", metavar="REPORT", help="replay a stored certificate or report")
    p.set_defaults(fn=cmd_certify)
    p = add("word", cmd_word, help="decide triviality of a word")
    p.add_argument("--decide", required=True, metavar="WORD")
    p.add_argument("--max-area", type=int, default=None)
    p = add("spell", cmd_spell, help="spelling witness for a trivial word")
    p.add_argument("--word", required=True)
    p.add_argument("--a")
    p.add_argument("--form", choices=[BLOCK_FORM, SINGLE_B_FORM], default=BLOCK_FORM)
    p.add_argument("--max-area", type=int, default=None)
    p = add("diagrams", cmd_diagrams, help="minimal diagrams for a boundary word")
    p.add_argument("--boundary", required=True)
    p.add_argument("--max-area", type=int, default=None)
    p.add_argument("--svg")
    p.add_argument("--mode", choices=[BOUNDARY, GENERATOR], default=GENERATOR)
    p.add_argument("--a")
    p = add("enlarge", cmd_enlarge, help="perimeter-reducing enlargement loop")
    p.add_argument("--seed-edges", required=True)
    p.add_argument("--unit", help="letters with weight 1 (default: letters outside the seed, else the seed)")
    p.add_argument("--budget", type=int, default=10)
    p.add_argument("--max-area", type=int, default=None)
    return ap


def run_cli(argv: list[str] | None = None, stdout=None) -> int:
    stdout = stdout or sys.stdout
    argv = list(sys.argv[1:] if argv is None else argv)
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    start = time.perf_counter()
    try:
        if getattr(args, "max_area", "absent") is None:
            args.max_area = _default_max_area()
        result = args.fn(args)
        status = 0
    except InputError as exc:
        result, status = {"error": str(exc)}, 3
    report = {"schema": SCHEMA, "command": argv, "result": result,
              "timings": {"seconds": round(time.perf_counter() - start, 4)}}
    stdout.write(json.dumps(report, sort_keys=True, indent=2) + "\n")
    return status


def main() -> None:
    sys.exit(run_cli())

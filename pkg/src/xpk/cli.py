"""Command line front end. Every command prints one JSON report to stdout.

Exit codes: 0 success, 2 invalid input, 3 when a decision was requested and
only an inconclusive verdict could be reached.
"""

from __future__ import annotations

import argparse
import logging
import os
import sys
import time
from concurrent.futures import ProcessPoolExecutor
from fractions import Fraction

import numpy as np

from . import __version__
from .errors import XpkError
from .expansion import min_separator_exact, separator_lower_bound, vertex_expansion_exact
from .extraction import (
    DenseWitness,
    ExtractionParams,
    derive_thresholds,
    extract_expander,
    verify_outcome,
)
from .games.criteria import criterion_sums
from .games.engine import SIDE_A, SIDE_B, GameState, Kind, play_game
from .games.families import parse_family, triangles
from .games.pipeline import maker_minor_pipeline
from .games.strategies import STRATEGIES, make_strategy
from .graph import fingerprint, read_edge_list, write_edge_list
from .minors import clique_minor_exact, clique_minor_greedy, max_clique_minor_exact
from .random_graphs import GnpSpec, giant_fraction_limit, giant_pipeline, gnp
from .report import SCHEMA, dumps
from .sparsity import Status, local_sparsity_verdict, touch_bound_verdict
from .spectral import cheeger_exact, lambda1

log = logging.getLogger("xpk")

EXIT_OK, EXIT_INVALID, EXIT_INCONCLUSIVE = 0, 2, 3


def _fraction(text: str) -> Fraction:
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(f"not a number: {text!r}")


def _graph_input(path):
    G = read_edge_list(path)
    return G, {"path": str(path), "fingerprint": fingerprint(G), "n": G.n, "m": G.m}


# -- commands -------------------------------------------------------------

def cmd_gen(a):
    G = gnp(GnpSpec(a.n, a.p, a.seed))
    if a.out:
        write_edge_list(G, a.out)
    return EXIT_OK, {"n": G.n, "m": G.m, "fingerprint": fingerprint(G), "out": a.out}, None


def _trace_rows(trace):
    return [dict(iteration=s.iteration, size=s.size, edges=s.edges, action=s.action,
                 keep_steps=s.keep_steps, lambda1=s.lambda1, cut_size=s.cut_size,
                 cut_boundary=s.cut_boundary, cut_touching=s.cut_touching, removed=s.removed)
            for s in trace]


def outcome_payload(out):
    if isinstance(out, DenseWitness):
        return {"outcome": "DenseWitness", "vertices": len(out.w), "w": out.w,
                "spanned_edges": out.spanned_edges, "trace": _trace_rows(out.trace)}
    return {"outcome": "ExpanderCertificate", "vertices": len(out.vertices), "members": out.vertices,
            "lambda_achieved": out.lambda_achieved, "gamma_lower_bound": out.gamma_lower_bound,
            "trace": _trace_rows(out.trace)}


def cmd_extract(a):
    G, info = _graph_input(a.input)
    p = ExtractionParams(a.c1, a.c2, a.alpha, a.delta)
    th = derive_thresholds(p)
    out = extract_expander(G, p, tol=a.tol)
    ver = verify_outcome(G, p, out)
    res = outcome_payload(out)
    res["verification"] = ver
    res["thresholds"] = {"lambda_threshold": th.lambda_threshold, "gamma_algorithmic": th.gamma_algorithmic,
                         "shrink_steps": th.shrink_steps, "peel_slack": th.peel_slack}
    return EXIT_OK, res, info


def cmd_verify(a):
    G, info = _graph_input(a.input)
    code = EXIT_OK
    if a.mode == "cheeger":
        ch = cheeger_exact(G)
        lam = lambda1(G).lambda1
        h = float(ch.h)
        ok = h * h / 2 - 1e-9 <= lam <= 2 * h + 1e-9
        res = {"h": ch.h, "h_float": h, "witness": ch.witness, "lambda1": lam,
               "sandwich": "pass" if ok else "fail"}
    elif a.mode == "expansion":
        prof = vertex_expansion_exact(G)
        res = {"gamma": prof.gamma, "gamma_float": float(prof.gamma), "worst_set": prof.worst_set}
    elif a.mode == "separator":
        sep = min_separator_exact(G)
        res = {"separator": None if sep is None else {"S": sep.S, "A": sep.A, "B": sep.B, "size": len(sep.S)}}
        if a.with_bound:
            gamma = vertex_expansion_exact(G).gamma
            res["lower_bound"] = separator_lower_bound(gamma, G.n)
    elif a.mode == "sparsity":
        if a.c2 is None or a.alpha is None:
            raise XpkError("sparsity mode needs --c2 and --alpha")
        if a.seed is None:
            raise XpkError("sparsity mode is randomised beyond the exact tier; pass --seed")
        v = local_sparsity_verdict(G, a.c2, a.alpha, a.effort, strict=not a.non_strict, seed=a.seed)
        res = {"status": v.status, "witness": v.witness, "effort_used": v.effort_used,
               "best_density": v.best_density, "detail": v.detail}
        code = EXIT_INCONCLUSIVE if v.status is Status.INCONCLUSIVE else EXIT_OK
    else:  # touch
        if a.m is None or a.t is None:
            raise XpkError("touch mode needs --m and --t")
        v = touch_bound_verdict(G, a.m, a.t)
        res = {"status": v.status, "witness": v.witness, "detail": v.detail}
        code = EXIT_INCONCLUSIVE if v.status is Status.INCONCLUSIVE else EXIT_OK
    return code, res, info


def cmd_minor(a):
    G, info = _graph_input(a.input)
    if a.mode == "exact":
        model = clique_minor_exact(G, a.t) if a.t is not None else max_clique_minor_exact(G)
    else:
        if a.seed is None:
            raise XpkError("greedy mode is randomised; pass --seed")
        model = clique_minor_greedy(G, a.seed, a.restarts)
    res = {"found": model is not None, "order": None if model is None else model.order,
           "branch_sets": None if model is None else list(model.branch_sets)}
    return EXIT_OK, res, info


def _family(a, n):
    if a.family == "triangles":
        return triangles(n)
    with open(a.family) as fh:
        return parse_family(fh.read(), n)


def _game_one(args):
    kind, n, b, first, sa, sb, family, seed = args
    fam = triangles(n) if family == "triangles" else family
    ss = np.random.SeedSequence([seed]).spawn(2)
    st = GameState(n, b, kind, first, seed)
    A = make_strategy(sa, seed=ss[0], family=fam, b=b)
    B = make_strategy(sb, seed=ss[1], family=fam, b=b)
    r = play_game(st, A, B)
    own_a = np.flatnonzero(st.owner == SIDE_A).tolist()
    own_b = set(np.flatnonzero(st.owner == SIDE_B).tolist())
    return {"seed": seed, "edges_a": r.graph_a.m, "edges_b": r.graph_b.m,
            "a_contains_member": fam.first_contained(own_a) is not None,
            "b_blocks_all": all(own_b & set(m) for m in fam.members),
            "transcript": st.transcript()}


def _map(fn, items, jobs):
    if jobs > 1 and len(items) > 1:
        with ProcessPoolExecutor(max_workers=jobs) as ex:
            return list(ex.map(fn, items))
    return [fn(x) for x in items]


def cmd_game(a):
    fam = _family(a, a.n)
    kind = Kind(a.kind)
    first = SIDE_A if a.first == "a" else SIDE_B
    family_arg = "triangles" if a.family == "triangles" else fam
    seeds = [a.seed + i for i in range(a.seeds)]
    rows = _map(_game_one, [(kind, a.n, a.b, first, a.a_strategy, a.b_strategy, family_arg, s)
                            for s in seeds], a.jobs)
    if not a.transcripts:
        for r in rows:
            r.pop("transcript")
    cs = criterion_sums(fam, a.b)
    res = {"family": fam.tag, "family_size": len(fam), "criterion": cs, "games": rows,
           "a_edge_min": min(r["edges_a"] for r in rows),
           "blocked_all_games": sum(r["b_blocks_all"] for r in rows)}
    return EXIT_OK, res, None


def _maker_one(args):
    n, eps, b, seed, breaker = args
    r = maker_minor_pipeline(n, eps, b, seed, breaker)
    return {"seed": seed, "delta": r.delta, "maker_edges": r.maker_edges, "p1": r.props.p1,
            "p2": r.props.p2.status, "p3": r.props.p3.status, "p3_detail": r.props.p3.detail,
            "trimmed_max_degree": r.trimmed_max_degree, "degree_cap": r.degree_cap,
            "outcome": None if r.outcome is None else outcome_payload(r.outcome)["outcome"],
            "outcome_vertices": None if r.outcome is None else outcome_payload(r.outcome)["vertices"],
            "verification": r.verification, "extraction_error": r.extraction_error,
            "minor_order": r.minor_order}


def _giant_one(args):
    n, eps, seed = args
    r = giant_pipeline(n, eps, seed)
    return {"seed": seed, "giant_size": r.giant_size, "giant_fraction": r.giant_fraction,
            "giant_density": r.giant_density, "trim_count": r.trim_count,
            "trimmed_size": r.trimmed_size, "trimmed_density": r.trimmed_density,
            "trimmed_max_degree": r.trimmed_max_degree, "extraction_error": r.extraction_error,
            "outcome": None if r.extraction is None else outcome_payload(r.extraction)["outcome"],
            "verification": r.verification}


def cmd_pipeline(a):
    seeds = [a.seed + i for i in range(a.seeds)]
    if a.which == "maker-minor":
        if a.b is None:
            raise XpkError("maker-minor needs --b")
        rows = _map(_maker_one, [(a.n, a.eps, a.b, s, a.breaker) for s in seeds], a.jobs)
        res = {"runs": rows}
    else:
        rows = _map(_giant_one, [(a.n, float(a.eps), s) for s in seeds], a.jobs)
        res = {"runs": rows, "giant_fraction_limit": giant_fraction_limit(1 + float(a.eps))}
    return EXIT_OK, res, None


# -- parser ---------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="xpk", description=__doc__.splitlines()[0])
    ap.add_argument("--version", action="version", version=f"xpk {__version__}")
    sub = ap.add_subparsers(dest="command", required=True)

    g = sub.add_parser("gen", help="sample G(n, p) to an edge-list file")
    g.add_argument("--n", type=int, required=True)
    g.add_argument("--p", type=float, required=True)
    g.add_argument("--seed", type=int, required=True)
    g.add_argument("--out")
    g.set_defaults(func=cmd_gen)

    e = sub.add_parser("extract", help="expander-or-dense-set extraction")
    e.add_argument("--in", dest="input", required=True)
    e.add_argument("--c1", type=_fraction, required=True)
    e.add_argument("--c2", type=_fraction, required=True)
    e.add_argument("--alpha", type=_fraction, required=True)
    e.add_argument("--delta", type=int, required=True, help="degree cap")
    e.add_argument("--tol", type=float)
    e.set_defaults(func=cmd_extract)

    v = sub.add_parser("verify", help="exact and heuristic verifiers")
    v.add_argument("--mode", choices=["expansion", "cheeger", "sparsity", "separator", "touch"],
                   required=True)
    v.add_argument("--in", dest="input", required=True)
    v.add_argument("--c2", type=_fraction)
    v.add_argument("--alpha", type=_fraction)
    v.add_argument("--effort", type=int, default=10 ** 6)
    v.add_argument("--non-strict", action="store_true", help="sparsity bound 'at most' instead of 'fewer than'")
    v.add_argument("--m", type=int)
    v.add_argument("--t", type=int)
    v.add_argument("--seed", type=int)
    v.add_argument("--with-bound", action="store_true", help="separator: add the expansion lower bound")
    v.set_defaults(func=cmd_verify)

    m = sub.add_parser("minor", help="clique minors")
    m.add_argument("--mode", choices=["exact", "greedy"], required=True)
    m.add_argument("--in", dest="input", required=True)
    m.add_argument("--t", type=int)
    m.add_argument("--seed", type=int)
    m.add_argument("--restarts", type=int, default=10)
    m.set_defaults(func=cmd_minor)

    gm = sub.add_parser("game", help="play seeded positional games")
    gm.add_argument("--kind", choices=[k.value for k in Kind], required=True)
    gm.add_argument("--n", type=int, required=True)
    gm.add_argument("--b", type=int, required=True)
    gm.add_argument("--a-strategy", choices=STRATEGIES, default="random")
    gm.add_argument("--b-strategy", choices=STRATEGIES, default="random")
    gm.add_argument("--family", default="triangles", help="'triangles' or a family file")
    gm.add_argument("--first", choices=["a", "b"], default="a")
    gm.add_argument("--seeds", type=int, default=1, help="number of games")
    gm.add_argument("--seed", type=int, required=True, help="first seed")
    gm.add_argument("--jobs", type=int, default=1)
    gm.add_argument("--transcripts", action="store_true")
    gm.set_defaults(func=cmd_game)

    pp = sub.add_parser("pipeline", help="maker-minor or giant-component pipelines")
    pp.add_argument("which", choices=["maker-minor", "giant"])
    pp.add_argument("--n", type=int, required=True)
    pp.add_argument("--eps", type=_fraction, required=True)
    pp.add_argument("--b", type=int)
    pp.add_argument("--breaker", choices=["random", "greedy"], default="random")
    pp.add_argument("--seeds", type=int, default=1)
    pp.add_argument("--seed", type=int, required=True)
    pp.add_argument("--jobs", type=int, default=1)
    pp.set_defaults(func=cmd_pipeline)
    return ap


def main(argv=None) -> int:
    logging.basicConfig(level=os.environ.get("XPK_LOG", "WARNING").upper(), stream=sys.stderr,
                        format="%(levelname)s %(name)s: %(message)s")
    argv = list(sys.argv[1:] if argv is None else argv)
    ap = build_parser()
    try:
        a = ap.parse_args(argv)
    except SystemExit as e:
        return int(e.code or 0)
    t0 = time.perf_counter()
    try:
        code, result, info = a.func(a)
    except (XpkError, OSError, ValueError) as e:
        print(f"xpk {a.command}: error: {e}", file=sys.stderr)
        return EXIT_INVALID
    params = {k: v for k, v in vars(a).items() if k not in ("func", "command")}
    report = {"schema": SCHEMA, "version": __version__, "command": ["xpk", *argv],
              "params": params, "input": info, "seed": getattr(a, "seed", None),
              "result": result, "timings": {"total_s": time.perf_counter() - t0}}
    print(dumps(report))
    return code


if __name__ == "__main__":
    sys.exit(main())

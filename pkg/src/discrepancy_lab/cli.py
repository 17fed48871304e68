"""Command-line surface: batch analysis with JSON/CSV emission.

Subcommands: gen, disc (exact | l2), haar-spectrum, certify (atom |
halasz2d | riesz3d), graphs (enum | classify | prodx | beckgain), lemma5,
constants, sumchain.  Machine-readable JSON goes to stdout; certificates and
norm-ratio rows can be appended to versioned CSV results tables.

Exit codes: 0 ok, 2 usage, 3 budget exceeded, 4 domain error.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from fractions import Fraction

from . import constants as consts
from . import graphs as graphmod
from . import tables
from .dyadic import boxes_of_shape
from .errors import BudgetExceeded, DiscrepancyLabError, DomainError, UsageError
from .gridfn import lp_power_exact
from .pointset import (
    generate,
    haar_coefficient,
    l2_discrepancy_exact,
    l2_discrepancy_sq_exact,
    load_points,
    save_points,
    star_discrepancy_exact,
)
from .riesz import build_halasz, build_psi, certify

_EXIT_USAGE = 2
_EXIT_BUDGET = 3
_EXIT_DOMAIN = 4


def _emit(payload, fmt: str = "json") -> None:
    if fmt == "json":
        print(json.dumps(payload, sort_keys=True, default=str))
    else:
        rows = payload if isinstance(payload, list) else [payload]
        if not rows:
            return
        keys = sorted(rows[0])
        print(",".join(keys))
        for row in rows:
            print(",".join(str(row.get(k, "")) for k in keys))


def _load(args) -> "PointSet":
    if args.points is None:
        raise UsageError("--points PATH is required")
    return load_points(args.points)


def _shapes_up_to(total: int, dimension: int):
    if dimension == 1:
        for k in range(total + 1):
            yield (k,)
    elif dimension == 2:
        for k1 in range(total + 1):
            for k2 in range(total + 1 - k1):
                yield (k1, k2)
    else:
        for k1 in range(total + 1):
            for k2 in range(total + 1 - k1):
                for k3 in range(total + 1 - k1 - k2):
                    yield (k1, k2, k3)


def _cmd_gen(args) -> int:
    ps = generate(args.kind, args.n_points, args.dimension, seed=args.seed)
    if args.out:
        save_points(ps, args.out)
        _emit({"written": args.out, "label": ps.label, "count": ps.size})
    else:
        for p in ps.points:
            print(" ".join(str(float(c)) for c in p))
    return 0


def _cmd_disc(args) -> int:
    ps = _load(args)
    if args.which == "exact":
        rep = star_discrepancy_exact(ps, budget_corners=args.budget_corners)
        _emit({
            "value": rep.value,
            "witness": [float(w) for w in rep.witness],
            "semantics": rep.semantics,
            "value_exact": str(rep.value_exact),
            "n_points": ps.size,
            "dimension": ps.dimension,
        }, args.format)
    else:
        _emit({
            "value": l2_discrepancy_exact(ps),
            "value_sq_exact": str(l2_discrepancy_sq_exact(ps)),
            "n_points": ps.size,
            "dimension": ps.dimension,
        }, args.format)
    return 0


def _cmd_haar_spectrum(args) -> int:
    ps = _load(args)
    rows = []
    for shape in _shapes_up_to(args.max_total, ps.dimension):
        for box in boxes_of_shape(shape):
            coef = haar_coefficient(ps, box)
            rows.append({
                "shape": "x".join(map(str, shape)),
                "offsets": "x".join(str(j.offset) for j in box.intervals),
                "coefficient": float(coef),
                "coefficient_exact": str(coef),
            })
    _emit(rows, args.format)
    return 0


def _cmd_certify(args) -> int:
    ps = _load(args)
    if args.which == "atom":
        best = None
        for shape in _shapes_up_to(args.max_total, ps.dimension):
            for box in boxes_of_shape(shape):
                coef = haar_coefficient(ps, box)
                bound = abs(coef) / box.volume
                if best is None or bound > best[0]:
                    from .dyadic import SignedHaarAtom
                    sign = 1 if coef >= 0 else -1
                    best = (bound, SignedHaarAtom(box, sign))
        if best is None:
            raise UsageError("no candidate atoms")
        cert = certify(ps, best[1])
    elif args.which == "halasz2d":
        phi = build_halasz(ps, Fraction(args.gamma).limit_denominator(10 ** 6),
                           budget_cells=args.budget_cells)
        cert = certify(ps, phi)
    else:  # riesz3d
        if args.n is None:
            raise UsageError("--n is required for riesz3d")
        psi = build_psi(ps, args.n, epsilon=args.eps, a=args.a, b=args.b,
                        q=args.q, seed=args.seed)
        cert = certify(ps, psi)
    payload = {
        "lower_bound": cert.lower_bound,
        "inner_product": cert.inner_product,
        "l1_norm": cert.l1_norm.value,
        "test_function": cert.test_function,
        "point_set": cert.point_set_label,
    }
    star = None
    if args.with_star:
        star = star_discrepancy_exact(ps, budget_corners=args.budget_corners)
        payload["exact_star"] = star.value
        payload["sound"] = cert.lower_bound <= star.value + 1e-9
    _emit(payload, args.format)
    if args.results and args.which == "riesz3d":
        psi_grid = psi.product_grid()
        row = {
            "n": psi.n, "q": psi.q, "a": psi.a, "b": psi.b,
            "epsilon": psi.epsilon,
            "norm_psi_1": float(lp_power_exact(psi_grid, 1)),
            "norm_psi_not_1": float(lp_power_exact(psi.not_grid(), 1)),
            "inner_sd": cert.inner_product,
            "certificate": cert.lower_bound,
            "exact_star": star.value if star is not None else "",
        }
        tables.append_row(args.results, tables.RIESZ_COLUMNS, row)
    return 0


def _graph_from_arg(args) -> "TwoColoredGraph":
    if args.graph is None:
        raise UsageError("--graph JSON (inline or @file) is required")
    text = args.graph
    if text.startswith("@"):
        with open(text[1:]) as fh:
            text = fh.read()
    return graphmod.graph_from_json(text)


def _cmd_graphs(args) -> int:
    if args.which == "enum":
        items = graphmod.enumerate_admissible(range(1, args.vertices + 1))
        rows = []
        for graph, decomp in items:
            record = graphmod.graph_to_json(graph)
            record["cliques2"] = [sorted(c) for c in decomp.cliques2]
            record["cliques3"] = [sorted(c) for c in decomp.cliques3]
            if graph.is_connected():
                cls = graphmod.classify(graph)
                record["class"], record["t"] = cls.kind, cls.t
            rows.append(record)
        _emit({"count": len(rows), "graphs": rows}, args.format)
        return 0
    graph = _graph_from_arg(args)
    if args.which == "classify":
        cls = graphmod.classify(graph)
        _emit({"class": cls.kind, "t": cls.t}, args.format)
        return 0
    if args.which == "prodx":
        grid = graphmod.prod_x(graph, args.n, args.q, sign_rule=args.sign_rule,
                               seed=args.seed)
        xs = graphmod.coincidence_set(graph, args.n, args.q)
        _emit({
            "x_size": xs.size,
            "integral": str(grid.integral()),
            "l1": float(lp_power_exact(grid, 1)),
            "resolution": list(grid.resolution),
        }, args.format)
        return 0
    # beckgain
    record = graphmod.verify_beckgain(graph, args.n, args.q, args.l,
                                      a=args.a, b=args.b,
                                      sign_rule=args.sign_rule, seed=args.seed)
    _emit(record, args.format)
    if args.results:
        row = {
            "n": args.n, "q": args.q, "a": args.a, "b": args.b,
            "epsilon": math.log(args.q) / math.log(args.n),
            "graph_id": json.dumps(record["graph"], sort_keys=True),
            "class": record["class"], "t": record["t"],
            "measured": record["measured"], "bound": record["bound"],
            "ratio": record["ratio"],
        }
        tables.append_row(args.results, tables.GRAPH_COLUMNS, row)
    return 0


def _cmd_lemma5(args) -> int:
    record = consts.lemma5_verify(args.v, args.l, args.k)
    _emit({
        "v": record["v"], "l": record["l"], "k": record["k"],
        "max_ratio": float(record["max_ratio"]),
        "max_ratio_exact": str(record["max_ratio"]),
        "argmax": list(record["argmax"]),
        "compositions": record["compositions"],
        "stationary_lambda": record["stationary"]["lambda"],
        "stationary_surrogate_log": record["stationary"]["surrogate_log"],
    }, args.format)
    return 0


def _cmd_constants(args) -> int:
    _emit(consts.constants_report(args.grid_step), args.format)
    return 0


def _cmd_sumchain(args) -> int:
    v_values = [int(tok) for tok in args.v.split(",")]
    _emit(consts.sum_chain_report(v_values, args.n, args.alpha, args.q),
          args.format)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="disclab",
        description="star-discrepancy lower-bound laboratory",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--format", choices=("json", "csv"), default="json")
        p.add_argument("--seed", type=int, default=None)
        p.add_argument("--budget-cells", type=int, default=None)

    p = sub.add_parser("gen", help="generate a point set")
    p.add_argument("--kind", required=True,
                   choices=("vanDerCorput", "hammersley", "random", "grid"))
    p.add_argument("--n-points", type=int, required=True)
    p.add_argument("--dimension", type=int, required=True)
    p.add_argument("--out", default=None)
    common(p)
    p.set_defaults(fn=_cmd_gen)

    p = sub.add_parser("disc", help="exact discrepancy norms")
    p.add_argument("which", choices=("exact", "l2"))
    p.add_argument("--points", required=True)
    p.add_argument("--budget-corners", type=int, default=1 << 22)
    common(p)
    p.set_defaults(fn=_cmd_disc)

    p = sub.add_parser("haar-spectrum", help="Haar coefficients of D_N")
    p.add_argument("--points", required=True)
    p.add_argument("--max-total", type=int, default=4,
                   help="max level sum of emitted box shapes")
    common(p)
    p.set_defaults(fn=_cmd_haar_spectrum)

    p = sub.add_parser("certify", help="duality lower-bound certificates")
    p.add_argument("which", choices=("atom", "halasz2d", "riesz3d"))
    p.add_argument("--points", required=True)
    p.add_argument("--gamma", type=float, default=0.5)
    p.add_argument("--n", type=int, default=None)
    p.add_argument("--eps", type=float, default=None)
    p.add_argument("--q", type=int, default=None)
    p.add_argument("--a", type=float, default=1.0)
    p.add_argument("--b", type=float, default=0.24)
    p.add_argument("--max-total", type=int, default=6)
    p.add_argument("--with-star", action="store_true",
                   help="also compute the exact star discrepancy")
    p.add_argument("--budget-corners", type=int, default=1 << 22)
    p.add_argument("--results", default=None, help="append to a results CSV")
    common(p)
    p.set_defaults(fn=_cmd_certify)

    p = sub.add_parser("graphs", help="two-colored coincidence graphs")
    p.add_argument("which", choices=("enum", "classify", "prodx", "beckgain"))
    p.add_argument("--vertices", type=int, default=3)
    p.add_argument("--graph", default=None,
                   help="graph JSON, inline or @path")
    p.add_argument("--n", type=int, default=6)
    p.add_argument("--q", type=int, default=3)
    p.add_argument("--l", type=int, default=1)
    p.add_argument("--a", type=float, default=1.0)
    p.add_argument("--b", type=float, default=0.24)
    p.add_argument("--sign-rule", default="allPlus")
    p.add_argument("--results", default=None)
    common(p)
    p.set_defaults(fn=_cmd_graphs)

    p = sub.add_parser("lemma5", help="composition inequality brute force")
    p.add_argument("--v", type=int, required=True)
    p.add_argument("--l", type=int, required=True)
    p.add_argument("--k", type=int, required=True)
    common(p)
    p.set_defaults(fn=_cmd_lemma5)

    p = sub.add_parser("constants", help="closed-form constants report")
    p.add_argument("--grid-step", type=float, default=1e-6)
    common(p)
    p.set_defaults(fn=_cmd_constants)

    p = sub.add_parser("sumchain", help="tail-sum estimates vs bounds")
    p.add_argument("--v", required=True, help="comma-separated component counts")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--alpha", type=float, required=True)
    p.add_argument("--q", type=int, required=True)
    common(p)
    p.set_defaults(fn=_cmd_sumchain)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return _EXIT_USAGE if exc.code not in (0, None) else 0
    try:
        return args.fn(args)
    except UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return _EXIT_USAGE
    except BudgetExceeded as exc:
        print(f"budget exceeded: {exc}", file=sys.stderr)
        return _EXIT_BUDGET
    except (DomainError, DiscrepancyLabError) as exc:
        print(f"domain error: {exc}", file=sys.stderr)
        return _EXIT_DOMAIN


if __name__ == "__main__":
    sys.exit(main())

"""Command-line front end.

Subcommands: info, graph, spectrum, spherical, heat, theta, verify. All
output is deterministic (identical invocations give byte-identical files)
and every document embeds the resolved configuration plus the artifact
version. Exit codes: 0 success, 1 verification failure, 2 invalid input.
"""

import argparse
import os
import sys

import numpy as np

from . import __version__
from .export import dumps_csv, dumps_json
from .field import field_context, find_nonsquare
from .heat import heat_kernel_oracle, heat_kernel_spectral
from .spherical import radial_eigenbasis
from .theta import theta_consistency_report
from .uhp import build_graph, degenerate_radii, orbit_sizes, radii_order
from .verify import run_battery

EXIT_OK = 0
EXIT_VERIFY_FAILED = 1
EXIT_BAD_INPUT = 2

DEFAULT_MAX_Q = 101


def _max_q():
    raw = os.environ.get("FUHP_MAX_Q", "")
    try:
        return int(raw) if raw else DEFAULT_MAX_Q
    except ValueError:
        raise ValueError(f"FUHP_MAX_Q must be an integer, got {raw!r}")


def _resolve_ctx(args):
    q = args.q
    if q > _max_q():
        raise ValueError(f"q={q} exceeds FUHP_MAX_Q={_max_q()}")
    delta = None if args.delta == "auto" else int(args.delta)
    return field_context(q, delta)


def _config_doc(ctx, args, r_s=None, extra=None):
    cfg = {
        "q": ctx.q,
        "delta": ctx.delta,
        "delta_requested": args.delta,
    }
    if r_s is not None:
        cfg["r_s"] = r_s
    if getattr(args, "t", None) is not None:
        cfg["t_grid"] = _parse_t(args.t)
    cfg.update(extra or {})
    return cfg


def _parse_t(text):
    try:
        return [float(s) for s in text.split(",") if s != ""]
    except ValueError:
        raise ValueError(f"--t expects a comma-separated list of times, got {text!r}")


def _radii_arg(ctx, r_s):
    """Resolve --r-s: a single regular radius, or every one for 'all-regular'."""
    if r_s == "all-regular":
        deg = set(degenerate_radii(ctx))
        return [r for r in range(ctx.q) if r not in deg]
    try:
        return [int(r_s) % ctx.q]
    except (TypeError, ValueError):
        raise ValueError(f"--r-s expects an integer radius or 'all-regular', got {r_s!r}")


def _emit(args, doc, csv_maker):
    """Write the document in the requested format to --out (default stdout)."""
    if args.format == "json":
        text = dumps_json(doc)
    else:
        header, rows = csv_maker(doc)
        text = dumps_csv(header, rows, preamble={"config": doc["config"], "version": doc["version"]})
    if args.out and args.out != "-":
        with open(args.out, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _document(config, data):
    return {"config": config, "version": __version__, "data": data}


def cmd_info(args):
    ctx = _resolve_ctx(args)
    deg0, deg1 = degenerate_radii(ctx)
    data = {
        "q": ctx.q,
        "delta": ctx.delta,
        "base_generator": ctx.g,
        "extension_generator": [ctx.zeta.a, ctx.zeta.b],
        "smallest_nonsquare": find_nonsquare(ctx.q),
        "vertices": ctx.q * (ctx.q - 1),
        "degenerate_radii": [deg0, deg1],
        "orbit_sizes": {str(r): s for r, s in sorted(orbit_sizes(ctx).items())},
    }
    doc = _document(_config_doc(ctx, args), data)

    def csv_maker(doc):
        rows = []
        for k, v in doc["data"].items():
            if isinstance(v, dict):
                continue
            rows.append([k, " ".join(str(x) for x in v) if isinstance(v, list) else v])
        rows += [[f"orbit_size_r{r}", s] for r, s in sorted(doc["data"]["orbit_sizes"].items())]
        return ["key", "value"], rows

    _emit(args, doc, csv_maker)
    return EXIT_OK


def cmd_graph(args):
    ctx = _resolve_ctx(args)
    if args.r_s == "all-regular":
        raise ValueError("graph export needs a single radius; 'all-regular' applies elsewhere")
    (r_s,) = _radii_arg(ctx, args.r_s)
    graph = build_graph(ctx, r_s)
    edges = [[int(i), int(j)] for i, j in zip(*np.nonzero(graph.adjacency)) if i < j]
    data = {
        "vertices": [[z.x, z.y] for z in graph.points],
        "edges": edges,
        "degree": ctx.q + 1,
    }
    doc = _document(_config_doc(ctx, args, r_s=r_s), data)

    def csv_maker(doc):
        n = len(doc["data"]["vertices"])
        header = ["vertex"] + [f"v{j}" for j in range(n)]
        rows = [[f"v{i}"] + [int(x) for x in graph.adjacency[i]] for i in range(n)]
        return header, rows

    _emit(args, doc, csv_maker)
    return EXIT_OK


def _spectrum_block(ctx, r_s):
    graph = build_graph(ctx, r_s)
    w = np.linalg.eigvalsh(graph.adjacency.astype(float))[::-1]
    clustered = []
    for x in w:
        if clustered and abs(clustered[-1][0] - x) <= 1e-8:
            clustered[-1][1] += 1
        else:
            clustered.append([float(x), 1])
    return {
        "r_s": r_s,
        "adjacency_spectrum": [float(x) for x in w],
        "eigenvalues": [c[0] for c in clustered],
        "multiplicities": [c[1] for c in clustered],
        "laplacian_eigenvalues": [float(ctx.q + 1 - c[0]) for c in clustered],
    }


def cmd_spectrum(args):
    ctx = _resolve_ctx(args)
    radii_list = _radii_arg(ctx, args.r_s)
    blocks = [_spectrum_block(ctx, r) for r in radii_list]
    single = len(blocks) == 1
    data = blocks[0] if single else {"runs": blocks}
    doc = _document(
        _config_doc(ctx, args, r_s=radii_list[0] if single else "all-regular"), data
    )

    def csv_maker(doc):
        prefix = [] if single else ["r_s"]
        header = prefix + ["adjacency_eigenvalue", "multiplicity", "laplacian_eigenvalue"]
        rows = [
            ([] if single else [b["r_s"]]) + [e, m, l]
            for b in blocks
            for e, m, l in zip(b["eigenvalues"], b["multiplicities"], b["laplacian_eigenvalues"])
        ]
        return header, rows

    _emit(args, doc, csv_maker)
    return EXIT_OK


def _spherical_block(ctx, r_s):
    table = radial_eigenbasis(build_graph(ctx, r_s))
    return table, {
        "r_s": r_s,
        "radii": table.radii,
        "orbit_sizes": [int(s) for s in table.orbit_sizes],
        "rows": [
            {
                "index": i,
                "degree": int(table.degrees[i]),
                "adjacency_eigenvalue": float(table.adjacency_eigenvalues[i]),
                "laplacian_eigenvalue": float(table.laplacian_eigenvalues[i]),
                "omega": [float(x) for x in table.omega[i]],
            }
            for i in range(table.num_rows)
        ],
        "complete": table.is_complete,
    }


def cmd_spherical(args):
    ctx = _resolve_ctx(args)
    radii_list = _radii_arg(ctx, args.r_s)
    pairs = [_spherical_block(ctx, r) for r in radii_list]
    single = len(pairs) == 1
    data = pairs[0][1] if single else {"runs": [blk for _, blk in pairs]}
    doc = _document(
        _config_doc(ctx, args, r_s=radii_list[0] if single else "all-regular"), data
    )

    def csv_maker(doc):
        radii = pairs[0][0].radii  # radius order is shared across generating radii
        prefix = [] if single else ["r_s"]
        header = prefix + ["row", "degree", "adjacency_eigenvalue", "laplacian_eigenvalue"] + [
            f"omega_r{r}" for r in radii
        ]
        rows = []
        for table, blk in pairs:
            for i in range(table.num_rows):
                rows.append(
                    ([] if single else [blk["r_s"]])
                    + [i, int(table.degrees[i]),
                       float(table.adjacency_eigenvalues[i]),
                       float(table.laplacian_eigenvalues[i])]
                    + [float(x) for x in table.omega[i]]
                )
        return header, rows

    _emit(args, doc, csv_maker)
    return EXIT_OK


def cmd_heat(args):
    ctx = _resolve_ctx(args)
    t_grid = _parse_t(args.t)
    if any(t < 0 for t in t_grid):
        raise ValueError("heat kernel times must be nonnegative")
    radii = radii_order(ctx)
    blocks = []
    for r_s in _radii_arg(ctx, args.r_s):
        graph = build_graph(ctx, r_s)
        table = radial_eigenbasis(graph)
        series = []
        for t in t_grid:
            spec = heat_kernel_spectral(table, t)
            orac = heat_kernel_oracle(graph, t)
            series.append(
                {
                    "t": t,
                    "values": [spec.by_radius[r] for r in radii],
                    "oracle_deviation": max(
                        abs(spec.by_radius[r] - orac.by_radius[r]) for r in radii
                    ),
                }
            )
        blocks.append({"r_s": r_s, "radii": radii, "series": series})
    single = len(blocks) == 1
    data = blocks[0] if single else {"runs": blocks}
    doc = _document(
        _config_doc(ctx, args, r_s=blocks[0]["r_s"] if single else "all-regular"), data
    )

    def csv_maker(doc):
        prefix = [] if single else ["r_s"]
        header = prefix + ["t"] + [f"E_r{r}" for r in radii] + ["oracle_deviation"]
        rows = [
            ([] if single else [b["r_s"]]) + [s["t"]] + s["values"] + [s["oracle_deviation"]]
            for b in blocks
            for s in b["series"]
        ]
        return header, rows

    _emit(args, doc, csv_maker)
    return EXIT_OK


def cmd_theta(args):
    ctx = _resolve_ctx(args)
    t_grid = _parse_t(args.t)
    if args.classical is not None:
        # plain decimal text with the stated truncation bound
        from .export import format_float
        from .theta import classical_theta

        lines = []
        for t in t_grid:
            value, bound = classical_theta(args.classical, t, n_max=args.n_max)
            lines.append(
                f"theta({format_float(args.classical)}, {format_float(t)}i) = "
                f"{format_float(value.real)} + {format_float(value.imag)}i "
                f"(truncation bound {format_float(bound)}, n_max={args.n_max})"
            )
        text = "\n".join(lines) + "\n"
        if args.out and args.out != "-":
            with open(args.out, "w", encoding="utf-8", newline="\n") as fh:
                fh.write(text)
        else:
            sys.stdout.write(text)
        return EXIT_OK
    if args.r_s == "all-regular":
        raise ValueError("theta reports need a single generating radius")
    (r_s,) = _radii_arg(ctx, args.r_s)
    report = theta_consistency_report(ctx, r_s, t_grid)
    include_verbatim = args.mode in ("verbatim", "both")
    include_reconciled = args.mode in ("reconciled", "both")
    rows_out = []
    for row in report.rows:
        entry = {"r": row.r, "t": row.t, "oracle": row.oracle}
        if include_reconciled:
            entry["reconciled"] = row.reconciled
            entry["reconciled_deviation"] = row.reconciled_deviation
        if include_verbatim:
            entry["verbatim"] = row.verbatim
            entry["verbatim_imag"] = row.verbatim_imag
            entry["verbatim_deviation"] = row.verbatim_deviation
        rows_out.append(entry)
    data = {"rows": rows_out, "mode": args.mode}
    doc = _document(_config_doc(ctx, args, r_s=r_s, extra={"mode": args.mode}), data)

    def csv_maker(doc):
        header = list(rows_out[0].keys()) if rows_out else ["r", "t", "oracle"]
        return header, [[row[k] for k in header] for row in rows_out]

    _emit(args, doc, csv_maker)
    return EXIT_OK


def cmd_verify(args):
    q_list = [int(s) for s in (args.q_list or args.q).split(",")]
    cap = _max_q()
    for q in q_list:
        if q > cap:
            raise ValueError(f"q={q} exceeds FUHP_MAX_Q={cap}")
        field_context(q)  # validates primality early, exit 2 on bad input
    results = run_battery(q_list, include_lift=args.include_lift)
    fatal = [r for r in results if r.fatal]
    findings = [r for r in results if not r.passed and r.finding_only]
    for r in results:
        status = "PASS" if r.passed else ("FINDING" if r.finding_only else "FAIL")
        print(f"[{status}] {r.name}: {r.detail}")
    print(
        f"{len(results)} checks: {len(results) - len(fatal) - len(findings)} passed, "
        f"{len(findings)} findings, {len(fatal)} failures"
    )
    return EXIT_VERIFY_FAILED if fatal else EXIT_OK


def _add_common(p, with_rs=True, with_t=False):
    p.add_argument("--q", type=int, required=True, help="odd prime field size")
    p.add_argument("--delta", default="auto", help="non-square residue, or 'auto'")
    if with_rs:
        p.add_argument("--r-s", "--r", dest="r_s", default="1",
                       help="generating radius (regular), or 'all-regular'")
    if with_t:
        p.add_argument("--t", default="0,1", help="comma-separated times")
    p.add_argument("--format", choices=("json", "csv"), default="json")
    p.add_argument("--out", default="-", help="output path ('-' = stdout)")


def build_parser():
    parser = argparse.ArgumentParser(
        prog="fuhp",
        description="Finite upper half-plane graphs: spectra, spherical functions, "
        "heat kernels, finite theta sums, and the verification battery.",
    )
    parser.add_argument("--version", action="version", version=f"fuhp {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("info", help="resolved field context and orbit structure")
    _add_common(p, with_rs=False)
    p.set_defaults(func=cmd_info)

    p = sub.add_parser("graph", help="vertices and edges (JSON) or adjacency (CSV)")
    _add_common(p)
    p.set_defaults(func=cmd_graph)

    p = sub.add_parser("spectrum", help="adjacency spectrum with multiplicities")
    _add_common(p)
    p.set_defaults(func=cmd_spectrum)

    p = sub.add_parser("spherical", help="spherical function table")
    _add_common(p)
    p.set_defaults(func=cmd_spherical)

    p = sub.add_parser("heat", help="heat kernel time series by radius")
    _add_common(p, with_t=True)
    p.set_defaults(func=cmd_heat)

    p = sub.add_parser("theta", help="finite theta consistency report")
    _add_common(p, with_t=True)
    p.add_argument("--mode", choices=("verbatim", "reconciled", "both"), default="both")
    p.add_argument("--classical", type=float, default=None, metavar="Z",
                   help="instead: print the classical theta(Z, it) for each t as text")
    p.add_argument("--n-max", type=int, default=25, help="classical theta truncation")
    p.set_defaults(func=cmd_theta)

    p = sub.add_parser("verify", help="run the invariant battery")
    p.add_argument("--q", default="3,5,7", help="comma-separated q list")
    p.add_argument("--q-list", dest="q_list", default=None, help="alias for --q")
    p.add_argument("--include-lift", action="store_true",
                   help="also verify the subgroup-average lift (q <= 5)")
    p.set_defaults(func=cmd_verify)
    return parser


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (ValueError, ZeroDivisionError, AssertionError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_BAD_INPUT


if __name__ == "__main__":
    sys.exit(main())

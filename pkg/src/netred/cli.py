"""Command line front end.

    netred analyze <file> [--norms h2,hinf] [--triangle] [--oracle-check] [--out FILE]
    netred example <name> [--seed N] [--out FILE]

Exit codes: 0 success, 2 validation error, 3 theory-precondition refusal
(for example, bounds requested for a non-AEP partition without --triangle).
Errors are emitted as a JSON payload on stderr.
"""

from __future__ import annotations

import argparse
import json
import sys
import time

from .bounds import full_report, leaders_share_cell
from .errors import (
    InvalidPartition,
    NegativeWeight,
    UnknownExample,
)
from .graphcore import (
    is_almost_equitable,
    is_connected,
    project_to_aep_laplacian,
    reduce_graph,
)
from .netfile import (
    SCHEMA_VERSION,
    FileFormatError,
    dump_json,
    generate_example,
    network_from_payload,
    report_to_dict,
)
from .netsys import (
    assemble_error_system,
    is_synchronized,
    reduced_laplacian_spectrum,
)
from .norms import h2_norm_quadrature, hinf_norm_dc

EXIT_OK = 0
EXIT_VALIDATION = 2
EXIT_REFUSED = 3


def _fail(code: int, kind: str, message: str, **extra) -> int:
    payload = {"error": {"kind": kind, "message": message, **extra}}
    print(json.dumps(payload, indent=2), file=sys.stderr)
    return code


def _write(text: str, out_path) -> None:
    if out_path:
        with open(out_path, "w", encoding="utf-8") as handle:
            handle.write(text)
    else:
        sys.stdout.write(text)


def _oracle_checks(ns, pi, report, norms) -> dict:
    """Independent recomputation of the true errors where an oracle applies."""
    checks = {}
    error_sys = assemble_error_system(ns, pi)
    if "h2" in norms and report.true_h2_error is not None:
        quad = h2_norm_quadrature(error_sys)
        gap = abs(report.true_h2_error.value - quad.value) / max(quad.value, 1e-12)
        checks["true_h2_error_quadrature"] = {
            "value": quad.value,
            "relative_gap": gap,
            "certificate": quad.certificate,
        }
    if (
        "hinf" in norms
        and report.true_hinf_error is not None
        and report.aep
        and ns.dyn.is_single_integrator()
    ):
        dc = hinf_norm_dc(error_sys, -ns.laplacian.mat)
        gap = abs(report.true_hinf_error.value - dc.value)
        checks["true_hinf_error_dc"] = {
            "value": dc.value,
            "absolute_gap": gap,
            "certificate": dc.certificate,
        }
    return checks


def cmd_analyze(args) -> int:
    started = time.perf_counter()
    try:
        with open(args.input, "r", encoding="utf-8") as handle:
            payload = json.load(handle)
    except OSError as exc:
        return _fail(EXIT_VALIDATION, "io", f"cannot read {args.input}: {exc}")
    except json.JSONDecodeError as exc:
        return _fail(EXIT_VALIDATION, "json", f"invalid JSON in {args.input}: {exc}")
    try:
        ns, pi, options = network_from_payload(payload)
    except FileFormatError as exc:
        return _fail(EXIT_VALIDATION, "schema", str(exc), field=exc.field)
    except InvalidPartition as exc:
        return _fail(EXIT_VALIDATION, "partition", str(exc), node=exc.node)
    except (NegativeWeight, ValueError) as exc:
        return _fail(EXIT_VALIDATION, "input", str(exc))

    norms = tuple(args.norms.split(",")) if args.norms else options["norms"]
    for name in norms:
        if name not in ("h2", "hinf"):
            return _fail(EXIT_VALIDATION, "flags", f"unknown norm {name!r} in --norms")
    oracle = args.oracle_check or options["oracle_check"]
    tolerances = options["tolerances"]

    connected = is_connected(ns.laplacian, tol=tolerances.get("zero_eig_tol", 1e-9))
    aep = is_almost_equitable(ns.laplacian, pi, rtol=tolerances.get("aep_rtol", 1e-9))
    synchronized = is_synchronized(ns)

    if ns.n_leaders > 0:
        if not connected:
            return _fail(
                EXIT_REFUSED, "Disconnected", "the graph is not connected; bounds are undefined"
            )
        if not synchronized:
            return _fail(
                EXIT_REFUSED,
                "NotSynchronized",
                "the network does not synchronize; norm-based bounds are refused",
            )
        if not aep and not args.triangle:
            return _fail(
                EXIT_REFUSED,
                "NotAEP",
                "the partition is not almost equitable; rerun with --triangle to "
                "use the optimal AEP-compatible approximation route",
            )
        if not aep and args.triangle and not ns.dyn.is_single_integrator():
            return _fail(
                EXIT_REFUSED,
                "NotSingleIntegrator",
                "the triangle route applies to single-integrator agents only",
            )

    report = full_report(ns, pi, norms=norms)
    lam = ns.laplacian.spectral.eigenvalues
    lam_hat = reduced_laplacian_spectrum(ns.laplacian, pi)
    rg = reduce_graph(ns.laplacian, pi, ns.leaders)
    out = {
        "schema_version": SCHEMA_VERSION,
        "input": payload,
        "analysis": {
            "connected": connected,
            "aep": aep,
            "synchronized": synchronized,
            "leaders_share_cell": leaders_share_cell(pi, ns.leaders),
            "eigenvalues": {
                "laplacian": lam.tolist(),
                "reduced_laplacian": lam_hat.tolist(),
            },
            "reduction": {
                "laplacian_hat": rg.laplacian_hat.tolist(),
                "adjacency_hat": rg.adjacency_hat.tolist(),
                "m_hat": rg.m_hat.tolist(),
            },
        },
        "bounds": report_to_dict(report),
    }
    if not aep:
        l_aep, delta = project_to_aep_laplacian(ns.laplacian, pi)
        out["l_aep"] = {
            "matrix": l_aep.mat.tolist(),
            "delta_frobenius": delta,
            "has_negative_weights": l_aep.has_negative_weights,
        }
    if oracle:
        out["oracle_checks"] = _oracle_checks(ns, pi, report, norms)
    out["timings"] = {"total_s": time.perf_counter() - started}
    _write(dump_json(out), args.out)
    return EXIT_OK


def cmd_example(args) -> int:
    try:
        payload = generate_example(args.name, seed=args.seed)
    except UnknownExample as exc:
        return _fail(EXIT_VALIDATION, "UnknownExample", str(exc))
    _write(dump_json(payload), args.out)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="netred",
        description="Cluster-based reduction of leader-follower networks with "
        "H2/Hinf norms and a-priori error bounds",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    analyze = sub.add_parser("analyze", help="analyze a network description file")
    analyze.add_argument("input", help="path to a network JSON file")
    analyze.add_argument("--norms", help="comma-separated subset of h2,hinf")
    analyze.add_argument(
        "--triangle",
        action="store_true",
        help="allow non-AEP partitions via the optimal AEP-compatible approximation",
    )
    analyze.add_argument(
        "--oracle-check",
        action="store_true",
        help="recompute true errors with frequency-domain oracles",
    )
    analyze.add_argument("--out", help="write the report here instead of stdout")
    analyze.set_defaults(func=cmd_analyze)

    example = sub.add_parser("example", help="emit a ready-to-run input file")
    example.add_argument(
        "name", help="paper-section7 | k3-aep | random-aep | random-general"
    )
    example.add_argument("--seed", type=int, default=0, help="seed for random examples")
    example.add_argument("--out", help="write the file here instead of stdout")
    example.set_defaults(func=cmd_example)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())

"""Command-line front end: ``combsim <command> ...``.

Mode indices on the command line are 1-based.  Exit status is 0 on success
or a passing verification, 1 on a failing verification, 2 on bad input.
"""

from __future__ import annotations

import argparse
import sys

import numpy as np

from . import comb, gaussian, graphs, hankel, instances, verify
from .io import dumps_json, matrix_from_json, matrix_to_csv, report_table_csv, state_to_dict


class InputError(Exception):
    pass


def _indices(text: str | None) -> list[int]:
    if not text:
        return []
    try:
        values = [int(t) for t in text.split(",") if t.strip()]
    except ValueError:
        raise InputError(f"expected comma-separated integers, got {text!r}") from None
    if any(v < 1 for v in values):
        raise InputError("mode indices are 1-based")
    return [v - 1 for v in values]


def _schedule(text: str | None) -> list[float]:
    if text is None:
        return list(verify.DEFAULT_SCHEDULE)
    try:
        return [float(t) for t in text.split(",")]
    except ValueError:
        raise InputError(f"bad schedule {text!r}") from None


def _load_matrix_file(path: str) -> np.ndarray:
    with open(path) as fh:
        text = fh.read()
    if text.lstrip().startswith("["):
        return matrix_from_json(text)
    return np.loadtxt(path, delimiter=",", ndmin=2)


def _matrix(args, prefix: str = "") -> np.ndarray:
    shorthand = getattr(args, f"{prefix}hankel", None)
    name = getattr(args, f"{prefix}matrix", None)
    path = getattr(args, f"{prefix}matrix_file", None)
    given = [x for x in (shorthand, name, path) if x is not None]
    if len(given) != 1:
        raise InputError("give exactly one of --hankel, --matrix, --matrix-file")
    if shorthand is not None:
        return hankel.hankel_to_matrix(shorthand)
    if name is not None:
        return instances.named_matrix(name)
    return _load_matrix_file(path)


def _add_matrix_args(p):
    p.add_argument("--hankel", help="Hankel shorthand, e.g. '[0,0,0/1/0,1,0]'")
    p.add_argument("--matrix", help=f"named matrix: {', '.join(sorted(instances.NAMED))}")
    p.add_argument("--matrix-file", help="JSON array-of-arrays or CSV file")


def _emit(args, payload: dict, csv_text: str | None = None, text: str | None = None):
    if args.format == "csv":
        if csv_text is None:
            raise InputError("this command has no CSV form")
        out = csv_text
    elif args.format == "text":
        out = (text if text is not None else dumps_json(payload)).rstrip("\n") + "\n"
    else:
        out = dumps_json(payload)
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(out)
    else:
        sys.stdout.write(out)


def cmd_parse(args) -> int:
    v = hankel.parse_hankel_shorthand(args.text)
    if args.to_matrix:
        M = hankel.hankel_to_matrix(v)
        _emit(args, {"matrix": M}, matrix_to_csv(M), np.array2string(M))
        return 0
    payload = {
        "shorthand": hankel.print_hankel_shorthand(v),
        "size": v.size,
        "top": list(v.top),
        "center": v.center,
        "right": list(v.right),
    }
    _emit(args, payload, matrix_to_csv(v.values[None, :]), payload["shorthand"])
    return 0


def _comb_source(args):
    if args.config is None:
        raise InputError("--config is required (JSON file or inline JSON)")
    return comb.load_comb_config(args.config)


def cmd_build(args) -> int:
    spec, pumps = _comb_source(args)
    G = comb.build_coupling_from_pumps(spec, pumps)
    shorthand = (
        hankel.print_hankel_shorthand(G.to_hankel())
        if hankel.is_hankel(G.entries)
        else None
    )
    payload = {"modes": [str(m) for m in G.modes], "matrix": G.entries, "hankel": shorthand}
    text = f"modes: {' '.join(payload['modes'])}\n{np.array2string(G.entries)}"
    if shorthand:
        text += f"\nhankel: {shorthand}"
    _emit(args, payload, matrix_to_csv(G.entries), text)
    return 0


def cmd_spectrum(args) -> int:
    G = _matrix(args)
    spec = gaussian.squeezing_spectrum(G)
    squeezed = [
        {"quadrature": "Q" if c.q.any() else "P",
         "coefficients": c.q if c.q.any() else c.p,
         "rate": rate}
        for c, rate in spec.squeezed()
    ]
    payload = {"eigenvalues": spec.eigenvalues, "eigenvectors": spec.eigenvectors, "squeezed": squeezed}
    text = "eigenvalues: " + ", ".join(f"{x:+.12g}" for x in spec.eigenvalues)
    _emit(args, payload, matrix_to_csv(spec.eigenvalues[None, :]), text)
    return 0


def cmd_evolve(args) -> int:
    G = _matrix(args)
    state = gaussian.evolve_vacuum(G, args.r)
    _emit(args, {"r": args.r, **state_to_dict(state)}, matrix_to_csv(state.cov))
    return 0


def _report(args, report) -> int:
    _emit(args, report.to_dict(), report_table_csv(report), report.summary())
    return 0 if report.passed else 1


def cmd_verify(args) -> int:
    G = _matrix(args)
    if args.cluster is not None:
        A = instances.named_matrix(args.cluster)
    elif args.cluster_file is not None:
        A = _load_matrix_file(args.cluster_file)
    else:
        raise InputError("give --cluster or --cluster-file")
    rotations = _indices(args.rotate) if args.rotate is not None else None
    return _report(args, verify.verify_cluster(G, A, rotations, _schedule(args.schedule)))


def cmd_verify_copies(args) -> int:
    try:
        A0 = instances.BLOCKS[args.block]()
    except KeyError:
        raise InputError(f"unknown block {args.block!r}") from None
    G_N = graphs.multi_copy_generator(A0, args.n)
    return _report(args, verify.verify_copies(G_N, A0, args.n, _schedule(args.schedule)))


def cmd_reduce_cube(args) -> int:
    pair = _indices(args.pair) if args.pair else None
    if pair is not None and len(pair) != 2:
        raise InputError("--pair takes two vertices")
    schedule = _schedule(args.schedule) if args.schedule else (1.0, 2.0, 3.0)
    return _report(args, verify.verify_cube_reduction(schedule, pair))


def cmd_spurious(args) -> int:
    spec, pumps = _comb_source(args)
    targets = []
    for token in (args.target or "").split(","):
        token = token.strip()
        if not token:
            continue
        if token[-1] in "HV":
            targets.append(comb.ModeLabel(int(token[:-1]), token[-1]))
        else:
            targets.append(int(token))
    found = comb.spurious_couplings(spec, pumps, targets)
    rows = [
        {"modes": [str(a), str(b)], "sum": p.freq_sum, "interaction": p.interaction.value, "weight": p.weight}
        for a, b, p in found
    ]
    csv_text = "mode_a,mode_b,sum,interaction,weight\n" + "".join(
        f"{r['modes'][0]},{r['modes'][1]},{r['sum']},{r['interaction']},{r['weight']!r}\n" for r in rows
    )
    text = "\n".join(f"({r['modes'][0]}, {r['modes'][1]}) via pump s={r['sum']}" for r in rows) or "no spurious couplings"
    _emit(args, {"spurious": rows}, csv_text, text)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="combsim", description=__doc__.splitlines()[0])
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=["json", "csv", "text"], default="json")
    common.add_argument("--out", help="write the report here instead of stdout")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("parse", parents=[common], help="parse Hankel shorthand")
    p.add_argument("text")
    p.add_argument("--to-matrix", action="store_true")
    p.set_defaults(func=cmd_parse)

    for name, func, helptext in (
        ("build", cmd_build, "coupling matrix from a comb/pump JSON config"),
        ("spurious", cmd_spurious, "pump couplings leaving a target mode set"),
    ):
        p = sub.add_parser(name, parents=[common], help=helptext)
        p.add_argument("--config", help="JSON file path or inline JSON")
        if name == "spurious":
            p.add_argument("--target", help="comma-separated frequency indices (e.g. 1,2,3 or 1H,1V)")
        p.set_defaults(func=func)

    p = sub.add_parser("spectrum", parents=[common], help="eigenvalues and squeezed quadratures")
    _add_matrix_args(p)
    p.set_defaults(func=cmd_spectrum)

    p = sub.add_parser("evolve", parents=[common], help="covariance after evolving the vacuum")
    _add_matrix_args(p)
    p.add_argument("--r", type=float, required=True)
    p.set_defaults(func=cmd_evolve)

    p = sub.add_parser("verify", parents=[common], help="check an H-graph against a cluster graph")
    _add_matrix_args(p)
    p.add_argument("--cluster", help="named cluster matrix")
    p.add_argument("--cluster-file")
    p.add_argument("--rotate", help="1-based modes to rotate; omit to search")
    p.add_argument("--schedule", help="comma-separated r values")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("verify-copies", parents=[common], help="check a multi-copy generator")
    p.add_argument("--block", choices=sorted(instances.BLOCKS), required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--schedule")
    p.set_defaults(func=cmd_verify_copies)

    p = sub.add_parser("reduce-cube", parents=[common], help="measure two cube vertices")
    p.add_argument("--pair", help="two 1-based cube vertices (default: first edge)")
    p.add_argument("--schedule")
    p.set_defaults(func=cmd_reduce_cube)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (InputError, ValueError, KeyError, IndexError, TypeError, OSError) as exc:
        message = exc.args[0] if isinstance(exc, KeyError) and exc.args else exc
        first_line = str(message).splitlines()[0] if str(message) else type(exc).__name__
        print(f"combsim {args.command}: {first_line}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())

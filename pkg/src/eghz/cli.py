"""Command-line front end.

Exit status: 0 on success, 1 on validation errors (unphysical parameters,
malformed state files), 2 on usage errors.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from pathlib import Path

import numpy as np

from . import classify as cl
from . import explore as ex
from .numerics import eig_hermitian
from .states import (
    ExtSymParams,
    FourQubitParams,
    PhysicalityError,
    amplitudes_from_json,
    four_qubit_spectrum,
    make_four_qubit,
    matrix_from_json,
    params_from_json,
    parse_number,
    require_valid,
)
from .twirl import project_to_ghz, twirl_density_extended, twirl_pure_extended, twirl_pure_ghz

DEFAULT_SEED = 42


class InputError(ValueError):
    pass


def r12(v: float) -> float:
    return float(f"{v:.12g}")


def dumps(obj) -> str:
    return json.dumps(ex.round_floats(obj), indent=2, allow_nan=False) + "\n"


def parse_params(text: str) -> ExtSymParams:
    parts = text.split(",")
    if len(parts) != 4:
        raise InputError(f"--params needs four comma-separated values x,y1,y2,y3, got {text!r}")
    try:
        return ExtSymParams(*(parse_number(s) for s in parts))
    except (ValueError, ZeroDivisionError) as exc:
        raise InputError(f"--params: cannot parse {text!r}: {exc}") from None


def load_state(path: str) -> dict:
    """Read a state file: {"params": {...}}, {"matrix": [...]} or {"amplitudes": [...]}."""
    try:
        data = json.loads(Path(path).read_text())
    except OSError as exc:
        raise InputError(f"{path}: cannot read state file: {exc.strerror}") from None
    except json.JSONDecodeError as exc:
        raise InputError(f"{path}: invalid JSON: {exc}") from None
    if not isinstance(data, dict) or not ({"params", "matrix", "amplitudes"} & set(data)):
        raise InputError(f"{path}: expected one of the fields 'params', 'matrix' or 'amplitudes'")
    return data


def state_to_params(path: str) -> ExtSymParams:
    """Extended parameters of a state file, rounded to output precision."""
    data = load_state(path)
    try:
        if "params" in data:
            p = params_from_json(data["params"])
        elif "matrix" in data:
            p = twirl_density_extended(matrix_from_json(data["matrix"]))
        else:
            p = twirl_pure_extended(amplitudes_from_json(data["amplitudes"]))
    except (ValueError, TypeError) as exc:
        field = next(k for k in ("params", "matrix", "amplitudes") if k in data)
        raise InputError(f"{path}: field '{field}': {exc}") from None
    return ExtSymParams(*(r12(v) for v in p.as_array()))


def get_params(args) -> ExtSymParams:
    if args.params is not None:
        return parse_params(args.params)
    if getattr(args, "state", None):
        return state_to_params(args.state)
    raise InputError("one of --params or --state is required")


# ----------------------------------------------------------------- commands

def cmd_classify(args) -> str:
    p = get_params(args)
    v = cl.classify_extended(p, v0=args.v0, n_images=args.n_images, seed=args.seed)
    return dumps(v.to_json())


def cmd_twirl(args) -> str:
    data = load_state(args.state)
    try:
        if "amplitudes" in data:
            psi = amplitudes_from_json(data["amplitudes"])
            if args.family == "ghz":
                q = twirl_pure_ghz(psi)
                return dumps({"family": "ghz", "params": q.as_dict()})
            p = twirl_pure_extended(psi)
        elif "matrix" in data:
            p = twirl_density_extended(matrix_from_json(data["matrix"]))
        else:
            p = params_from_json(data["params"])
    except (ValueError, TypeError) as exc:
        field = next(k for k in ("amplitudes", "matrix", "params") if k in data)
        raise InputError(f"{args.state}: field '{field}': {exc}") from None
    if args.family == "ghz":
        return dumps({"family": "ghz", "params": project_to_ghz(p).as_dict()})
    return dumps({"family": "extended", "params": p.as_dict()})


def cmd_boundary(args) -> str:
    return ex.boundary_csv(cl.slice_boundary(args.slice, args.resolution))


def cmd_ppt(args) -> str:
    r = cl.ppt_report(get_params(args))
    return dumps({
        "alpha2": r.alpha2, "alpha3": r.alpha3, "alpha4": r.alpha4,
        "x_max": r.x_max, "margin": r.margin, "numeric_min_eig": r.numeric_min_eig, "ppt": r.ppt,
    })


def cmd_witness(args) -> str:
    kind = cl.WitnessKind.parse(args.kind, args.v0)
    return f"{r12(cl.witness_trace(kind, get_params(args)))!r}\n"


def cmd_sample(args) -> str:
    rep = ex.estimate_volumes(args.n, seed=args.seed, v0=args.v0, n_images=args.n_images, workers=args.workers)
    return dumps(rep.to_json())


def cmd_conjecture(args) -> str:
    rep = ex.conjecture_scan(args.n_pairs, seed=args.seed, v0=args.v0, n_images=args.n_images)
    return dumps(rep.to_json())


def cmd_figure(args) -> str:
    return ex.emit_figure(args.id, args.resolution, n_images=args.n_images, seed=args.seed, v0=args.v0)


def cmd_ghz_boundary(args) -> str:
    poly = cl.ghz_symmetric_separable_boundary(args.resolution)
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["y", "x"])
    for y, x in poly.vertices:
        w.writerow([ex.fmt(y), ex.fmt(x)])
    return buf.getvalue()


def cmd_four_qubit(args) -> str:
    parts = args.alphas.split(",")
    if len(parts) != 3:
        raise InputError(f"--alphas needs three comma-separated values, got {args.alphas!r}")
    try:
        f = FourQubitParams(*(parse_number(s) for s in parts), parse_number(args.beta))
    except (ValueError, ZeroDivisionError) as exc:
        raise InputError(f"cannot parse four-qubit parameters: {exc}") from None
    rho = make_four_qubit(f)
    return dumps({
        "params": {"alpha1": f.alpha1, "alpha2": f.alpha2, "alpha3": f.alpha3, "beta": f.beta},
        "diagonal": [float(d) for d in np.diag(rho).real],
        "trace": float(np.trace(rho).real),
        "eigenvalues": [float(e) for e in eig_hermitian(rho)],
        "eigenvalues_closed_form": [float(e) for e in four_qubit_spectrum(f)],
    })


# ------------------------------------------------------------------- parser

def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="eghz", description=__doc__.splitlines()[0])
    sub = ap.add_subparsers(dest="command", required=True)

    def state_args(p, state=True):
        p.add_argument("--params", help="x,y1,y2,y3 (decimals or fractions like 1/8)")
        if state:
            p.add_argument("--state", help="JSON state file with params, matrix or amplitudes")

    def common(p, v0=True, seed=True, images=False):
        if v0:
            p.add_argument("--v0", type=float, default=cl.DEFAULT_V0)
        if seed:
            p.add_argument("--seed", type=int, default=DEFAULT_SEED)
        if images:
            p.add_argument("--n-images", type=int, default=2000)
        p.add_argument("-o", "--output", help="write to this file instead of stdout")

    p = sub.add_parser("classify", help="rough SLOCC verdict")
    state_args(p)
    common(p, images=True)
    p.set_defaults(func=cmd_classify)

    p = sub.add_parser("twirl", help="project a state file onto a symmetric family")
    p.add_argument("--state", required=True)
    p.add_argument("--family", choices=["extended", "ghz"], default="extended")
    common(p, v0=False, seed=False)
    p.set_defaults(func=cmd_twirl)

    p = sub.add_parser("boundary", help="separable boundary along a slice (CSV)")
    p.add_argument("--slice", choices=sorted(cl.SLICES), required=True)
    p.add_argument("--resolution", type=int, default=101)
    common(p, v0=False, seed=False)
    p.set_defaults(func=cmd_boundary)

    p = sub.add_parser("ppt", help="PPT report")
    state_args(p)
    common(p, v0=False, seed=False)
    p.set_defaults(func=cmd_ppt)

    p = sub.add_parser("witness", help="witness expectation")
    p.add_argument("--kind", choices=["bisep", "w", "ghz"], required=True)
    state_args(p)
    common(p, seed=False)
    p.set_defaults(func=cmd_witness)

    p = sub.add_parser("sample", help="verdict frequencies over uniform polytope samples")
    p.add_argument("--n", type=int, default=1000)
    p.add_argument("--workers", type=int, default=1)
    common(p, images=True)
    p.set_defaults(func=cmd_sample)

    p = sub.add_parser("conjecture", help="scan pairs with equal (x, y1+y2+y3)")
    p.add_argument("--n-pairs", type=int, default=1000)
    common(p, images=True)
    p.set_defaults(func=cmd_conjecture)

    p = sub.add_parser("figure", help="figure data (fig3a/b/c CSV, fig4 JSON)")
    p.add_argument("--id", choices=["fig3a", "fig3b", "fig3c", "fig4"], required=True)
    p.add_argument("--resolution", type=int, default=101)
    common(p, images=True)
    p.set_defaults(func=cmd_figure, n_images=10_000)

    p = sub.add_parser("ghz-boundary", help="GHZ-symmetric separable boundary (CSV)")
    p.add_argument("--resolution", type=int, default=2001)
    common(p, v0=False, seed=False)
    p.set_defaults(func=cmd_ghz_boundary)

    p = sub.add_parser("four-qubit", help="four-qubit GHZ-like-symmetric state and spectrum")
    p.add_argument("--alphas", required=True, help="alpha1,alpha2,alpha3")
    p.add_argument("--beta", required=True)
    common(p, v0=False, seed=False)
    p.set_defaults(func=cmd_four_qubit)
    return ap


def _glue_values(argv: list[str]) -> list[str]:
    # argparse treats "-0.1,0,0,0" as an option flag; bind it to its option
    out, k = [], 0
    while k < len(argv):
        if argv[k] in ("--params", "--alphas", "--beta") and k + 1 < len(argv):
            out.append(f"{argv[k]}={argv[k + 1]}")
            k += 2
        else:
            out.append(argv[k])
            k += 1
    return out


def run(argv=None) -> int:
    argv = sys.argv[1:] if argv is None else list(argv)
    args = build_parser().parse_args(_glue_values(argv))
    try:
        out = args.func(args)
    except (InputError, PhysicalityError, ex.InfeasibleHullError, ValueError) as exc:
        print(f"eghz {args.command}: error: {exc}", file=sys.stderr)
        return 1
    if args.output:
        Path(args.output).write_text(out)
    else:
        sys.stdout.write(out)
    return 0


def main() -> None:
    sys.exit(run())

"""Command-line front end.

Subcommands:
    frenet       tabulate the Frenet frame, curvature, torsion of a curve
    tube-report  per-grid-point tube data with closed-form vs engine residuals
    verify       run the identity suite on a surface, exit 0 iff all pass
    fit          coordinate-matrix fit (tube classification for tube specs)
    grid-export  sample a surface to CSV/JSON (positions, normal, K, H)

Exit codes: 0 ok, 1 identity failure, 2 invalid input, 3 vanishing
curvature, 4 singular sampling.  Reports embed the resolved config and a
schema version; identical configs produce byte-identical reports.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys

import numpy as np

from .beltrami import laplacian_gauss, verify_gauss_identity
from .errors import (
    InvalidSpecError,
    SingularFormError,
    TubeGeomError,
    VanishingCurvatureError,
)
from .finitetype import GridSpec, collect_samples, fit_coordinate_matrix, theorem_check_tube
from .frenet import curve_from_json, frenet_frame
from .geom import FORM_SECOND, evaluate, fundamental_forms, surface_jet
from .specio import surface_from_json
from .tubes import (
    anchor_ring_laplacian_coeffs,
    tube_forms_closed,
    tube_gauss_curvature,
    tube_gauss_map,
    tube_laplacian_coeffs,
    tube_laplacian_gauss_closed,
    tube_laplacian_gauss_poly,
    tube_laplacian_gauss_vector,
    tube_point,
)

SCHEMA = 1

EXIT_OK = 0
EXIT_IDENTITY = 1
EXIT_INVALID = 2
EXIT_CURVATURE = 3
EXIT_SINGULAR = 4


def _load_json(path):
    try:
        with open(path) as fh:
            return json.load(fh)
    except FileNotFoundError as exc:
        raise InvalidSpecError(f"spec file not found: {path}") from exc
    except json.JSONDecodeError as exc:
        raise InvalidSpecError(f"spec file {path} is not valid JSON: {exc}") from exc


def _parse_grid(text):
    try:
        n1, n2 = (int(p) for p in text.lower().split("x"))
        return n1, n2
    except ValueError as exc:
        raise InvalidSpecError(f"--grid expects NxM, got {text!r}") from exc


def _parse_grid_1d(text):
    """Sample count along the curve; accepts N or NxM (N is used)."""
    try:
        return int(text.lower().split("x")[0])
    except ValueError as exc:
        raise InvalidSpecError(f"--grid expects N or NxM, got {text!r}") from exc


def _json_default(obj):
    if isinstance(obj, np.generic):
        return obj.item()
    if isinstance(obj, np.ndarray):
        return obj.tolist()
    raise TypeError(f"not JSON serializable: {type(obj)}")


def _emit(args, payload, csv_rows=None, csv_header=None):
    """Write the report; JSON is canonicalized for byte-stable output."""
    if getattr(args, "format", "json") == "csv":
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(csv_header)
        writer.writerows(csv_rows)
        text = buf.getvalue()
    else:
        text = json.dumps(payload, indent=2, sort_keys=True, default=_json_default) + "\n"
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _base_config(args, spec_obj):
    cfg = {
        "spec": spec_obj,
        "grid": getattr(args, "grid", None),
        "eps_band": getattr(args, "eps_band", None),
        "form": getattr(args, "form", None),
        "format": getattr(args, "format", "json"),
        "tolerances": dict(args.tol) if getattr(args, "tol", None) else {},
    }
    return cfg


# ---------------------------------------------------------------------------
# subcommands


def cmd_frenet(args):
    spec_obj = _load_json(args.spec)
    curve = curve_from_json(spec_obj)
    n = _parse_grid_1d(args.grid)
    u = curve.domain[0] + np.arange(n) * (curve.domain[1] - curve.domain[0]) / n
    fd = frenet_frame(curve, u)
    rows = [
        [float(x) for x in ([u[i], *fd.t[i], *fd.h[i], *fd.b[i], fd.kappa[i], fd.tau[i]])]
        for i in range(n)
    ]
    header = ["u", "tx", "ty", "tz", "hx", "hy", "hz", "bx", "by", "bz", "kappa", "tau"]
    payload = {
        "schema": SCHEMA,
        "command": "frenet",
        "config": {"spec": spec_obj, "grid": args.grid, "format": args.format},
        "columns": header,
        "rows": rows,
    }
    _emit(args, payload, csv_rows=rows, csv_header=header)
    return EXIT_OK


def cmd_tube_report(args):
    spec_obj = _load_json(args.spec)
    surface, tspec = surface_from_json(spec_obj)
    if tspec is None:
        raise InvalidSpecError("tube-report needs a surface of kind 'tube'")
    n1, n2 = _parse_grid(args.grid)
    grid = GridSpec(n1=n1, n2=n2, eps_band=args.eps_band)
    v1, v2 = grid.values(surface, band_aware=True)
    U, PHI = [a.ravel() for a in np.meshgrid(v1, v2, indexing="ij")]
    jet = surface_jet(surface, U, PHI)
    gI, gII, _ = fundamental_forms(jet)
    K, H = _curvatures_from(gI, gII)
    N = jet.normal_deriv(0, 0)
    lapN = laplacian_gauss(jet, FORM_SECOND)
    cI, cII = tube_forms_closed(tspec, U, PHI)
    cK = tube_gauss_curvature(tspec, U, PHI)
    cN = tube_gauss_map(tspec, U, PHI)
    cLap = tube_laplacian_gauss_vector(tspec, U, PHI, eps_band=args.eps_band)
    tp = tube_point(tspec, U, PHI)
    forms_res = np.max(
        np.stack(
            [np.abs(a - b) for a, b in zip(cI.entries() + cII.entries(), gI.entries() + gII.entries())]
        ),
        axis=0,
    )
    points = []
    for i in range(len(U)):
        points.append(
            {
                "u": float(U[i]),
                "phi": float(PHI[i]),
                "delta": float(tp.delta[i]),
                "beta": float(tp.beta[i]),
                "K": float(K[i]),
                "H": float(H[i]),
                "N": [float(x) for x in N[i]],
                "residuals": {
                    "forms": float(forms_res[i]),
                    "K": float(abs(K[i] - cK[i])),
                    "N": float(np.linalg.norm(N[i] - cN[i])),
                    "laplacian_gauss": float(np.linalg.norm(lapN[i] - cLap[i])),
                },
            }
        )
    if not all(np.isfinite(p["residuals"]["laplacian_gauss"]) for p in points):
        raise TubeGeomError("non-finite residual in tube report")
    payload = {
        "schema": SCHEMA,
        "command": "tube-report",
        "config": _base_config(args, spec_obj),
        "points": points,
    }
    _emit(args, payload)
    return EXIT_OK


def _curvatures_from(g, b):
    detg = g.det
    K = b.det / detg
    H = (g.a11 * b.a22 - 2.0 * g.a12 * b.a12 + g.a22 * b.a11) / (2.0 * detg)
    return K, H


_DEFAULT_TOLS = {
    "third_form_identity": 1e-8,
    "weingarten": 1e-8,
    "gauss_identity": 1e-6,
    "forms_closed_vs_generic": 1e-9,
    "gauss_curvature_rel": 1e-9,
    "gauss_map_closed_vs_generic": 1e-10,
    "laplacian_gauss_closed_vs_generic": 1e-6,
    "operator_coeffs_vs_engine": 1e-6,
    "cleared_form_consistency": 1e-10,
    "operator_reduction_circle": 1e-12,
}


def cmd_verify(args):
    spec_obj = _load_json(args.spec)
    surface, tspec = surface_from_json(spec_obj)
    n1, n2 = _parse_grid(args.grid)
    grid = GridSpec(n1=n1, n2=n2, eps_band=args.eps_band)
    tols = dict(_DEFAULT_TOLS)
    tols.update(dict(args.tol) if args.tol else {})

    band_aware = tspec is not None
    v1, v2 = grid.values(surface, band_aware=band_aware)
    U, V = [a.ravel() for a in np.meshgrid(v1, v2, indexing="ij")]
    jet = surface_jet(surface, U, V)
    g, b, e = fundamental_forms(jet)
    K, H = _curvatures_from(g, b)
    checks = []

    def record(name, residuals):
        tol = tols[name]
        worst = int(np.argmax(residuals))
        checks.append(
            {
                "identity": name,
                "max_residual": float(np.max(residuals)),
                "tolerance": tol,
                "pass": bool(np.max(residuals) < tol),
                "worst_point": [float(U[worst]), float(V[worst])],
            }
        )

    # third fundamental form vs 2H b - K g
    res3 = np.stack(
        [
            np.abs(e_st - (2.0 * H * b_st - K * g_st))
            for e_st, b_st, g_st in zip(e.entries(), b.entries(), g.entries())
        ]
    ).max(axis=0)
    record("third_form_identity", res3)

    # Weingarten: N_s . r_t = -b_st
    n1d, n2d = jet.normal_deriv(1, 0), jet.normal_deriv(0, 1)
    r1, r2 = jet.deriv(1, 0), jet.deriv(0, 1)
    resw = np.stack(
        [
            np.abs(np.sum(n1d * r1, axis=-1) + b.a11),
            np.abs(np.sum(n1d * r2, axis=-1) + b.a12),
            np.abs(np.sum(n2d * r1, axis=-1) + b.a12),
            np.abs(np.sum(n2d * r2, axis=-1) + b.a22),
        ]
    ).max(axis=0)
    record("weingarten", resw)

    # structural identity for lap_II(N), where K is bounded away from 0
    if np.all(np.abs(K) > 1e-12):
        resg = np.linalg.norm(verify_gauss_identity(jet, None, None), axis=-1)
        record("gauss_identity", resg)

    if tspec is not None:
        cI, cII = tube_forms_closed(tspec, U, V)
        resf = np.stack(
            [
                np.abs(ca - ga)
                for ca, ga in zip(cI.entries() + cII.entries(), g.entries() + b.entries())
            ]
        ).max(axis=0)
        record("forms_closed_vs_generic", resf)

        cK = tube_gauss_curvature(tspec, U, V)
        record("gauss_curvature_rel", np.abs(K - cK) / np.maximum(np.abs(cK), 1e-30))

        cN = tube_gauss_map(tspec, U, V)
        record(
            "gauss_map_closed_vs_generic",
            np.linalg.norm(jet.normal_deriv(0, 0) - cN, axis=-1),
        )

        lapN = laplacian_gauss(jet, FORM_SECOND)
        cLap = tube_laplacian_gauss_vector(tspec, U, V, eps_band=args.eps_band)
        record(
            "laplacian_gauss_closed_vs_generic",
            np.linalg.norm(lapN - cLap, axis=-1),
        )

        coeffs = tube_laplacian_coeffs(tspec, U, V, eps_band=args.eps_band)
        opN = np.stack([coeffs.apply(c) for c in jet.normal_jets], axis=-1)
        record("operator_coeffs_vs_engine", np.linalg.norm(opN - lapN, axis=-1))

        tp = tube_point(tspec, U, V)
        scale = 2.0 * tspec.radius * tp.kappa * tp.delta**2 * np.cos(tp.phi)
        closed = tube_laplacian_gauss_closed(tspec, U, V, eps_band=args.eps_band)
        poly = tube_laplacian_gauss_poly(tspec, U, V)
        resc = np.stack(
            [np.abs(scale * c - p) for c, p in zip(closed, poly)]
        ).max(axis=0)
        record("cleared_form_consistency", resc)

        if tspec.curve.family == "circle":
            reduced = anchor_ring_laplacian_coeffs(tspec, U, V, eps_band=args.eps_band)
            resr = np.stack(
                [
                    np.abs(getattr(coeffs, f) - getattr(reduced, f))
                    for f in ("c_uu", "c_uphi", "c_phiphi", "c_u", "c_phi")
                ]
            ).max(axis=0)
            record("operator_reduction_circle", resr)

    payload = {
        "schema": SCHEMA,
        "command": "verify",
        "config": _base_config(args, spec_obj),
        "checks": checks,
        "all_pass": all(c["pass"] for c in checks),
    }
    _emit(args, payload)
    return EXIT_OK if payload["all_pass"] else EXIT_IDENTITY


def cmd_fit(args):
    spec_obj = _load_json(args.spec)
    surface, tspec = surface_from_json(spec_obj)
    n1, n2 = _parse_grid(args.grid)
    grid = GridSpec(n1=n1, n2=n2, eps_band=args.eps_band)
    if tspec is not None and args.form == "II":
        report = theorem_check_tube(tspec, grid)
        body = report.fit.to_json()
        body["verdict"] = report.verdict
        body["case"] = report.case
        body["beta_max"] = report.beta_max
        if report.a33_spread is not None:
            body["a33_spread"] = report.a33_spread
            body["a33_endpoints"] = list(report.a33_endpoints)
    else:
        samples = collect_samples(surface, args.form, grid)
        body = fit_coordinate_matrix(samples).to_json()
    payload = {
        "schema": SCHEMA,
        "command": "fit",
        "config": _base_config(args, spec_obj),
    }
    payload.update(body)
    _emit(args, payload)
    return EXIT_OK


def cmd_grid_export(args):
    spec_obj = _load_json(args.spec)
    surface, _ = surface_from_json(spec_obj)
    n1, n2 = _parse_grid(args.grid)
    grid = GridSpec(n1=n1, n2=n2, eps_band=args.eps_band)
    v1, v2 = grid.values(surface, band_aware=False)
    U, V = [a.ravel() for a in np.meshgrid(v1, v2, indexing="ij")]
    pt = evaluate(surface, U, V)
    header = ["v1", "v2", "x", "y", "z", "Nx", "Ny", "Nz", "K", "H"]
    rows = [
        [float(x) for x in ([U[i], V[i], *pt.position[i], *pt.normal[i], pt.K[i], pt.H[i]])]
        for i in range(len(U))
    ]
    payload = {
        "schema": SCHEMA,
        "command": "grid-export",
        "config": _base_config(args, spec_obj),
        "columns": header,
        "rows": rows,
    }
    _emit(args, payload, csv_rows=rows, csv_header=header)
    return EXIT_OK


# ---------------------------------------------------------------------------


def _tol_pair(text):
    try:
        name, value = text.split("=", 1)
        return name, float(value)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"expected NAME=FLOAT, got {text!r}") from exc


def build_parser():
    parser = argparse.ArgumentParser(
        prog="tubegeom",
        description="Differential geometry of parametric surfaces and tubes: "
        "forms, curvatures, Laplacians of the Gauss map, finite-type fits.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, form=False, grid="32x32", formats=("json",), default_format="json"):
        p.add_argument("--spec", required=True, help="path to a JSON spec file")
        p.add_argument("--grid", default=grid, help="evaluation grid, NxM")
        p.add_argument(
            "--eps-band",
            dest="eps_band",
            type=float,
            default=0.15,
            help="excluded band: second-form operators reject |cos phi| <= this",
        )
        p.add_argument("--out", default=None, help="output path (default stdout)")
        p.add_argument("--format", choices=formats, default=default_format)
        p.add_argument(
            "--tol",
            action="append",
            type=_tol_pair,
            metavar="NAME=VALUE",
            help="override an identity tolerance (verify only)",
        )
        if form:
            p.add_argument("--form", choices=("I", "II", "III"), default="II")

    p = sub.add_parser("frenet", help="tabulate frame, curvature, torsion along a curve")
    common(p, grid="64", formats=("json", "csv"), default_format="csv")
    p.description = "CSV columns: u, tx, ty, tz, hx, hy, hz, bx, by, bz, kappa, tau."
    p.set_defaults(func=cmd_frenet)

    p = sub.add_parser("tube-report", help="per-point tube data and closed-form residuals")
    common(p)
    p.set_defaults(func=cmd_tube_report)

    p = sub.add_parser("verify", help="run the identity suite")
    common(p)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("fit", help="fit the constant coordinate matrix of the Gauss map")
    common(p, form=True)
    p.set_defaults(func=cmd_fit)

    p = sub.add_parser("grid-export", help="export a sample grid")
    common(p, formats=("json", "csv"), default_format="csv")
    p.description = "CSV columns: v1, v2, x, y, z, Nx, Ny, Nz, K, H."
    p.set_defaults(func=cmd_grid_export)

    return parser


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except VanishingCurvatureError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CURVATURE
    except SingularFormError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_SINGULAR
    except (InvalidSpecError, TubeGeomError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID


if __name__ == "__main__":
    sys.exit(main())

"""Batch front-end: ring data, series evaluation, Fourier checks, and
equidistribution runs, with JSON-first output and CSV mirrors.

Every JSON payload embeds the full run configuration, floats are emitted
with shortest round-trip formatting, and series reductions are
block-ordered, so identical configurations (including the seed and any
thread count) produce byte-identical output.  Timings go to stderr only.

Exit codes: 0 success, 2 validation error, 3 certificate failure,
4 tolerance warning escalated by --strict.
"""

from __future__ import annotations

import argparse
import json
import sys
import time
import warnings

from .cosets import load_coset_rows, unipotent_index
from .eisenstein import (
    TailWarning,
    classical_E,
    dual_lattice_point,
    eisenstein_E,
    _fourier_report,
    series_H,
)
from .equidist import (
    CertificateError,
    PoincareBump,
    equidistribution_experiment,
)
from .harmonics import WignerIndex
from .hyperbolic3 import PointH3, frame_matrix
from .number_field import ring_spec
from .zeta import dedekind_zeta, orbifold_volume, phi

EXIT_OK = 0
EXIT_VALIDATION = 2
EXIT_CERTIFICATE = 3
EXIT_TOLERANCE = 4


def _parse_point(text: str) -> PointH3:
    parts = text.split(",")
    if len(parts) != 3:
        raise ValueError(f"--point expects 'x,y,lambda', got {text!r}")
    x, y, lam = (float(p) for p in parts)
    return PointH3(complex(x, y), lam)


def _parse_grid(text: str) -> tuple[float, ...]:
    return tuple(float(p) for p in text.split(","))


def _parse_w(text: str) -> tuple[int, int]:
    parts = text.split(",")
    if len(parts) != 2:
        raise ValueError(f"--w expects 'm1,m2' integer dual coordinates, got {text!r}")
    return int(parts[0]), int(parts[1])


def _emit(payload: dict, out_path: str | None, csv_text: str | None = None) -> None:
    text = json.dumps(payload, sort_keys=True, indent=2) + "\n"
    if out_path:
        with open(out_path, "w") as fh:
            fh.write(text)
        if csv_text is not None:
            stem = out_path[:-5] if out_path.endswith(".json") else out_path
            with open(stem + ".csv", "w") as fh:
                fh.write(csv_text)
    else:
        sys.stdout.write(text)


def _config_dict(args: argparse.Namespace) -> dict:
    skip = {"func"}
    return {k: v for k, v in sorted(vars(args).items()) if k not in skip}


def cmd_ring(args) -> dict:
    ring = ring_spec(args.D)
    return {
        "D": ring.D,
        "omega": [ring.omega.real, ring.omega.imag],
        "discriminant": ring.discriminant,
        "units": [[u.x, u.y] for u in ring.units],
        "covolume": ring.covolume,
        "dual_basis": [[b.real, b.imag] for b in ring.dual_basis],
        "unipotent_index": {
            "sl": unipotent_index(ring, "sl"),
            "psl": unipotent_index(ring, "psl"),
        },
        "orbifold_volume": orbifold_volume(ring),
        "zeta_at_2": dedekind_zeta(ring, 2.0, 200_000).value,
    }


def cmd_eisenstein(args) -> dict:
    ring = ring_spec(args.D)
    idx = WignerIndex(args.l, args.k, args.m)
    P = _parse_point(args.point)
    s = complex(args.s_re, args.s_im)
    cache_meta = None
    if args.cache:
        hit = (
            load_coset_rows(args.cache, ring, P, args.bound, args.index_convention)
            is not None
        )
        cache_meta = {"path": args.cache, "hit": hit}
    sv = eisenstein_E(
        ring, idx, P, s, args.bound, args.index_convention, args.threads, args.cache
    )
    record = sv.to_record()
    record["tail_exceeds_10pct"] = sv.tail_estimate > 0.1 * abs(sv.value)
    if cache_meta is not None:
        record["cache"] = cache_meta
    if args.check_he:
        hv = series_H(
            ring, idx, P, s, args.bound, args.index_convention, args.threads, args.cache
        )
        sign = (-1) ** ((idx.k + idx.m) % 2)
        record["rotation_series"] = {
            "value_re": hv.value.real,
            "value_im": hv.value.imag,
            "expected_sign": sign,
            "match_error": abs(hv.value - sign * sv.value),
        }
    return record


def cmd_fourier(args) -> dict:
    ring = ring_spec(args.D)
    idx = WignerIndex(args.l, args.k, args.m)
    s = complex(args.s_re, args.s_im)
    m1, m2 = _parse_w(args.w)
    w = dual_lattice_point(ring, m1, m2)
    rep = _fourier_report(
        ring, idx, args.lam, s, w, args.bound, args.order,
        args.index_convention, args.threads,
    )
    record = {
        "D": args.D,
        "l": idx.l,
        "k": idx.k,
        "m": idx.m,
        "lambda": args.lam,
        "s_re": s.real,
        "s_im": s.imag,
        "w_coords": [m1, m2],
        "w": [w.real, w.imag],
        "bound": args.bound,
        "order": rep["order"],
        "value_re": rep["value"].real,
        "value_im": rep["value"].imag,
        "max_tail_estimate": rep["max_tail_estimate"],
    }
    if (idx.l, idx.k, idx.m, m1, m2) == (0, 0, 0, 0, 0):
        zc = 300_000
        alpha = args.lam ** (1 + s) + phi(ring, s, zc) * args.lam ** (1 - s)
        record["constant_term_check"] = {
            "alpha_re": alpha.real,
            "alpha_im": alpha.imag,
            "difference": abs(rep["value"] - alpha),
            "zeta_cutoff": zc,
        }
    return record


def cmd_equidist(args) -> tuple[dict, str]:
    ring = ring_spec(args.D)
    center = _parse_point(args.bump_center)
    bump = PoincareBump(
        ring=ring,
        center=frame_matrix(center),
        r_s=args.r_s,
        r_d=args.r_d,
        amplitude=complex(args.amp_re, args.amp_im),
    )
    grid = _parse_grid(args.grid)
    t0 = time.monotonic()
    report = equidistribution_experiment(
        bump, grid, base_order=args.order, threads=args.threads
    )
    print(f"experiment wall time {time.monotonic() - t0:.2f}s", file=sys.stderr)
    return report.to_json_dict(), report.to_csv_text()


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="bianchi",
        description="series and equidistribution computations for the "
        "class-number-one Bianchi groups",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, point_default=None):
        p.add_argument("--D", type=int, required=True, help="field parameter")
        p.add_argument("--out", type=str, default=None, help="write JSON here")
        p.add_argument("--threads", type=int, default=1)
        p.add_argument("--seed", type=int, default=0,
                       help="seed recorded for reproducibility of randomized suites")
        p.add_argument("--index-convention", choices=("sl", "psl"), default="sl")
        p.add_argument("--strict", action="store_true",
                       help="escalate tolerance warnings to exit code 4")

    p_ring = sub.add_parser("ring", help="ring of integers data")
    common(p_ring)
    p_ring.set_defaults(func=cmd_ring, mirror_csv=False)

    p_eis = sub.add_parser("eisenstein", help="evaluate one series partial sum")
    common(p_eis)
    p_eis.add_argument("--l", type=int, required=True)
    p_eis.add_argument("--k", type=int, required=True)
    p_eis.add_argument("--m", type=int, required=True)
    p_eis.add_argument("--point", type=str, required=True, help="x,y,lambda")
    p_eis.add_argument("--s-re", type=float, required=True)
    p_eis.add_argument("--s-im", type=float, default=0.0)
    p_eis.add_argument("--bound", type=float, required=True)
    p_eis.add_argument("--cache", type=str, default=None,
                       help="binary coset cache file (opt-in)")
    p_eis.add_argument("--check-he", action="store_true",
                       help="also evaluate the rotation series and report the sign check")
    p_eis.set_defaults(func=cmd_eisenstein, mirror_csv=False)

    p_fou = sub.add_parser("fourier", help="torus Fourier coefficient")
    common(p_fou)
    p_fou.add_argument("--l", type=int, required=True)
    p_fou.add_argument("--k", type=int, required=True)
    p_fou.add_argument("--m", type=int, required=True)
    p_fou.add_argument("--lam", type=float, required=True, help="horosphere height")
    p_fou.add_argument("--s-re", type=float, required=True)
    p_fou.add_argument("--s-im", type=float, default=0.0)
    p_fou.add_argument("--w", type=str, required=True,
                       help="dual point as integer coordinates 'm1,m2'")
    p_fou.add_argument("--bound", type=float, required=True)
    p_fou.add_argument("--order", type=int, default=32)
    p_fou.set_defaults(func=cmd_fourier, mirror_csv=False)

    p_eq = sub.add_parser("equidist", help="torus-average equidistribution run")
    common(p_eq)
    p_eq.add_argument("--bump-center", type=str, required=True, help="x,y,lambda")
    p_eq.add_argument("--r-s", type=float, default=0.5, help="spatial bump radius")
    p_eq.add_argument("--r-d", type=float, default=1.3, help="directional bump radius")
    p_eq.add_argument("--amp-re", type=float, default=1.0)
    p_eq.add_argument("--amp-im", type=float, default=0.0)
    p_eq.add_argument("--grid", type=str, default="1,0.5,0.25,0.125",
                      help="decreasing heights, comma separated")
    p_eq.add_argument("--order", type=int, default=24, help="base torus order")
    p_eq.set_defaults(func=cmd_equidist, mirror_csv=True)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        with warnings.catch_warnings(record=True) as caught:
            warnings.simplefilter("always", TailWarning)
            result = args.func(args)
    except (ValueError, OverflowError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_VALIDATION
    except CertificateError as exc:
        print(f"certificate failure: {exc}", file=sys.stderr)
        return EXIT_CERTIFICATE
    csv_text = None
    if isinstance(result, tuple):
        result, csv_text = result
    payload = {"config": _config_dict(args), "result": result}
    _emit(payload, args.out, csv_text)
    tail_warnings = [w for w in caught if issubclass(w.category, TailWarning)]
    for w in tail_warnings:
        print(f"warning: {w.message}", file=sys.stderr)
    if args.strict and tail_warnings:
        return EXIT_TOLERANCE
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())

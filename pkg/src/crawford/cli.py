"""Command line front end.

Matrix files are JSON {"n": int, "entries": [[string, ...], ...]} where
each entry string is a Gaussian rational: "2", "-4i", "3+i", "1/2-2/3i".

Subcommands: chi (compute), export (write the SDP in SDPA sparse
format), range (sample the numerical-range boundary to CSV/SVG),
verify (run both methods plus invariant spot checks).

Exit codes: 0 ok, 2 parse error, 3 solver diagnostic, 4 I/O error,
5 verify invariant violation.
"""

from __future__ import annotations

import argparse
import json
import math
import re
import sys
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path

import numpy as np

from . import ellipsoid, oracle, sdp
from .api import CrawfordQuery, Method, crawford
from .ellipsoid import EllipsoidCapExceeded
from .linalg import (
    ComplexMatrix,
    GaussianRational,
    clear_denominators,
    frobenius_ceiling,
    hermitian_split,
)


class MatrixParseError(ValueError):
    pass


_NUM = r"\d+(?:/\d+)?"
_RE_BOTH = re.compile(rf"([+-]?{_NUM})\s*([+-])\s*({_NUM})?\s*i")
_RE_IMAG = re.compile(rf"([+-]?)({_NUM})?\s*i")
_RE_REAL = re.compile(rf"[+-]?{_NUM}")


def parse_gaussian(s: str) -> GaussianRational:
    """Parse "a/b+c/d i" with optional parts; bare "i"/"-i" allowed."""
    txt = s.strip()
    try:
        m = _RE_BOTH.fullmatch(txt)
        if m:
            mag = Fraction(m.group(3)) if m.group(3) else Fraction(1)
            return GaussianRational(
                Fraction(m.group(1)), mag if m.group(2) == "+" else -mag
            )
        m = _RE_IMAG.fullmatch(txt)
        if m:
            mag = Fraction(m.group(2)) if m.group(2) else Fraction(1)
            return GaussianRational(0, -mag if m.group(1) == "-" else mag)
        if _RE_REAL.fullmatch(txt):
            return GaussianRational(Fraction(txt), 0)
    except ZeroDivisionError:
        raise MatrixParseError(f"zero denominator in {s!r}") from None
    raise MatrixParseError(f"cannot parse Gaussian rational {s!r}")


def format_gaussian(g: GaussianRational) -> str:
    if g.im == 0:
        return str(g.re)
    if g.re == 0:
        return f"{g.im}i"
    if g.im > 0:
        return f"{g.re}+{g.im}i"
    return f"{g.re}-{-g.im}i"


def load_matrix(path) -> ComplexMatrix:
    try:
        with open(path) as fh:
            doc = json.load(fh)
    except OSError as e:
        raise OSError(f"cannot read matrix file {path}: {e}") from e
    except json.JSONDecodeError as e:
        raise MatrixParseError(f"{path}: not valid JSON: {e}") from e
    if not isinstance(doc, dict) or "n" not in doc or "entries" not in doc:
        raise MatrixParseError(f'{path}: need an object with "n" and "entries"')
    n = doc["n"]
    rows = doc["entries"]
    if not isinstance(n, int) or n < 1:
        raise MatrixParseError(f"{path}: n must be a positive integer")
    if len(rows) != n or any(len(r) != n for r in rows):
        raise MatrixParseError(f"{path}: entries must be {n}x{n}")
    try:
        return ComplexMatrix([[parse_gaussian(x) for x in row] for row in rows])
    except MatrixParseError as e:
        raise MatrixParseError(f"{path}: {e}") from e


def save_matrix(c: ComplexMatrix, path) -> None:
    doc = {
        "n": c.n,
        "entries": [[format_gaussian(x) for x in row] for row in c.entries],
    }
    with open(path, "w", newline="\n") as fh:
        json.dump(doc, fh, indent=1)
        fh.write("\n")


@dataclass(frozen=True)
class RunConfig:
    epsilon: float = 1e-6
    method: Method = Method.SDP_ELLIPSOID
    center: str = "0"
    output: str = "text"      # text | json
    seed: int = 0

    def __post_init__(self):
        if not 0.0 < self.epsilon < 1.0:
            raise ValueError("epsilon must lie in (0, 1)")

    def center_value(self) -> GaussianRational:
        return parse_gaussian(self.center)


def _config_from_args(args) -> RunConfig:
    return RunConfig(
        epsilon=args.eps,
        method=Method(args.method),
        center=args.center,
        output="json" if args.json else "text",
        seed=args.seed,
    )


def _fmt_complex(z: complex) -> str:
    return f"{z.real:.10g} {'+' if z.imag >= 0 else '-'} {abs(z.imag):.10g}i"


def cmd_chi(matrix_path, config: RunConfig) -> int:
    c = load_matrix(matrix_path)
    result = crawford(
        CrawfordQuery(
            matrix=c,
            center=config.center_value(),
            epsilon=config.epsilon,
            method=config.method,
        )
    )
    stats = result.solver_stats
    if config.output == "json":
        z = result.nearest_point
        doc = {
            "chi": result.chi,
            "z": [z.real, z.imag],
            "iterations": int(stats.get("iterations", 0)),
            "method": result.method_used.value,
            "epsilon": config.epsilon,
        }
        print(json.dumps(doc))
        return 0
    print(f"chi = {result.chi:.10g}")
    if "short_circuit" in stats:
        print(f"note: {stats['short_circuit']}, chi is exact")
    print(f"nearest point (translated frame) = {_fmt_complex(result.nearest_point)}")
    print(f"nearest point (original frame)   = {_fmt_complex(result.nearest_point_original)}")
    print(f"scale factor l = {result.scale_factor}")
    if "cuts_feasibility" in stats:
        print(
            f"iterations = {stats['iterations']} "
            f"(feasibility cuts {stats['cuts_feasibility']}, "
            f"objective cuts {stats['cuts_objective']})"
        )
    else:
        print(f"grid evaluations = {stats.get('iterations', 0)}")
    if "oracle_value" in stats:
        print(
            f"oracle cross-check = {stats['oracle_value']:.10g} "
            f"(discrepancy {stats['discrepancy']:.3g})"
        )
    return 0


def _instance_for(c: ComplexMatrix, config: RunConfig):
    t = c.translate(config.center_value())
    if t.is_zero():
        raise MatrixParseError("matrix is zero after translation; chi = 0, nothing to export")
    cint, scale = clear_denominators(t)
    pencil = hermitian_split(cint)
    inst = sdp.build_instance(pencil, frobenius_ceiling(cint))
    return inst, cint, scale


def cmd_export(matrix_path, config: RunConfig, out_path) -> int:
    c = load_matrix(matrix_path)
    inst, _, scale = _instance_for(c, config)
    sdp.export_sdpa(inst, out_path)
    bs = inst.block_sizes
    b_vals = [float(b) for _, b in inst.constraints]
    print(f"wrote {out_path}")
    print(f"N = {inst.N}, mDIM = {inst.m}, blocks = {bs[0]} {bs[1]} {bs[2]}")
    print(f"b: {len(b_vals) - 2} zeros then {b_vals[-2]:g} {b_vals[-1]:g}")
    if scale != 1:
        print(f"note: instance is for l*C with l = {scale}")
    return 0


def cmd_range(matrix_path, samples: int, out_path, config: RunConfig) -> int:
    c = load_matrix(matrix_path).translate(config.center_value())
    out = Path(out_path)
    points = oracle.sample_boundary(c, samples)
    k_min = min(range(len(points)), key=lambda k: abs(points[k]))
    if out.suffix.lower() == ".svg":
        oracle.write_boundary_svg(points, out, marker=points[k_min])
    else:
        oracle.write_boundary_csv(c, samples, out)
    print(f"wrote {out} ({samples} samples)")
    print(
        f"minimum modulus sample: |z| = {abs(points[k_min]):.10g} "
        f"at node {k_min} (z = {_fmt_complex(points[k_min])})"
    )
    return 0


def cmd_verify(matrix_path, config: RunConfig) -> int:
    c = load_matrix(matrix_path)
    eps = config.epsilon
    failures = []

    def check(name: str, ok: bool, detail: str):
        print(f"{name}: {'PASS' if ok else 'FAIL'} ({detail})")
        if not ok:
            failures.append(name)

    center = config.center_value()
    result = crawford(
        CrawfordQuery(matrix=c, center=center, epsilon=eps, method=Method.BOTH)
    )
    stats = result.solver_stats
    print(f"SDP value    = {result.chi:.10g}")
    if "oracle_value" in stats:
        orc = stats["oracle_value"]
        print(f"oracle value = {orc:.10g}")
        diff = abs(result.chi - orc)
        check("sdp_vs_oracle", diff <= 1.5 * eps + 1e-9, f"|diff| = {diff:.3g}")
    else:
        print("oracle value = (zero matrix short circuit)")

    t = c.translate(center)
    if not t.is_zero():
        inst, cint, scale = _instance_for(c, config)
        ball = ellipsoid.certified_ball(inst, cint)
        chart = ellipsoid.build_chart(inst)
        rng = np.random.default_rng(config.seed)
        r_in = float(ball.inner_r)
        worst = math.inf
        for _ in range(20):
            w = rng.standard_normal(chart.dim)
            w /= np.linalg.norm(w)
            flat = chart.origin_flat + (r_in * w) @ chart.basis
            zb = sdp.BlockDiagSymmetric.from_flat(inst.n, flat)
            lam = min(
                float(np.linalg.eigvalsh(0.5 * (zb.y + zb.y.T))[0]),
                float(np.linalg.eigvalsh(zb.uv)[0]),
                float(zb.t),
            )
            worst = min(worst, lam)
        check("inner_ball", worst >= -1e-9, f"min eigenvalue {worst:.3g}")
        if "max_feasible_distance" in stats:
            d = stats["max_feasible_distance"]
            big_r = stats["outer_R"]
            check("outer_ball", d <= big_r + 1e-6, f"max distance {d:.6g} vs R {big_r:g}")

        shift = GaussianRational(1, 0)
        r_shift = crawford(
            CrawfordQuery(matrix=c, center=center + shift, epsilon=eps)
        )
        r_pre = crawford(
            CrawfordQuery(matrix=c.translate(shift), center=center, epsilon=eps)
        )
        d_tr = abs(r_shift.chi - r_pre.chi)
        check("translation_identity", d_tr <= 2 * eps + 1e-9, f"|diff| = {d_tr:.3g}")

        r_scaled = crawford(CrawfordQuery(matrix=t.scale(2), epsilon=eps))
        d_sc = abs(r_scaled.chi - 2 * result.chi)
        check("scaling_identity", d_sc <= 3 * eps + 1e-9, f"|diff| = {d_sc:.3g}")

    bound = math.sqrt(float(t.frobenius_sq()))
    check(
        "frobenius_upper_bound",
        result.chi <= bound + eps,
        f"chi {result.chi:.6g} vs bound {bound:.6g}",
    )
    if failures:
        print("verify FAILED:", ", ".join(failures), file=sys.stderr)
        return 5
    print("verify OK")
    return 0


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("matrix", help="matrix JSON file")
    common.add_argument("--center", default="0", help="Gaussian rational c for chi(c, C)")
    common.add_argument("--eps", type=float, default=1e-6, help="accuracy (default 1e-6)")
    common.add_argument(
        "--method", choices=[m.value for m in Method], default="sdp"
    )
    common.add_argument("--samples", type=int, default=360, help="boundary sample count")
    common.add_argument("--json", action="store_true", help="machine-readable output")
    common.add_argument("--out", default=None, help="output file path")
    common.add_argument("--seed", type=int, default=0, help="seed for randomized checks")

    ap = argparse.ArgumentParser(
        prog="crawford",
        description="Crawford number chi(c, C) via certified SDP / ellipsoid "
        "solving with a support-function cross-check",
    )
    sub = ap.add_subparsers(dest="command", required=True)
    sub.add_parser("chi", parents=[common], help="compute chi(c, C)")
    sub.add_parser("export", parents=[common], help="write the SDP instance (.dat-s)")
    sub.add_parser("range", parents=[common], help="sample the numerical range boundary")
    sub.add_parser("verify", parents=[common], help="cross-check both methods and invariants")
    return ap


def _merge_center(argv):
    # argparse mistakes center values like "-3-i" for option strings;
    # fold the value into --center=... before parsing
    out, i = [], 0
    while i < len(argv):
        if argv[i] == "--center" and i + 1 < len(argv):
            out.append(f"--center={argv[i + 1]}")
            i += 2
        else:
            out.append(argv[i])
            i += 1
    return out


def main(argv=None) -> int:
    argv = sys.argv[1:] if argv is None else list(argv)
    args = build_parser().parse_args(_merge_center(argv))
    try:
        config = _config_from_args(args)
        if args.command == "chi":
            return cmd_chi(args.matrix, config)
        if args.command == "export":
            out = args.out or str(Path(args.matrix).with_suffix(".dat-s"))
            return cmd_export(args.matrix, config, out)
        if args.command == "range":
            if args.samples < 3:
                raise MatrixParseError("--samples must be at least 3")
            out = args.out or str(Path(args.matrix).with_suffix("")) + "_range.csv"
            return cmd_range(args.matrix, args.samples, out, config)
        if args.command == "verify":
            return cmd_verify(args.matrix, config)
        raise AssertionError(args.command)
    except (MatrixParseError, ValueError) as e:
        print(f"error: {e}", file=sys.stderr)
        return 2
    except EllipsoidCapExceeded as e:
        print(f"solver error: {e}", file=sys.stderr)
        return 3
    except OSError as e:
        print(f"io error: {e}", file=sys.stderr)
        return 4


if __name__ == "__main__":
    sys.exit(main())

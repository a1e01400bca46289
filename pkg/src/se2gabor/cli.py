"""Command-line interface: verification tables and deterministic map generation.

Exit codes: 0 all checks passed / files written; 1 at least one FAIL row;
2 configuration error (the message names the violated constraint).
"""

from __future__ import annotations

import argparse
import sys

import numpy as np

from . import cortex, formats
from .grid2d import Field2D, GridSpec, check_ring_radius, ring_bin_radius
from .verify import CheckRow, VerifyConfig, bargmann_suite, bridge_suite, run_suite

__all__ = ["main", "render_opm_ppm"]

_TOL_KEYS = [
    "isometry", "inversion", "cr", "cr-ratio", "cr-noise",
    "bridge", "bridge-scale", "diagram", "diagram-ratio",
    "routes", "symmetry", "colorcode", "vcorr", "empirical", "ringfrac",
    "unitarity", "homomorphism", "linearity", "two-route", "profile",
    "holomorphy",
]


def _add_common(parser: argparse.ArgumentParser, need_seed: bool) -> None:
    parser.add_argument("--config", help="plain key=value config file; flags override")
    parser.add_argument("--n", type=int, help="grid size per axis (power of two, default 256)")
    parser.add_argument("--ring-bins", type=int,
                        help="ring radius in spectral bins (default 16)")
    parser.add_argument("--lambda-omega", type=float,
                        help="concentration product lambda*omega (default 1.0)")
    parser.add_argument("--sigma", type=float, help="Gabor window width in pixels (default 8)")
    parser.add_argument("--n-phi", type=int, help="circle samples (default 256)")
    parser.add_argument("--n-theta", type=int, help="orientation samples (default 64)")
    parser.add_argument("--n-alpha", type=int, help="grating angles (default 16)")
    parser.add_argument("--seed", type=int, required=need_seed,
                        help="PRNG seed" + ("" if need_seed else " (default 0)"))


def _parse_config_file(path: str) -> dict:
    out = {}
    with open(path, "r", encoding="ascii") as fh:
        for raw in fh:
            line = raw.strip()
            if not line or line.startswith("#"):
                continue
            if "=" not in line:
                raise ValueError(f"config line without '=': {line!r}")
            key, val = line.split("=", 1)
            out[key.strip().replace("-", "_")] = val.strip()
    return out


_INT_KEYS = {"n", "ring_bins", "n_phi", "n_theta", "n_alpha", "seed"}
_FLOAT_KEYS = {"lambda_omega", "sigma", "rel_width", "p"}


def _merged(args: argparse.Namespace) -> dict:
    cfg = {}
    if getattr(args, "config", None):
        for key, val in _parse_config_file(args.config).items():
            if key in _INT_KEYS:
                cfg[key] = int(val)
            elif key in _FLOAT_KEYS or key.startswith("tol_"):
                cfg[key] = float(val)
            else:
                cfg[key] = val
    for key, val in vars(args).items():
        if val is not None and key != "config":
            cfg[key] = val
    return cfg


def _verify_config(cfg: dict) -> VerifyConfig:
    tolerances = {}
    for key in _TOL_KEYS:
        dest = "tol_" + key.replace("-", "_")
        if dest in cfg:
            tolerances[key] = float(cfg[dest])
    vc = VerifyConfig(
        n=int(cfg.get("n", 256)),
        ring_bins=int(cfg.get("ring_bins", 16)),
        lambda_omega=float(cfg.get("lambda_omega", 1.0)),
        sigma=float(cfg.get("sigma", 8.0)),
        seed=int(cfg.get("seed", 0)),
        n_phi=int(cfg.get("n_phi", 256)),
        n_theta=int(cfg.get("n_theta", 64)),
        n_alpha=int(cfg.get("n_alpha", 16)),
        tolerances=tolerances,
    )
    grid = vc.grid                      # validates n
    check_ring_radius(vc.omega, grid)   # validates ring_bins
    if vc.n_phi < 8 or vc.n_phi % 2:
        raise ValueError(f"n_phi must be even and >= 8, got {vc.n_phi}")
    if vc.n_theta < 8 or vc.n_theta % 2:
        raise ValueError(f"n_theta must be even and >= 8, got {vc.n_theta}")
    if vc.n_alpha < 8:
        raise ValueError(f"n_alpha must be >= 8, got {vc.n_alpha}")
    if vc.lambda_omega < 0:
        raise ValueError(f"lambda_omega must be >= 0, got {vc.lambda_omega}")
    return vc


def _print_rows(rows: list[CheckRow]) -> int:
    width = max(len(r.name) for r in rows)
    fails = 0
    for row in rows:
        if row.passed is None:
            print(f"{row.name:<{width}}  {row.value:>13.6e}  {'-':>9}  INFO")
            continue
        mark = "PASS" if row.passed else "FAIL"
        fails += 0 if row.passed else 1
        bound = f"{row.cmp}{row.tol:.0e}"
        print(f"{row.name:<{width}}  {row.value:>13.6e}  {bound:>9}  {mark}")
    print(f"{'—' * width}  {len(rows)} checks, {fails} failed")
    return 1 if fails else 0


def render_opm_ppm(seed: int, grid: GridSpec, omega: float, lam: float,
                   n_phases: int, n_alpha: int) -> bytes:
    """Deterministic gen-opm pipeline: model activity stack, color coding, PPM bytes."""
    pn = cortex.sample_phases(seed, n_phases)
    alphas = np.pi * np.arange(n_alpha) / n_alpha
    maps = np.stack(
        [cortex.activity_map_direct(pn, lam, omega, a, grid).values for a in alphas]
    )
    stack = cortex.ActivityStack(maps, lam=lam, omega=omega)
    om = cortex.orientation_from_activities(stack)
    return formats.ppm_bytes(cortex.orientation_rgb(om), seed=seed)


def _cmd_verify(args) -> int:
    vc = _verify_config(_merged(args))
    return _print_rows(run_suite(vc))


def _cmd_verify_bargmann(args) -> int:
    vc = _verify_config(_merged(args))
    return _print_rows(bargmann_suite(vc))


def _cmd_verify_bridge(args) -> int:
    cfg = _merged(args)
    vc = _verify_config(cfg)
    p_abs = cfg.get("p")
    if p_abs is not None and p_abs <= 0:
        raise ValueError(f"|p| must be positive, got {p_abs}")
    return _print_rows(bridge_suite(vc, p_abs))


def _cmd_gen_opm(args) -> int:
    cfg = _merged(args)
    vc = _verify_config(cfg)
    grid = vc.grid
    data = render_opm_ppm(vc.seed, grid, vc.omega, vc.lam, vc.n_phi // 2, vc.n_alpha)
    formats.atomic_write(cfg["out"], data)
    if cfg.get("raw"):
        pn = cortex.sample_phases(vc.seed, vc.n_phi // 2)
        alphas = np.pi * np.arange(vc.n_alpha) / vc.n_alpha
        maps = np.stack(
            [cortex.activity_map_direct(pn, vc.lam, vc.omega, a, grid).values
             for a in alphas]
        )
        om = cortex.orientation_from_activities(
            cortex.ActivityStack(maps, lam=vc.lam, omega=vc.omega)
        )
        # the doubled-angle phase field, the spectrum-ready form of the map
        formats.write_field(cfg["raw"], Field2D(np.exp(2j * om.values), h=1.0))
    print(f"gen-opm seed={vc.seed} omega={vc.omega:.6g} "
          f"lambda_omega={vc.lambda_omega:.6g} n={vc.n} out={cfg['out']}"
          + (f" raw={cfg['raw']}" if cfg.get("raw") else ""))
    return 0


def _cmd_gen_activity(args) -> int:
    cfg = _merged(args)
    vc = _verify_config(cfg)
    grid = vc.grid
    thetas_deg = cfg["theta"]
    pn = cortex.sample_phases(vc.seed, vc.n_phi // 2)
    maps = [
        cortex.activity_map_direct(pn, vc.lam, vc.omega, np.deg2rad(d), grid).values
        for d in thetas_deg
    ]
    bound = max(np.abs(m).max() for m in maps)
    prefix = cfg.get("out_prefix") or "activity"
    paths = []
    for deg, mvals in zip(thetas_deg, maps):
        path = f"{prefix}-{deg:g}.pgm"
        formats.write_pgm16(path, mvals, seed=vc.seed, lo=-bound, hi=bound)
        paths.append(path)
    # contact sheet: gray tiles in row-major order
    cols = int(np.ceil(np.sqrt(len(maps))))
    rows_n = int(np.ceil(len(maps) / cols))
    tile = grid.n
    sheet = np.zeros((rows_n * tile, cols * tile, 3), dtype=np.uint8)
    for i, mvals in enumerate(maps):
        gray = np.clip(np.round((mvals + bound) / (2 * bound) * 255.0), 0, 255
                       ).astype(np.uint8)
        r, c = divmod(i, cols)
        sheet[r * tile:(r + 1) * tile, c * tile:(c + 1) * tile] = gray[..., None]
    sheet_path = f"{prefix}-sheet.ppm"
    formats.write_ppm(sheet_path, sheet, seed=vc.seed)
    print(f"gen-activity seed={vc.seed} omega={vc.omega:.6g} "
          f"lambda_omega={vc.lambda_omega:.6g} angles={len(maps)} "
          f"files={','.join(paths)},{sheet_path}")
    return 0


def _cmd_spectrum(args) -> int:
    cfg = _merged(args)
    rel_width = float(cfg.get("rel_width", 0.1))
    if not (0.0 < rel_width <= 0.5):
        raise ValueError(f"rel-width must be in (0, 0.5], got {rel_width}")
    field = formats.read_field(cfg["infile"])
    ring_bins = int(cfg.get("ring_bins", 16))
    omega = 2.0 * np.pi * ring_bins / (field.n * field.h)
    check_ring_radius(omega, field.grid)
    frac = cortex.spectrum_ring_fraction(field, omega, rel_width)
    print(f"spectrum in={cfg['infile']} omega={omega:.6g} "
          f"rel_width={rel_width:g} ring_fraction={frac:.6f}")
    return 0


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="se2gabor",
        description="Ring coherent-state transforms, Gabor analysis, and "
                    "orientation-map generation",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_verify = sub.add_parser("verify", help="run the full property table")
    _add_common(p_verify, need_seed=False)
    for key in _TOL_KEYS:
        p_verify.add_argument(f"--tol-{key}", type=float, dest=f"tol_{key.replace('-', '_')}")
    p_verify.set_defaults(func=_cmd_verify)

    p_vb = sub.add_parser("verify-bargmann", help="transform-focused property table")
    _add_common(p_vb, need_seed=False)
    for key in _TOL_KEYS:
        p_vb.add_argument(f"--tol-{key}", type=float, dest=f"tol_{key.replace('-', '_')}")
    p_vb.set_defaults(func=_cmd_verify_bargmann)

    p_br = sub.add_parser("verify-bridge", help="Gabor-route vs transform-route table")
    _add_common(p_br, need_seed=False)
    p_br.add_argument("--p", type=float, help="wavevector magnitude |p| (default omega)")
    for key in _TOL_KEYS:
        p_br.add_argument(f"--tol-{key}", type=float, dest=f"tol_{key.replace('-', '_')}")
    p_br.set_defaults(func=_cmd_verify_bridge)

    p_opm = sub.add_parser("gen-opm", help="generate an orientation preference map")
    _add_common(p_opm, need_seed=True)
    p_opm.add_argument("--out", required=True, help="output PPM path")
    p_opm.add_argument("--raw", help="also write the orientation field as F2D1")
    p_opm.set_defaults(func=_cmd_gen_opm)

    p_act = sub.add_parser("gen-activity", help="generate activity maps at given angles")
    _add_common(p_act, need_seed=True)
    p_act.add_argument("--theta", type=float, nargs="+", required=True,
                       help="grating angles in degrees")
    p_act.add_argument("--out-prefix", help="output path prefix (default 'activity')")
    p_act.set_defaults(func=_cmd_gen_activity)

    p_spec = sub.add_parser("spectrum", help="ring power fraction of a stored field")
    p_spec.add_argument("--in", dest="infile", required=True, help="F2D1 input path")
    p_spec.add_argument("--rel-width", type=float, dest="rel_width")
    p_spec.add_argument("--ring-bins", type=int)
    p_spec.add_argument("--config")
    p_spec.set_defaults(func=_cmd_spectrum)
    return parser


def main(argv=None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (ValueError, OverflowError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())

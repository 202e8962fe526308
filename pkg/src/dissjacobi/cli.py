"""Command-line front end.

Subcommands: spectrum, reconstruct, mixed, block, volterra, chebyshev,
verify.  Complex numbers are serialized as [re, im] pairs everywhere; JSON
output is key-sorted and byte-identical across runs for a fixed seed and
configuration.  Exit codes: 0 success, 2 parse error, 3 domain error,
4 numerical error.  ``DISSJACOBI_LOG`` selects the logging level.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import logging
import os
import sys

import numpy as np

from .config import DEFAULT, RunConfig, Tolerances
from .errors import DissJacobiError, DomainError, ParseError
from .inverse import (BlockData, MixedData, block_recover, mixed_recover,
                      reconstruct_from_spectrum)
from .jacobi import FiniteJacobi, Spectrum, kernel_psd_check, spectrum
from .livsic import model_from_spectrum, triangular_to_jacobi
from .semiinf import (VolterraParams, chebyshev_eig, chebyshev_jacobi,
                      truncation_top_eig, volterra_jacobi, volterra_sweep)
from .verify import run_suite

logger = logging.getLogger("dissjacobi.cli")


def _complex_pair(z: complex) -> list[float]:
    return [float(np.real(z)), float(np.imag(z))]


def _emit_json(payload: dict) -> None:
    sys.stdout.write(json.dumps(payload, sort_keys=True, indent=2) + "\n")


def _emit_rows(rows: list[dict], fmt: str, field_order: list[str]) -> None:
    if fmt == "csv":
        out = io.StringIO()
        writer = csv.DictWriter(out, fieldnames=field_order)
        writer.writeheader()
        for row in rows:
            writer.writerow({k: row[k] for k in field_order})
        sys.stdout.write(out.getvalue())
    elif fmt == "pretty":
        widths = [max(len(str(r.get(k, ""))) for r in rows + [dict.fromkeys(field_order, k)])
                  for k in field_order]
        header = "  ".join(k.ljust(w) for k, w in zip(field_order, widths))
        sys.stdout.write(header + "\n")
        for row in rows:
            sys.stdout.write("  ".join(str(row[k]).ljust(w)
                                       for k, w in zip(field_order, widths)) + "\n")
    else:
        _emit_json({"rows": rows})


def _load_json(path: str) -> dict:
    try:
        with open(path, encoding="utf-8") as fh:
            return json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise ParseError(f"cannot read {path}: {exc}") from exc


def _parse(loader, data, what: str):
    try:
        return loader(data)
    except DissJacobiError:
        raise
    except (KeyError, TypeError, ValueError, IndexError) as exc:
        raise ParseError(f"malformed {what}: {exc}") from exc


def _psd_samples(j: FiniteJacobi) -> list[complex]:
    r = max(1.0, j.norm_bound())
    return [complex(0.3 * k * r, -(0.5 + 0.4 * k) * r) for k in range(5)]


# --- subcommands -------------------------------------------------------------

def cmd_spectrum(args, cfg: RunConfig) -> int:
    j = _parse(FiniteJacobi.from_dict, _load_json(args.matrix), "matrix file")
    s = spectrum(j, cfg.tolerances)
    diag = {"imag_sum": s.imag_sum, "im_b1": j.b1.imag,
            "imag_sum_gap": abs(s.imag_sum - j.b1.imag)}
    if j.is_strict:
        ok, lo = kernel_psd_check(j, _psd_samples(j), cfg.tolerances)
        diag["kernel_psd"] = bool(ok)
        diag["kernel_min_eig"] = lo
    _emit_json({"spectrum": s.to_dict(), "diagnostics": diag})
    return 0


def cmd_reconstruct(args, cfg: RunConfig) -> int:
    s = _parse(Spectrum.from_dict, _load_json(args.spectrum), "spectrum file")
    tol = cfg.tolerances
    out: dict = {}
    if args.method in ("peel", "both"):
        out["matrix"] = reconstruct_from_spectrum(s, tol).to_dict()
    if args.method in ("livsic", "both"):
        res = triangular_to_jacobi(model_from_spectrum(s), tol)
        out["matrix_livsic"] = res.jacobi.to_dict()
        out["U"] = [[_complex_pair(z) for z in row] for row in res.u]
    if args.method == "both":
        j1 = FiniteJacobi.from_dict(out["matrix"])
        j2 = FiniteJacobi.from_dict(out["matrix_livsic"])
        out["max_entry_difference"] = float(np.abs(j1.dense() - j2.dense()).max())
    if args.method == "livsic":
        out["matrix"] = out.pop("matrix_livsic")
    _emit_json(out)
    return 0


def cmd_mixed(args, cfg: RunConfig) -> int:
    data = _parse(MixedData.from_dict, _load_json(args.mixed), "mixed-data file")
    j = mixed_recover(data, cfg.tolerances)
    _emit_json({"matrix": j.to_dict()})
    return 0


def cmd_block(args, cfg: RunConfig) -> int:
    data = _parse(BlockData.from_dict, _load_json(args.block), "block-data file")
    j = block_recover(data, cfg.tolerances)
    _emit_json({"matrix": j.to_dict(), "zero_coupling_at": j.zero_coupling})
    return 0


def cmd_volterra(args, cfg: RunConfig) -> int:
    params = VolterraParams(args.l, args.N)
    if args.sweep:
        sizes = [n for n in (25, 50, 100, 200) if n <= args.N] or [args.N]
        rows = volterra_sweep(args.l, sizes, k_values=tuple(range(args.k_max)))
        _emit_rows(rows, cfg.fmt,
                   ["N", "quantity", "predicted", "computed", "abs_error"])
        return 0
    _emit_json({"matrix": volterra_jacobi(params).to_dict()})
    return 0


def cmd_chebyshev(args, cfg: RunConfig) -> int:
    z = chebyshev_eig(args.variant, args.l, cfg.tolerances)
    out: dict = {"variant": args.variant, "l": args.l,
                 "eigenvalue": _complex_pair(z) if z is not None else None}
    if args.truncation:
        top = truncation_top_eig(chebyshev_jacobi(args.variant, args.l,
                                                  args.truncation))
        out["truncation_top"] = _complex_pair(top)
        if z is not None:
            out["truncation_error"] = abs(top - z)
    _emit_json(out)
    return 0


def cmd_verify(args, cfg: RunConfig) -> int:
    rows = [r.to_dict() for r in run_suite(args.suite, args.n, args.trials,
                                           cfg.seed, cfg.tolerances)]
    _emit_rows(rows, cfg.fmt if cfg.fmt != "json" else "pretty",
               ["name", "trials", "max_residual", "tolerance", "passed"])
    return 0 if all(r["passed"] for r in rows) else 4


# --- argument plumbing --------------------------------------------------------

def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="dissjacobi",
        description="Spectral analysis of dissipative Jacobi matrices "
                    "with rank-one imaginary part.")
    parser.add_argument("--format", choices=("json", "csv", "pretty"),
                        default="json")
    parser.add_argument("--seed", type=int, default=20240901)
    for name in Tolerances.field_names():
        if name == "qr_crossover":
            parser.add_argument("--tol-qr-crossover", type=int, default=None,
                                dest="tol_qr_crossover")
        else:
            parser.add_argument(f"--tol-{name.replace('_', '-')}", type=float,
                                default=None, dest=f"tol_{name}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("spectrum", help="eigenvalues of a matrix file")
    p.add_argument("matrix")
    p.set_defaults(func=cmd_spectrum)

    p = sub.add_parser("reconstruct", help="matrix from a spectrum file")
    p.add_argument("spectrum")
    p.add_argument("--method", choices=("peel", "livsic", "both"), default="peel")
    p.set_defaults(func=cmd_reconstruct)

    p = sub.add_parser("mixed", help="recover tail entries from mixed data")
    p.add_argument("mixed")
    p.set_defaults(func=cmd_mixed)

    p = sub.add_parser("block", help="recover a split tri-diagonal matrix")
    p.add_argument("block")
    p.set_defaults(func=cmd_block)

    p = sub.add_parser("volterra", help="integration-operator truncations")
    p.add_argument("--l", type=float, default=1.0)
    p.add_argument("--N", type=int, default=50)
    p.add_argument("--sweep", action="store_true")
    p.add_argument("--k-max", type=int, default=3, dest="k_max")
    p.set_defaults(func=cmd_volterra)

    p = sub.add_parser("chebyshev", help="constant-coupling case studies")
    p.add_argument("--variant", choices=("standard", "modified"),
                   default="standard")
    p.add_argument("--l", type=float, default=1.0)
    p.add_argument("--truncation", type=int, default=0)
    p.set_defaults(func=cmd_chebyshev)

    p = sub.add_parser("verify", help="randomized invariant suites")
    p.add_argument("--suite", required=True,
                   choices=("roundtrip", "green", "symmetric", "volterra",
                            "chebyshev"))
    p.add_argument("--n", type=int, default=8)
    p.add_argument("--trials", type=int, default=50)
    p.set_defaults(func=cmd_verify)
    return parser


def _config_from(args) -> RunConfig:
    overrides = {}
    for name in Tolerances.field_names():
        value = getattr(args, f"tol_{name}", None)
        if value is not None:
            overrides[name] = value
    return RunConfig(tolerances=DEFAULT.replace(**overrides),
                     fmt=args.format, seed=args.seed)


def main(argv=None) -> int:
    level = os.environ.get("DISSJACOBI_LOG", "WARNING").upper()
    logging.basicConfig(level=getattr(logging, level, logging.WARNING))
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        cfg = _config_from(args)
    except ValueError as exc:
        parser.error(str(exc))
    try:
        return args.func(args, cfg)
    except DissJacobiError as exc:
        _emit_json({"error": type(exc).__name__, "message": str(exc)})
        logger.debug("command failed", exc_info=True)
        return exc.exit_code


if __name__ == "__main__":
    sys.exit(main())

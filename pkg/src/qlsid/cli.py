"""Command-line front end.

Subcommands: check, tf, realize, spectrum, identify, decompose, grid.
Exit codes: 0 success, 1 analysis-level failure, 2 input/parse error.
Reports are machine-parseable JSON (stdout or --output); a human rendering
of check/decompose reports goes to stderr.
"""

from __future__ import annotations

import argparse
import csv
import io
import sys

import numpy as np

from . import __version__
from .errors import ParseError, QlsError, RangeError
from .identify import (fit_rational_from_samples, reconstruct_tf,
                       spectrum_components)
from .realization import physicalize
from .serialize import (SCHEMA, dumps, file_digest, json_to_input,
                        json_to_spectrum, json_to_system, json_to_transfer,
                        load_json, spectrum_to_json, system_to_json,
                        transfer_to_json, write_atomic)
from .stationary import (global_minimality, power_spectrum_eval,
                         vacuum_basis)
from .systems import GaussianInput, is_hurwitz, is_minimal, is_passive
from .transfer import eval_transfer, tf_rational


def _emit(args, text: str) -> None:
    if args.output:
        write_atomic(args.output, text)
    else:
        sys.stdout.write(text)
        if not text.endswith("\n"):
            sys.stdout.write("\n")


def _fmt(x: float) -> str:
    return format(float(x), ".17g")


def _load_system(path: str):
    return json_to_system(load_json(path))


def _load_input(path: str):
    return json_to_input(load_json(path))


def _render_report(doc: dict) -> str:
    lines = [f"qls report (tool {doc['tool_version']})"]
    sec = doc["system"]
    lines.append(f"  system: n={sec['n']} m={sec['m']} "
                 f"passive={sec['passive']} hurwitz={sec['hurwitz']} "
                 f"minimal={sec['minimal']}")
    if "stationary" in doc:
        st = doc["stationary"]
        if "skipped_reason" in st:
            lines.append(f"  stationary: skipped ({st['skipped_reason']})")
        else:
            nums = ", ".join(f"{t:.3e}" for t in st["thermal_numbers"])
            lines.append(f"  stationary: thermal numbers [{nums}]")
            lines.append(f"  globally_minimal: {st['globally_minimal']} "
                         f"(pure_dim={st['pure_dim']}, "
                         f"mixed_dim={st['mixed_dim']})")
    return "\n".join(lines) + "\n"


def cmd_check(args) -> int:
    sys_ = _load_system(args.system)
    doc = {"schema": SCHEMA, "tool_version": __version__,
           "inputs": {"system": {"path": args.system,
                                 "sha256": file_digest(args.system)}},
           "system": {"n": sys_.n_modes, "m": sys_.n_channels,
                      "passive": is_passive(sys_, args.tol),
                      "hurwitz": is_hurwitz(sys_),
                      "minimal": is_minimal(sys_)},
           "operations": {"passive": "systems.is_passive",
                          "hurwitz": "systems.is_hurwitz",
                          "minimal": "systems.is_minimal"}}
    if args.input:
        doc["inputs"]["input"] = {"path": args.input,
                                  "sha256": file_digest(args.input)}
        vin = _load_input(args.input)
        try:
            rep = global_minimality(sys_, vin)
            doc["stationary"] = {
                "thermal_numbers": [float(t) for t in rep.thermal_numbers],
                "globally_minimal": rep.is_globally_minimal,
                "pure_dim": rep.pure_dim, "mixed_dim": rep.mixed_dim}
            doc["operations"]["globally_minimal"] = \
                "stationary.global_minimality"
        except QlsError as exc:
            doc["stationary"] = {
                "skipped_reason": f"{type(exc).__name__}: {exc}"}
    sys.stderr.write(_render_report(doc))
    _emit(args, dumps(doc))
    return 0


def cmd_tf(args) -> int:
    sys_ = _load_system(args.system)
    tf = tf_rational(sys_, args.tol)
    _emit(args, dumps(transfer_to_json(tf)))
    return 0


def cmd_realize(args) -> int:
    tf = json_to_transfer(load_json(args.transfer))
    trace = physicalize(tf, args.tol)
    doc = system_to_json(trace.result)
    doc["trace"] = {k: v for k, v in trace.stage_residuals().items()}
    _emit(args, dumps(doc))
    return 0


def _sweep_rows(sys_, vin, omegas):
    rows = []
    for w in omegas:
        s0 = -1j * float(w)
        xi = eval_transfer(sys_, s0)
        row = [w, xi[0, 0].real, xi[0, 0].imag, xi[0, 1].real, xi[0, 1].imag]
        if vin is not None:
            psi = power_spectrum_eval(sys_, vin, s0)
            for i in range(psi.shape[0]):
                for j in range(psi.shape[1]):
                    row.extend([psi[i, j].real, psi[i, j].imag])
        rows.append(row)
    return rows


def _vacuum_basis_components(sys_, vin, tol):
    """Spectral components of the vacuum-basis system.

    Degenerate drift spectra block the residue path for the transformed
    (active) system, but when the original system is passive its transfer
    function is still exact and the basis change is a constant symplectic
    conjugation.
    """
    from .errors import DegenerateSpectrum
    from .identify import components_of
    from .stationary import input_basis_change
    from .transfer import conjugate_transfer
    vb_sys, _ = vacuum_basis(sys_, vin)
    try:
        return spectrum_components(vb_sys, tol)
    except DegenerateSpectrum:
        if not is_passive(sys_, tol):
            raise
        s_in = input_basis_change(vin).flat()
        return components_of(conjugate_transfer(tf_rational(sys_, tol), s_in))


def cmd_spectrum(args) -> int:
    sys_ = _load_system(args.system)
    vin = _load_input(args.input) if args.input else \
        GaussianInput.vacuum(sys_.n_channels)
    if args.format == "json":
        ps = _vacuum_basis_components(sys_, vin, args.tol)
        _emit(args, dumps(spectrum_to_json(ps)))
        return 0
    if args.count < 2 or not (0 < args.wmin < args.wmax):
        raise RangeError("need count >= 2 and 0 < wmin < wmax")
    omegas = np.logspace(np.log10(args.wmin), np.log10(args.wmax), args.count)
    ps = _vacuum_basis_components(sys_, vin, args.tol)
    buf = io.StringIO()
    writer = csv.writer(buf)
    writer.writerow(["omega", "re_phi11", "im_phi11", "re_phi12", "im_phi12",
                     "re_phi22", "im_phi22"])
    for w in omegas:
        s0 = -1j * float(w)
        vals = [ps.phi11(s0), ps.phi12(s0), ps.phi22(s0)]
        writer.writerow([_fmt(w)] + [_fmt(p) for v in vals
                                     for p in (complex(v).real,
                                               complex(v).imag)])
    _emit(args, buf.getvalue())
    return 0


def _read_sample_csv(path: str):
    try:
        with open(path, newline="") as fh:
            reader = csv.reader(fh)
            header = next(reader, None)
            if header is None:
                raise ParseError(f"{path}: empty CSV")
            rows = [[float(x) for x in row] for row in reader if row]
    except OSError as exc:
        raise ParseError(f"{path}: {exc}") from exc
    except ValueError as exc:
        raise ParseError(f"{path}: non-numeric CSV entry ({exc})") from exc
    if any(len(r) != 7 for r in rows):
        raise ParseError(f"{path}: expected 7 columns "
                         "(omega, re/im phi11, re/im phi12, re/im phi22)")
    return rows


def cmd_identify(args) -> int:
    if args.spectrum.endswith(".csv"):
        rows = _read_sample_csv(args.spectrum)
        from .stationary import PowerSpectrumSISO
        comps = []
        for k in range(3):
            samples = [(r[0], complex(r[1 + 2 * k], r[2 + 2 * k]))
                       for r in rows]
            comps.append(fit_rational_from_samples(samples, args.degree))
        ps = PowerSpectrumSISO(*comps)
    else:
        ps = json_to_spectrum(load_json(args.spectrum))
    tf = reconstruct_tf(ps)
    _emit(args, dumps(transfer_to_json(tf)))
    return 0


def cmd_decompose(args) -> int:
    sys_ = _load_system(args.system)
    vin = _load_input(args.input)
    rep = global_minimality(sys_, vin, tol=args.tol)
    doc = {"schema": SCHEMA, "tool_version": __version__,
           "report": {
               "globally_minimal": rep.is_globally_minimal,
               "pure_dim": rep.pure_dim, "mixed_dim": rep.mixed_dim,
               "thermal_numbers": [float(t) for t in rep.thermal_numbers],
               "forced_zero_residuals": {
                   k: float(v) for k, v in rep.forced_zero_residuals.items()}},
           "pure_part": system_to_json(rep.pure_part)
           if rep.pure_part is not None else None,
           "mixed_part": system_to_json(rep.mixed_part)
           if rep.mixed_part is not None else None,
           "operations": {"decomposition": "stationary.global_minimality"}}
    sys.stderr.write(
        f"globally_minimal: {rep.is_globally_minimal} "
        f"(pure_dim={rep.pure_dim}, mixed_dim={rep.mixed_dim})\n")
    _emit(args, dumps(doc))
    return 0


def cmd_grid(args) -> int:
    if args.count < 2 or not (0 < args.wmin < args.wmax):
        raise RangeError("need count >= 2 and 0 < wmin < wmax")
    sys_ = _load_system(args.system)
    vin = _load_input(args.input) if args.input else None
    omegas = np.logspace(np.log10(args.wmin), np.log10(args.wmax), args.count)
    rows = _sweep_rows(sys_, vin, omegas)
    buf = io.StringIO()
    writer = csv.writer(buf)
    header = ["omega", "re_xi_minus", "im_xi_minus", "re_xi_plus",
              "im_xi_plus"]
    if vin is not None:
        d = 2 * sys_.n_channels
        header += [f"{p}_psi_{i + 1}{j + 1}" for i in range(d)
                   for j in range(d) for p in ("re", "im")]
    writer.writerow(header)
    for row in rows:
        writer.writerow([_fmt(v) for v in row])
    _emit(args, buf.getvalue())
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="qls",
        description="Quantum linear system analysis and identification")
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--tol", type=float, default=1e-8,
                       help="numeric tolerance for structural tests")
        p.add_argument("--seed", type=int, default=0,
                       help="seed for randomized probes; every probe grid is "
                            "currently deterministic, so this is a no-op "
                            "kept for interface stability")
        p.add_argument("--output", help="output path (atomic write)")
        p.add_argument("--format", choices=("json", "csv"), default="json")

    p = sub.add_parser("check", help="predicates and global-minimality report")
    p.add_argument("system")
    p.add_argument("--input", help="input covariance JSON")
    common(p)
    p.set_defaults(func=cmd_check)

    p = sub.add_parser("tf", help="exact rational transfer function")
    p.add_argument("system")
    common(p)
    p.set_defaults(func=cmd_tf)

    p = sub.add_parser("realize", help="physical system from a transfer function")
    p.add_argument("transfer")
    common(p)
    p.set_defaults(func=cmd_realize)

    p = sub.add_parser("spectrum",
                       help="power-spectrum components (vacuum basis)")
    p.add_argument("system")
    p.add_argument("input", nargs="?", help="input covariance JSON")
    p.add_argument("--wmin", type=float, default=1e-2)
    p.add_argument("--wmax", type=float, default=1e2)
    p.add_argument("--count", type=int, default=200)
    common(p)
    p.set_defaults(func=cmd_spectrum)

    p = sub.add_parser("identify",
                       help="transfer function from a power spectrum")
    p.add_argument("spectrum", help="spectrum JSON or sampled CSV")
    p.add_argument("--degree", type=int, default=8,
                   help="degree bound when fitting sampled CSV data")
    common(p)
    p.set_defaults(func=cmd_identify)

    p = sub.add_parser("decompose",
                       help="split off the spectrally invisible subsystem")
    p.add_argument("system")
    p.add_argument("input")
    common(p)
    p.set_defaults(func=cmd_decompose)

    p = sub.add_parser("grid", help="frequency sweep CSV")
    p.add_argument("system")
    p.add_argument("input", nargs="?")
    p.add_argument("--wmin", type=float, default=1e-2)
    p.add_argument("--wmax", type=float, default=1e2)
    p.add_argument("--count", type=int, default=200)
    common(p)
    p.set_defaults(func=cmd_grid)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except ParseError as exc:
        sys.stderr.write(f"error: {exc}\n")
        return 2
    except QlsError as exc:
        sys.stderr.write(f"error: {type(exc).__name__}: {exc}\n")
        return 1


if __name__ == "__main__":
    sys.exit(main())

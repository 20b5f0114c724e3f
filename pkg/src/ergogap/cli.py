"""Command-line front end.

Input documents are JSON with ``dims``, ``hamiltonian`` and ``state`` fields;
complex entries are written as ``[re, im]`` pairs. Exit codes: 0 success,
1 verification failure, 2 parse error, 3 validation error, 4 numerical failure.
"""
from __future__ import annotations

import argparse
import copy
import csv
import io
import json
import math
import sys
from dataclasses import dataclass
from pathlib import Path
from typing import Optional

import numpy as np

from . import __version__, oracle, states, thermal
from .ergotropy import ergotropic_gap, passive_state
from .errors import ErgogapError, InvalidState, NoConvergence
from .hamiltonians import CompositeHamiltonian, LocalHamiltonian, compose, unit_gap_qubits

EXIT_OK = 0
EXIT_VERIFY_FAILED = 1
EXIT_PARSE = 2
EXIT_VALIDATION = 3
EXIT_NUMERICAL = 4

COMMANDS = ("compute", "gap", "thermal", "classify", "verify", "sweep")
SWEEP_COLUMNS = ("p", "global", "local", "gap")
SWEEP_FAMILIES = ("werner", "cc_pair")


class ParseError(ErgogapError):
    pass


class ValidationError(ErgogapError):
    pass


@dataclass(frozen=True)
class JobSpec:
    command: str
    input_path: Optional[str] = None
    output_path: Optional[str] = None
    format: str = "json"
    beta: Optional[float] = None
    seed: Optional[int] = None
    tolerance: Optional[float] = None
    restarts: int = 32
    sweep_grid: Optional[str] = None
    family: str = "werner"

    def __post_init__(self):
        if self.command not in COMMANDS:
            raise ParseError(f"unknown command {self.command!r}")
        if self.format not in ("json", "csv"):
            raise ParseError(f"format must be json or csv, got {self.format!r}")
        if self.command == "thermal" and self.beta is None:
            raise ParseError("thermal requires --beta")
        if self.command != "sweep" and self.input_path is None:
            raise ParseError(f"{self.command} requires --input")
        if self.command == "sweep" and self.sweep_grid is None:
            raise ParseError("sweep requires --grid start:stop:step")


# --- parsing ---------------------------------------------------------------


def _complex_matrix(raw, where: str) -> np.ndarray:
    try:
        a = np.array(raw, dtype=float)
    except (TypeError, ValueError) as exc:
        raise ParseError(f"{where}: entries must be [re, im] pairs ({exc})") from None
    if a.ndim != 3 or a.shape[2] != 2 or a.shape[0] != a.shape[1]:
        raise ParseError(f"{where}: expected a square matrix of [re, im] pairs, got shape {a.shape}")
    if not np.all(np.isfinite(a)):
        raise ParseError(f"{where}: non-finite entry")
    return a[..., 0] + 1j * a[..., 1]


def _complex_vector(raw, where: str) -> np.ndarray:
    a = np.array(raw, dtype=float)
    if a.ndim != 2 or a.shape[1] != 2:
        raise ParseError(f"{where}: expected a vector of [re, im] pairs")
    return a[:, 0] + 1j * a[:, 1]


def _require(doc: dict, key: str, where: str):
    if not isinstance(doc, dict) or key not in doc:
        raise ParseError(f"{where}: missing field {key!r}")
    return doc[key]


def parse_hamiltonian(doc, dims) -> CompositeHamiltonian:
    locs = _require(doc, "locals", "hamiltonian")
    if not isinstance(locs, list) or len(locs) != len(dims):
        raise ParseError(f"hamiltonian.locals: expected {len(dims)} entries")
    hs = []
    for i, loc in enumerate(locs):
        where = f"hamiltonian.locals[{i}]"
        if isinstance(loc, dict) and "energies" in loc:
            e = np.array(loc["energies"], dtype=float)
            if e.ndim != 1:
                raise ParseError(f"{where}.energies: expected a list of reals")
            m = np.diag(e)
        elif isinstance(loc, dict) and "matrix" in loc:
            m = _complex_matrix(loc["matrix"], f"{where}.matrix")
        else:
            raise ParseError(f"{where}: needs 'energies' or 'matrix'")
        if m.shape[0] != dims[i]:
            raise ParseError(f"{where}: dimension {m.shape[0]} does not match dims[{i}] = {dims[i]}")
        try:
            hs.append(LocalHamiltonian(m))
        except ErgogapError as exc:
            raise ValidationError(f"{where}: {type(exc).__name__}: {exc}") from None
    return compose(hs)


def _family_state(spec: dict, dims):
    family = spec["family"]
    try:
        if family == "werner":
            return states.werner(_require(spec, "p", "state"))
        if family == "bell_mixture":
            return states.bell_mixture(_require(spec, "probabilities", "state"))
        if family == "cc_diagonal":
            return states.cc_diagonal(dims, _require(spec, "populations", "state"))
        if family == "cc_pair":
            lam2 = float(_require(spec, "p", "state"))
            pops = np.zeros(4)
            pops[0], pops[3] = 1.0 - lam2, lam2
            return states.cc_diagonal((2, 2), pops)
        if family == "product":
            vecs = [_complex_vector(v, f"state.locals[{i}]") for i, v in enumerate(_require(spec, "locals", "state"))]
            return states.product_state(vecs)
        if family == "maximally_mixed":
            return states.maximally_mixed(dims)
        if family == "haar_random_pure":
            return states.haar_random_pure(dims, int(spec.get("seed", 0)))
        if family == "induced_random_mixed":
            return states.induced_random_mixed(dims, spec.get("ancilla_dim"), int(spec.get("seed", 0)))
    except (TypeError, ValueError) as exc:
        raise ParseError(f"state: {exc}") from None
    raise ParseError(f"state.family: unknown family {family!r}")


def parse_document(doc: dict, tol: Optional[float] = None):
    """Return ``(DensityMatrix, CompositeHamiltonian)`` for an input document."""
    dims = _require(doc, "dims", "document")
    if not isinstance(dims, list) or not dims or not all(isinstance(d, int) and d > 0 for d in dims):
        raise ParseError("dims: expected a nonempty list of positive integers")
    dims = tuple(dims)
    total = math.prod(dims)
    h = parse_hamiltonian(_require(doc, "hamiltonian", "document"), dims)
    spec = _require(doc, "state", "document")
    if isinstance(spec, dict) and "family" in spec:
        try:
            rho = _family_state(spec, dims)
        except InvalidState as exc:
            raise ValidationError(str(exc)) from None
        except ErgogapError as exc:
            if isinstance(exc, ParseError):
                raise
            raise ValidationError(f"{type(exc).__name__}: {exc}") from None
        if rho.dims != dims:
            raise ParseError(f"state family produces dims {list(rho.dims)}, document declares {list(dims)}")
    elif isinstance(spec, dict) and "matrix" in spec:
        m = _complex_matrix(spec["matrix"], "state.matrix")
        if m.shape[0] != total:
            raise ParseError(f"state.matrix: size {m.shape[0]} does not match the dims product {total}")
        try:
            rho = states.validate(dims, m, tol)
        except InvalidState as exc:
            raise ValidationError(str(exc)) from None
    else:
        raise ParseError("state: needs 'family' or 'matrix'")
    return rho, h


def load_document(path) -> dict:
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise ParseError(f"cannot read {path}: {exc}") from None
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"{path}: invalid JSON ({exc})") from None
    if not isinstance(doc, dict):
        raise ParseError(f"{path}: top level must be an object")
    return doc


def parse_input(path, tol: Optional[float] = None):
    return parse_document(load_document(path), tol)


# --- reports ---------------------------------------------------------------


def _echo(doc: dict, seed: Optional[int]) -> dict:
    echo = copy.deepcopy({k: doc[k] for k in ("dims", "hamiltonian", "state") if k in doc})
    state = echo.get("state", {})
    if isinstance(state, dict) and state.get("family") in ("haar_random_pure", "induced_random_mixed"):
        if seed is not None:
            state["seed"] = seed
        state.setdefault("seed", 0)
    return echo


def _classification_block(rho, tol) -> dict:
    w = states.is_classically_correlated(rho, tol=tol if tol is not None else states.CC_TOL)
    block = {"label": w.label, "is_cc": w.is_cc, "max_commutator": w.max_commutator}
    if w.detail:
        block["detail"] = w.detail
    if w.is_cc:
        block["populations"] = [float(x) for x in w.populations]
    return block


def _oracle_block(rho, h, job: JobSpec) -> tuple:
    tol = job.tolerance if job.tolerance is not None else 1e-5
    cfg = oracle.SearchConfig(restarts=job.restarts, seed=job.seed or 0)
    check = oracle.verify_local_ergotropy(rho, h, cfg, tolerance=tol)
    violation = oracle.probe_global_passivity(passive_state(rho, h), h, samples=1000, seed=job.seed or 0)
    ok = check.within_tolerance and check.bound_respected and violation <= 1e-9
    block = {
        "exact_local_min_energy": check.exact_min_energy,
        "search": check.oracle.as_dict(),
        "difference": check.difference,
        "tolerance": tol,
        "passivity_probe_worst_violation": violation,
        "passed": ok,
    }
    return block, ok


def grid_points(spec: str) -> list:
    try:
        start, stop, step = (float(x) for x in spec.split(":"))
    except ValueError:
        raise ParseError(f"grid must look like start:stop:step, got {spec!r}") from None
    if step <= 0 or stop < start:
        raise ParseError(f"grid needs step > 0 and stop >= start, got {spec!r}")
    n = int(math.floor((stop - start) / step + 1e-9)) + 1
    return [min(start + i * step, stop) for i in range(n)]


def sweep_rows(family: str, grid, h: CompositeHamiltonian) -> list:
    rows = []
    for p in grid:
        if family == "werner":
            rho = states.werner(p)
        elif family == "cc_pair":
            rho = states.cc_diagonal((2, 2), [1.0 - p, 0.0, 0.0, p])
        else:
            raise ParseError(f"sweep family must be one of {SWEEP_FAMILIES}, got {family!r}")
        rep = ergotropic_gap(rho, h)
        rows.append({"p": p, "global": rep.global_ergotropy, "local": rep.local_ergotropy, "gap": rep.ergotropic_gap})
    return rows


def _csv_text(header, rows) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    for row in rows:
        writer.writerow([repr(float(row[k])) if isinstance(row[k], float) else row[k] for k in header])
    return buf.getvalue()


def build_report(job: JobSpec) -> tuple:
    """Return ``(report dict, exit code)``."""
    if job.command == "sweep":
        if job.input_path:
            doc = load_document(job.input_path)
            dims = tuple(_require(doc, "dims", "document"))
            h = parse_hamiltonian(_require(doc, "hamiltonian", "document"), dims)
        else:
            h = unit_gap_qubits(2)
        if h.dims != (2, 2):
            raise ParseError("sweep families are two-qubit; the Hamiltonian must have dims [2, 2]")
        rows = sweep_rows(job.family, grid_points(job.sweep_grid), h)
        return {"command": "sweep", "family": job.family, "grid": job.sweep_grid, "columns": list(SWEEP_COLUMNS),
                "rows": rows}, EXIT_OK

    doc = load_document(job.input_path)
    doc = _echo(doc, job.seed)
    rho, h = parse_document(doc)
    report = {"command": job.command, "version": __version__, "input_echo": doc}
    code = EXIT_OK
    if job.command in ("compute", "gap", "thermal", "verify"):
        report["work_report"] = ergotropic_gap(rho, h).as_dict()
    if job.command == "thermal" or (job.command == "compute" and job.beta is not None):
        report["thermal"] = thermal.thermal_report(rho, h, job.beta).as_dict()
        report["thermal"]["note"] = "free-energy differences are upper bounds on extractable work"
    if job.command in ("compute", "classify"):
        report["classification"] = _classification_block(rho, job.tolerance)
    if job.command == "verify":
        report["oracle"], ok = _oracle_block(rho, h, job)
        if not ok:
            code = EXIT_VERIFY_FAILED
    return report, code


def render(report: dict, fmt: str) -> str:
    if fmt == "json":
        return json.dumps(report, indent=2, sort_keys=False) + "\n"
    if report["command"] == "sweep":
        return _csv_text(SWEEP_COLUMNS, report["rows"])
    flat = {}
    for block in ("work_report", "thermal", "classification"):
        for k, v in report.get(block, {}).items():
            if isinstance(v, (int, float, str, bool)) or v is None:
                flat[k if block == "work_report" else f"{block}.{k}"] = v
    return _csv_text(list(flat), [flat])


def run(job: JobSpec) -> int:
    try:
        report, code = build_report(job)
    except ParseError as exc:
        return _fail("ParseError", str(exc), EXIT_PARSE)
    except (ValidationError, InvalidState) as exc:
        return _fail("ValidationError", str(exc), EXIT_VALIDATION)
    except NoConvergence as exc:
        return _fail("NumericalError", str(exc), EXIT_NUMERICAL)
    except ErgogapError as exc:
        return _fail(type(exc).__name__, str(exc), EXIT_VALIDATION)
    text = render(report, job.format)
    if job.output_path:
        Path(job.output_path).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)
    return code


def _fail(kind: str, message: str, code: int) -> int:
    sys.stderr.write(json.dumps({"error": {"type": kind, "message": message, "exit_code": code}}) + "\n")
    return code


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--input", help="input JSON document")
    common.add_argument("--output", help="report path (default: stdout)")
    common.add_argument("--format", choices=("json", "csv"), default="json")
    common.add_argument("--beta", type=float, help="inverse temperature")
    common.add_argument("--seed", type=int, help="seed for randomized paths")
    common.add_argument("--tolerance", type=float, help="classification or verification tolerance")

    parser = argparse.ArgumentParser(prog="ergogap", description="Global and local ergotropy, ergotropic gap and bath-assisted work bounds.")
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)
    sub.add_parser("compute", parents=[common], help="work report, classification and optional thermal block")
    sub.add_parser("gap", parents=[common], help="work report only")
    sub.add_parser("thermal", parents=[common], help="bath-assisted work bounds (needs --beta)")
    sub.add_parser("classify", parents=[common], help="classical-correlation test")
    v = sub.add_parser("verify", parents=[common], help="check analytic values against brute-force search")
    v.add_argument("--restarts", type=int, default=32)
    s = sub.add_parser("sweep", parents=[common], help="tabulate a two-qubit family over a parameter grid")
    s.add_argument("--grid", required=True, help="start:stop:step (stop included)")
    s.add_argument("--family", choices=SWEEP_FAMILIES, default="werner")
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_PARSE if exc.code else EXIT_OK
    try:
        job = JobSpec(
            command=args.command,
            input_path=args.input,
            output_path=args.output,
            format=args.format,
            beta=args.beta,
            seed=args.seed,
            tolerance=args.tolerance,
            restarts=getattr(args, "restarts", 32),
            sweep_grid=getattr(args, "grid", None),
            family=getattr(args, "family", "werner"),
        )
    except ParseError as exc:
        return _fail("ParseError", str(exc), EXIT_PARSE)
    return run(job)


if __name__ == "__main__":
    sys.exit(main())

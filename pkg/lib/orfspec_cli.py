#!/usr/bin/env python3
"""orf-spectral CLI.

Spectral computations for orthogonal rational functions on the unit circle
and the real line.

Usage:
    orfspec params --measure FILE [--poles LIST] [--order N]
    orfspec matrix --params LIST --poles LIST --order N --kind KIND [--boundary U]
    orfspec zeros --params LIST --poles LIST --order N [--via U|V|pair|tridiagonal]
    orfspec quad --params LIST --poles LIST --order N --boundary V [--allow-infinity]
    orfspec reconstruct --params LIST --terminal U --poles LIST
    orfspec diagnose --params LIST --poles LIST [--lambda L [--lambda2 L]] [--arc-a A]
    orfspec validate FILE

The computing subcommands accept --threads N for compatibility and ignore it.

Complex values are written "re,im", "re" or "theta:ANGLE" (the unimodular
e^{i ANGLE}); lists separate values with ";". A --config JSON job file
overrides the flags it sets. Errors go to stderr as a JSON object and the
exit status is 2 for rejected input, 3 for numerical failures.
"""

import argparse
import cmath
import json
import math
import sys
from dataclasses import dataclass, field, replace
from pathlib import Path
from typing import Any

import numpy as np

__version__ = "0.1.0"

try:
    from . import realline
    from . import spectral
    from .config import DEFAULT_CONFIG, debug_log, load_config
    from .errors import OrfError, ValidationError, error_payload
    from .matrices import RepKind, RepSpec, build_matrix, matrix_to_csv, matrix_to_json
    from .measures import load_measure, measure_from_json, measure_to_json, orf_from_measure
    from .moebius import Domain, PoleSeq
    from .orfcore import ParamSeq
except ImportError:
    import realline
    import spectral
    from config import DEFAULT_CONFIG, debug_log, load_config
    from errors import OrfError, ValidationError, error_payload
    from matrices import RepKind, RepSpec, build_matrix, matrix_to_csv, matrix_to_json
    from measures import load_measure, measure_from_json, measure_to_json, orf_from_measure
    from moebius import Domain, PoleSeq
    from orfcore import ParamSeq


def parse_complex(text: str) -> complex:
    """Parse "re,im", "re" or "theta:angle".

    Raises:
        ValidationError: On malformed or non-finite input.
    """
    raw = str(text).strip()
    try:
        if raw.startswith("theta:"):
            value = cmath.exp(1j * float(raw[len("theta:") :]))
        elif "," in raw:
            re_part, im_part = raw.split(",")
            value = complex(float(re_part), float(im_part))
        else:
            value = complex(float(raw), 0.0)
    except ValueError as e:
        raise ValidationError(f"cannot parse complex value {raw!r}") from e
    if not (math.isfinite(value.real) and math.isfinite(value.imag)):
        raise ValidationError(f"complex value {raw!r} is not finite")
    return value


def parse_complex_list(value: "str | list | None") -> tuple[complex, ...]:
    """Parse a ";"-separated string or a JSON list of values or [re, im] pairs."""
    if value is None:
        return ()
    if isinstance(value, str):
        items: list[Any] = [item for item in value.split(";") if item.strip()]
    else:
        items = list(value)
    parsed = []
    for item in items:
        if isinstance(item, (list, tuple)):
            if len(item) != 2:
                raise ValidationError(f"expected an [re, im] pair, got {item!r}")
            try:
                parsed.append(complex(float(item[0]), float(item[1])))
            except (TypeError, ValueError) as e:
                raise ValidationError(f"cannot parse complex pair {item!r}") from e
        elif isinstance(item, (int, float)):
            parsed.append(complex(item))
        else:
            parsed.append(parse_complex(item))
    return tuple(parsed)


def _optional_complex(value: Any) -> complex | None:
    if value is None:
        return None
    if isinstance(value, (list, tuple)):
        return parse_complex_list([value])[0]
    if isinstance(value, (int, float)):
        return complex(value)
    return parse_complex(value)


@dataclass
class JobConfig:
    """One CLI job, after flags and the optional job file are merged."""

    command: str
    measure: str | None = None  # path of a measure JSON file
    poles: tuple[complex, ...] | None = None  # None means α_0 for every index
    params: tuple[complex, ...] = ()
    terminal: complex | None = None
    order: int | None = None
    boundary: complex | None = None
    kind: str = "cmv"
    via: str = "U"
    domain: str = "circle"
    lambdas: tuple[complex, ...] = ()
    arc_a: float | None = None
    arc_alpha: complex = 0j
    allow_infinity: bool = False
    out: str | None = None
    format: str = "csv"
    settings: dict[str, Any] = field(default_factory=dict)

    def __post_init__(self) -> None:
        if self.domain not in ("circle", "line"):
            raise ValidationError(f"unknown domain {self.domain!r}")
        if self.format not in ("csv", "json"):
            raise ValidationError(f"unknown output format {self.format!r}")
        if self.order is not None and self.order < 1:
            raise ValidationError(f"order must be at least 1, got {self.order}")
        if self.arc_a is not None and not math.isfinite(self.arc_a):
            raise ValidationError("arc parameter a is not finite")
        if self.kind not in {kind.value for kind in RepKind}:
            raise ValidationError(f"unknown representation kind {self.kind!r}")
        if self.via not in {route.value for route in spectral.ZeroRoute}:
            raise ValidationError(f"unknown zero route {self.via!r}")

    @property
    def domain_enum(self) -> Domain:
        return Domain(self.domain)

    def pole_seq(self, count: int) -> PoleSeq:
        """Poles from the job, or count copies of α_0 when none were given."""
        margin = self.settings.get("compactnessMargin", 1e-8)
        if self.poles is None:
            return PoleSeq(tuple([self.domain_enum.alpha0] * count), self.domain_enum, margin)
        return PoleSeq(self.poles, self.domain_enum, margin)

    def solver_settings(self) -> dict[str, Any]:
        """Loaded tolerances and caps as keyword arguments for the numerical routines."""
        settings = {**DEFAULT_CONFIG, **self.settings}
        return {
            "max_order": settings["eigensolverMaxOrder"],
            "condition_limit": settings["conditionLimit"],
            "unit_tolerance": settings["unitEigenvalueTolerance"],
            "pole_tolerance": settings["poleEvaluationTolerance"],
        }

    def param_seq(self) -> ParamSeq:
        return ParamSeq(self.params, self.terminal)

    def require_order(self) -> int:
        if self.order is None:
            raise ValidationError(f"{self.command} needs --order")
        return self.order


def _job_file_overrides(path: str) -> dict[str, Any]:
    """Read a job JSON file into JobConfig field overrides."""
    try:
        with open(path) as f:
            data = json.load(f)
    except (OSError, json.JSONDecodeError) as e:
        raise ValidationError(f"cannot read job file {path}: {e}") from e
    if not isinstance(data, dict):
        raise ValidationError(f"job file {path} must hold a JSON object")

    overrides: dict[str, Any] = {}
    for key in ("measure", "kind", "via", "domain", "out", "format"):
        if key in data:
            overrides[key] = data[key]
    if "poles" in data:
        overrides["poles"] = parse_complex_list(data["poles"])
    if "params" in data:
        overrides["params"] = parse_complex_list(data["params"])
    if "lambdas" in data:
        overrides["lambdas"] = parse_complex_list(data["lambdas"])
    renames = (("terminal", "terminal"), ("boundary", "boundary"), ("arcAlpha", "arc_alpha"))
    for key, name in renames:
        if key in data:
            overrides[name] = _optional_complex(data[key])
    try:
        if "order" in data:
            overrides["order"] = int(data["order"])
        if "arcA" in data:
            overrides["arc_a"] = float(data["arcA"])
    except (TypeError, ValueError) as e:
        raise ValidationError(f"job file {path} has a malformed number: {e}") from e
    if "allowInfinity" in data:
        overrides["allow_infinity"] = bool(data["allowInfinity"])
    return overrides


def job_from_args(args: argparse.Namespace) -> JobConfig:
    """Build the JobConfig; a --config job file wins over flags."""
    settings = load_config(getattr(args, "project", None))
    lambdas = tuple(
        parse_complex(value)
        for value in (getattr(args, "lam", None), getattr(args, "lam2", None))
        if value is not None
    )
    job = JobConfig(
        command=args.command,
        measure=getattr(args, "measure", None),
        poles=parse_complex_list(args.poles) if getattr(args, "poles", None) else None,
        params=parse_complex_list(getattr(args, "params", None)),
        terminal=_optional_complex(getattr(args, "terminal", None)),
        order=getattr(args, "order", None),
        boundary=_optional_complex(getattr(args, "boundary", None)),
        kind=getattr(args, "kind", None) or "cmv",
        via=getattr(args, "via", None) or "U",
        domain=getattr(args, "domain", None) or "circle",
        lambdas=lambdas,
        arc_a=getattr(args, "arc_a", None),
        arc_alpha=_optional_complex(getattr(args, "arc_alpha", None)) or 0j,
        allow_infinity=getattr(args, "allow_infinity", False),
        out=getattr(args, "out", None),
        format=getattr(args, "format", None) or settings["outputFormat"],
        settings=settings,
    )
    config_path = getattr(args, "config", None)
    if config_path:
        job = replace(job, **_job_file_overrides(config_path))
    return job


def _fmt(x: float, precision: int) -> str:
    return f"{x:.{precision}g}"


def _complex_rows(values, precision: int) -> str:
    lines = ["re,im"]
    for z in values:
        if not np.isfinite(z):
            lines.append("inf,0")
        else:
            lines.append(f"{_fmt(z.real, precision)},{_fmt(z.imag, precision)}")
    return "\n".join(lines) + "\n"


def _complex_json(z: complex) -> dict[str, Any]:
    if not np.isfinite(z):
        return {"re": 0.0, "im": 0.0, "infinity": True}
    return {"re": float(z.real), "im": float(z.imag), "infinity": False}


def _emit(job: JobConfig, text: str) -> None:
    if job.out:
        Path(job.out).write_text(text)
        debug_log("cli", f"wrote {job.out}")
    else:
        sys.stdout.write(text)


def _dump_json(data: Any) -> str:
    return json.dumps(data, indent=2) + "\n"


def run_params(job: JobConfig) -> str:
    if not job.measure:
        raise ValidationError("params needs --measure")
    mu = load_measure(job.measure)
    if mu.domain is not job.domain_enum:
        job = replace(job, domain=mu.domain.value)
    order = job.order or len(mu)
    result = orf_from_measure(
        mu,
        job.pole_seq(order),
        order,
        job.settings.get("gramBreakdownRatio", 1e-13),
        job.solver_settings()["pole_tolerance"],
    )
    precision = job.settings.get("outputPrecision", 17)
    if job.format == "json":
        return _dump_json(
            {
                "params": [_complex_json(z) for z in result.a.a],
                "terminal": None if result.terminal is None else _complex_json(result.terminal),
            }
        )
    lines = ["k,re,im,kind"]
    for k, z in enumerate(result.a.a, start=1):
        lines.append(f"{k},{_fmt(z.real, precision)},{_fmt(z.imag, precision)},param")
    if result.terminal is not None:
        u = result.terminal
        real, imag = _fmt(u.real, precision), _fmt(u.imag, precision)
        lines.append(f"{result.a.order},{real},{imag},terminal")
    return "\n".join(lines) + "\n"


def run_matrix(job: JobConfig) -> str:
    n = job.require_order()
    a = job.param_seq()
    spec = RepSpec(RepKind(job.kind), n, job.boundary)
    solver = job.solver_settings()
    M = build_matrix(
        a, job.pole_seq(n), spec, solver["condition_limit"], solver["unit_tolerance"]
    )
    if job.format == "json":
        return _dump_json(matrix_to_json(M, spec.kind))
    return matrix_to_csv(M, job.settings.get("outputPrecision", 17))


def run_zeros(job: JobConfig) -> str:
    n = job.require_order()
    solver = job.solver_settings()
    values = spectral.zeros_orf(
        job.param_seq(),
        job.pole_seq(n),
        n,
        job.via,
        max_order=solver["max_order"],
        condition_limit=solver["condition_limit"],
    )
    if job.format == "json":
        return _dump_json({"zeros": [_complex_json(z) for z in values]})
    return _complex_rows(values, job.settings.get("outputPrecision", 17))


def run_quad(job: JobConfig) -> str:
    n = job.require_order()
    if job.boundary is None:
        raise ValidationError("quad needs --boundary v")
    a = job.param_seq()
    poles = job.pole_seq(n)
    collision = job.settings.get("nodeCollisionTolerance", 1e-10)
    if poles.domain is Domain.LINE:
        quadrature = realline.rl_quadrature(
            a,
            poles,
            n,
            job.boundary,
            job.allow_infinity,
            collision_tolerance=collision,
            proximity=job.settings.get("poleProximity", 1e-12),
            **job.solver_settings(),
        )
    else:
        quadrature = spectral.porf_quadrature(
            a, poles, n, job.boundary, collision, **job.solver_settings()
        )
    if job.format == "json":
        document = measure_to_json(quadrature.measure)
        document["formulaWeights"] = [float(w) for w in quadrature.formula_weights]
        return _dump_json(document)
    return spectral.quadrature_to_csv(quadrature, job.settings.get("outputPrecision", 17))


def run_reconstruct(job: JobConfig) -> str:
    a = job.param_seq()
    if a.terminal is None:
        raise ValidationError("reconstruct needs --terminal")
    poles = job.pole_seq(a.order)
    if poles.domain is Domain.LINE:
        solver = job.solver_settings()
        mu = realline.rl_reconstruct_measure(
            a,
            poles,
            solver["unit_tolerance"],
            solver["max_order"],
            solver["condition_limit"],
        )
    else:
        mu = spectral.reconstruct_measure(a, poles, **job.solver_settings())
    return _dump_json(measure_to_json(mu))


def run_diagnose(job: JobConfig) -> str:
    a = job.param_seq()
    poles = job.pole_seq(len(a))
    tolerance = job.settings.get("clusterTolerance", 1e-3)
    fraction = job.settings.get("clusterTailFraction", 0.2)
    limits = spectral.limit_point_sequence(a, poles)
    report: dict[str, Any] = {
        "limitPoints": [_complex_json(z) for z in limits],
        "clusters": [
            {"center": _complex_json(c.center), "size": c.size}
            for c in spectral.trailing_clusters(limits, tolerance, fraction)
        ],
    }
    if len(job.lambdas) >= 1:
        report["singlePoint"] = [
            float(x) for x in spectral.krein_single_point(a, poles, job.lambdas[0])
        ]
    if len(job.lambdas) >= 2:
        sequences = spectral.krein_two_point(a, poles, job.lambdas[0], job.lambdas[1])
        report["twoPoint"] = {
            "indices": [int(k) for k in sequences.indices],
            "rhoProducts": [float(x) for x in sequences.rho_products],
            "mixed": [float(x) for x in sequences.mixed],
            "quadratic": [float(x) for x in sequences.quadratic],
        }
    if job.arc_a is not None:
        if not job.lambdas:
            raise ValidationError("the arc report needs --lambda")
        arc = spectral.lopez_arc(job.arc_alpha, job.arc_a, job.lambdas[0])
        report["arc"] = {
            "halfAngle": arc.half_angle,
            "start": _complex_json(arc.start),
            "end": _complex_json(arc.end),
            "excludedPoint": _complex_json(arc.excluded_point),
        }
    return _dump_json(report)


def validate(path: str, settings: dict[str, Any] | None = None) -> list[str]:
    """Check a measure or job file and return the list of problems found.

    Args:
        path: JSON file holding a measure ("points"/"weights") or a job.
        settings: Loaded configuration (defaults when omitted).

    Returns:
        Human-readable issues; empty when the file is valid.

    Raises:
        ValidationError: If the file cannot be read or parsed as JSON.
    """
    settings = settings or load_config()
    try:
        with open(path) as f:
            data = json.load(f)
    except (OSError, json.JSONDecodeError) as e:
        raise ValidationError(f"cannot read {path}: {e}") from e
    if not isinstance(data, dict):
        return ["top-level JSON value must be an object"]

    issues: list[str] = []
    if "points" in data or "weights" in data:
        try:
            measure_from_json(data)
        except ValidationError as e:
            issues.append(f"measure: {e}")
        return issues

    domain = data.get("domain", "circle")
    try:
        domain_enum = Domain(domain)
    except ValueError:
        return [f"unknown domain {domain!r}"]
    checks = [
        ("poles", lambda: PoleSeq(
            parse_complex_list(data["poles"]), domain_enum, settings["compactnessMargin"]
        )),
        ("params", lambda: ParamSeq(
            parse_complex_list(data["params"]), _optional_complex(data.get("terminal"))
        )),
        ("boundary", lambda: _check_unimodular(_optional_complex(data["boundary"]))),
    ]
    for key, check in checks:
        if key not in data:
            continue
        try:
            check()
        except (ValidationError, TypeError, ValueError) as e:
            issues.append(f"{key}: {e}")
    return issues


def _check_unimodular(value: complex | None) -> None:
    if value is not None and abs(abs(value) - 1.0) > 1e-10:
        raise ValidationError(f"boundary value {value} is not unimodular (|v| = {abs(value)})")


RUNNERS = {
    "params": run_params,
    "matrix": run_matrix,
    "zeros": run_zeros,
    "quad": run_quad,
    "reconstruct": run_reconstruct,
    "diagnose": run_diagnose,
}


def run(job: JobConfig) -> int:
    """Execute one job and write its output.

    Returns:
        0 on success.

    Raises:
        OrfError: Library errors propagate to the caller (main maps them to exit codes).
    """
    runner = RUNNERS.get(job.command)
    if runner is None:
        raise ValidationError(f"unknown command {job.command!r}")
    debug_log("cli", f"running {job.command} ({job.domain})")
    _emit(job, runner(job))
    return 0


def cmd_compute(args) -> int:
    """Run one of the computing subcommands."""
    threads = getattr(args, "threads", None)
    if threads is not None:
        if threads < 1:
            raise ValidationError(f"--threads must be at least 1, got {threads}")
        debug_log("cli", f"--threads {threads} ignored; BLAS threading follows the environment")
    return run(job_from_args(args))


def cmd_validate(args) -> int:
    """Validate a measure or job file."""
    issues = validate(args.file, load_config(args.project))
    print(json.dumps({"file": args.file, "valid": not issues, "issues": issues}, indent=2))
    return 0 if not issues else ValidationError.exit_code


def _add_common(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--poles", help="Poles α_1;α_2;... (default: α_0 throughout)")
    parser.add_argument("--domain", choices=["circle", "line"], help="circle (default) or line")
    parser.add_argument("--config", help="JSON job file; its keys override flags")
    parser.add_argument("--out", "-o", help="Output file (default: stdout)")
    parser.add_argument("--format", "-f", choices=["csv", "json"], help="Output format")
    parser.add_argument("--project", help="Project directory for .orfspectral/settings.json")
    parser.add_argument(
        "--threads", type=int, help="Accepted and ignored; BLAS threads follow the environment"
    )


def _add_params(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--params", "-a", help="Parameters a_1;a_2;...")
    parser.add_argument("--order", "-n", type=int, required=False, help="Order n")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="orfspec",
        description="orf-spectral - matrix representations, zeros and quadrature of ORFs",
        formatter_class=argparse.RawDescriptionHelpFormatter,
    )
    parser.add_argument(
        "--version", "-V", action="version", version=f"%(prog)s {__version__}"
    )

    subparsers = parser.add_subparsers(dest="command", help="Commands")

    # params
    params_parser = subparsers.add_parser("params", help="Extract parameters from a measure")
    params_parser.add_argument("--measure", "-m", help="Measure JSON file")
    params_parser.add_argument("--order", "-n", type=int, help="Number of parameters")
    _add_common(params_parser)

    # matrix
    matrix_parser = subparsers.add_parser("matrix", help="Dump a matrix representation")
    _add_params(matrix_parser)
    matrix_parser.add_argument(
        "--kind", "-k", choices=[kind.value for kind in RepKind], help="Representation"
    )
    matrix_parser.add_argument("--boundary", "-u", help="Unimodular boundary value u")
    _add_common(matrix_parser)

    # zeros
    zeros_parser = subparsers.add_parser("zeros", help="Zeros of phi_n")
    _add_params(zeros_parser)
    zeros_parser.add_argument(
        "--via", choices=[route.value for route in spectral.ZeroRoute], help="Matrix route"
    )
    _add_common(zeros_parser)

    # quad
    quad_parser = subparsers.add_parser("quad", help="Para-orthogonal quadrature")
    _add_params(quad_parser)
    quad_parser.add_argument("--boundary", "-v", help="Unimodular PORF parameter v")
    quad_parser.add_argument(
        "--allow-infinity", action="store_true",
        help="Line only: accept a node at infinity at the excluded v",
    )
    _add_common(quad_parser)

    # reconstruct
    reconstruct_parser = subparsers.add_parser("reconstruct", help="Measure from parameters")
    reconstruct_parser.add_argument("--params", "-a", help="Parameters a_1;...;a_{N-1}")
    reconstruct_parser.add_argument("--terminal", "-u", help="Unimodular terminal value")
    _add_common(reconstruct_parser)

    # diagnose
    diagnose_parser = subparsers.add_parser("diagnose", help="Limit point diagnostics")
    diagnose_parser.add_argument("--params", "-a", help="Parameters a_1;a_2;...")
    diagnose_parser.add_argument("--lambda", dest="lam", help="Candidate limit point")
    diagnose_parser.add_argument("--lambda2", dest="lam2", help="Second candidate limit point")
    diagnose_parser.add_argument("--arc-a", type=float, help="Arc parameter a in [0, 1]")
    diagnose_parser.add_argument("--arc-alpha", help="Arc pole alpha (default 0)")
    _add_common(diagnose_parser)

    # validate
    validate_parser = subparsers.add_parser("validate", help="Check a measure or job file")
    validate_parser.add_argument("file", help="JSON file to check")
    validate_parser.add_argument("--project", help="Project directory for settings")

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)

    commands = {
        "params": cmd_compute,
        "matrix": cmd_compute,
        "zeros": cmd_compute,
        "quad": cmd_compute,
        "reconstruct": cmd_compute,
        "diagnose": cmd_compute,
        "validate": cmd_validate,
    }

    handler = commands.get(args.command)
    if handler is None:
        parser.print_help()
        return 1
    try:
        return handler(args)
    except OrfError as e:
        print(json.dumps(error_payload(e)), file=sys.stderr)
        return e.exit_code


if __name__ == "__main__":
    sys.exit(main())

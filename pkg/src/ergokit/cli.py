"""Command-line front-end.

Subcommands: figure1 (reference curves), ergotropy (one state family),
verify (invariant suites), sweep (CSV parameter scans) and protocol
(bias-steering demos).  Exit codes: 0 success, 1 verification failure,
2 usage or domain error, 3 infeasibility.
"""

from __future__ import annotations

import argparse
import sys
from dataclasses import dataclass, field
from pathlib import Path

from .analysis import Bipartition, min_pt_eigenvalue
from .core import (
    DEFAULT_DIM_CAP,
    SystemSpec,
    build_hamiltonian,
    von_neumann_entropy,
)
from .errors import (
    CapacityError,
    DomainError,
    ErgokitError,
    InfeasibilityError,
    ShapeError,
    UnsupportedError,
    ValidityError,
)
from .families import (
    diagonal_state_at_entropy,
    dicke_thermal_mixture,
    entangled_pure_state,
    separable_optimal_state,
)
from .figures import figure1_rows
from .passivity import ergotropy
from .protocols import inversion_sequence_to_bias, prepare_locally_thermal
from .reporting import emit_csv, svg_line_chart
from .verify import DEFAULT_SEED, format_report, run_suite

STATE_FAMILIES = ("entangled", "separable", "dicke", "fixed-entropy")
SWEEP_FAMILIES = STATE_FAMILIES + ("protocol",)

FIGURE1_COLUMNS = ("n", "entangled_ratio", "separable_ratio", "entropy_bound_ratio")

SWEEP_COLUMNS = (
    "family", "n", "beta", "status", "initial_energy", "entropy", "ergotropy",
    "bound_total_energy", "bound_entropy", "ratio_to_bound", "ppt_min_eig",
    "target_bias", "achieved_bias", "residual", "note",
)


@dataclass(frozen=True)
class SweepConfig:
    """One sweep invocation: a state family scanned over ensemble sizes."""

    family: str
    n_values: tuple[int, ...]
    d: int = 2
    beta: float = 1.0
    local_energies: tuple[float, ...] | None = None
    total_entropy: float | None = None
    beta_prime: float | None = None
    target_biases: tuple[float, ...] = field(default_factory=tuple)
    include_ppt: bool = False
    dim_cap: int = DEFAULT_DIM_CAP

    def __post_init__(self):
        if self.family not in SWEEP_FAMILIES:
            raise DomainError(f"unknown family {self.family!r}")
        if not self.n_values:
            raise DomainError("sweep needs at least one ensemble size")


def _spec(n: int, d: int, beta: float, ladder, dim_cap: int) -> SystemSpec:
    energies = tuple(float(x) for x in ladder) if ladder else tuple(float(a) for a in range(d))
    return SystemSpec(n=n, d=d, local_energies=energies, beta=beta, dim_cap=dim_cap)


def build_family_state(spec: SystemSpec, family: str, total_entropy=None):
    if family == "entangled":
        return entangled_pure_state(spec)
    if family == "separable":
        return separable_optimal_state(spec)
    if family == "dicke":
        return dicke_thermal_mixture(spec)
    if family == "fixed-entropy":
        if total_entropy is None:
            raise DomainError("the fixed-entropy family needs --total-entropy")
        return diagonal_state_at_entropy(spec, total_entropy)[0]
    raise DomainError(f"unknown state family {family!r}")


def sweep_rows(config: SweepConfig) -> list[dict]:
    rows = []
    for n in config.n_values:
        if config.family == "protocol":
            rows.extend(_protocol_cells(config, n))
        else:
            rows.append(_family_cell(config, n))
    return rows


def _base_row(config: SweepConfig, n: int) -> dict:
    return {"family": config.family, "n": n, "beta": config.beta, "status": "ok"}


def _family_cell(config: SweepConfig, n: int) -> dict:
    row = _base_row(config, n)
    try:
        spec = _spec(n, config.d, config.beta, config.local_energies, config.dim_cap)
        state = build_family_state(spec, config.family, config.total_entropy)
        entropy = von_neumann_entropy(state)
        report = ergotropy(state, build_hamiltonian(spec), spec, total_entropy=entropy)
        row.update(
            initial_energy=report.initial_energy,
            entropy=entropy,
            ergotropy=report.ergotropy,
            bound_total_energy=report.bound_total_energy,
            bound_entropy=report.bound_entropy,
            ratio_to_bound=report.ratio_to_bound,
        )
        if config.include_ppt and 2 <= n <= 8:
            row["ppt_min_eig"] = min_pt_eigenvalue(state, spec, Bipartition.half_split(n))
    except (DomainError, UnsupportedError, CapacityError, InfeasibilityError) as exc:
        row["status"] = "infeasible"
        row["note"] = _note(exc)
    return row


def _protocol_cells(config: SweepConfig, n: int) -> list[dict]:
    cells = []
    targets = config.target_biases or (0.0,)
    for target in targets:
        row = _base_row(config, n)
        row["target_bias"] = target
        try:
            spec = _spec(n, config.d, config.beta, config.local_energies, config.dim_cap)
            beta_prime = config.beta if config.beta_prime is None else config.beta_prime
            result = inversion_sequence_to_bias(spec, beta_prime, target)
            row.update(
                achieved_bias=result.achieved_bias,
                residual=result.residual,
                entropy=von_neumann_entropy(result.state),
            )
        except (DomainError, UnsupportedError, CapacityError, InfeasibilityError) as exc:
            row["status"] = "infeasible"
            row["note"] = _note(exc)
        cells.append(row)
    return cells


def _note(exc: Exception) -> str:
    return str(exc).replace(",", ";").replace("\n", " ")


# ---------------------------------------------------------------------------
# argument plumbing
# ---------------------------------------------------------------------------

def _parse_ladder(text):
    if text is None:
        return None
    return tuple(float(x) for x in str(text).split(","))


def _parse_n_range(text: str) -> tuple[int, ...]:
    if ":" in text:
        lo, hi = text.split(":", 1)
        lo, hi = int(lo), int(hi)
        if hi < lo:
            raise DomainError(f"empty range {text!r}")
        return tuple(range(lo, hi + 1))
    return (int(text),)


_CONFIG_COERCE = {
    "beta": float, "beta_prime": float, "total_entropy": float,
    "target_bias": lambda v: [float(x) for x in str(v).split()],
    "n": str, "n_max": int, "d": int, "seed": int, "dim_cap": int,
    "energy_ladder": str, "out": str, "format": str, "family": str,
    "suite": str, "kind": str, "ppt": lambda v: str(v).lower() in ("1", "true", "yes"),
}


def load_config_file(path) -> dict:
    """Read one `key = value` per line; '#' starts a comment."""
    values = {}
    for raw in Path(path).read_text(encoding="utf-8").splitlines():
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise DomainError(f"config line is not key = value: {raw!r}")
        key, value = (part.strip() for part in line.split("=", 1))
        dest = key.replace("-", "_")
        if dest not in _CONFIG_COERCE:
            raise DomainError(f"unknown config key {key!r}")
        values[dest] = _CONFIG_COERCE[dest](value)
    return values


def _scan_config(argv) -> dict:
    for i, token in enumerate(argv):
        if token == "--config" and i + 1 < len(argv):
            return load_config_file(argv[i + 1])
        if token.startswith("--config="):
            return load_config_file(token.split("=", 1)[1])
    return {}


def build_parser(defaults: dict | None = None) -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="key = value file; flags override it")
    common.add_argument("--beta", type=float, default=1.0,
                        help="reference inverse temperature (units 1/E_1)")
    common.add_argument("--energy-ladder", dest="energy_ladder",
                        help="comma-separated local energies, ground first (default 0,1,...,d-1)")
    common.add_argument("--d", type=int, default=2, help="local dimension")
    common.add_argument("--seed", type=int, default=DEFAULT_SEED)
    common.add_argument("--out", help="output file path")
    common.add_argument("--format", choices=("csv", "svg", "both"), default="csv")
    common.add_argument("--dim-cap", dest="dim_cap", type=int, default=DEFAULT_DIM_CAP)

    parser = argparse.ArgumentParser(prog="ergokit",
                                     description="work extraction from correlated locally thermal states")
    sub = parser.add_subparsers(dest="command", required=True)

    fig = sub.add_parser("figure1", parents=[common],
                         help="emit the three reference work-ratio curves")
    fig.add_argument("--n-max", dest="n_max", type=int, default=20)
    fig.set_defaults(handler=_cmd_figure1)

    erg = sub.add_parser("ergotropy", parents=[common],
                         help="work report for one state family")
    erg.add_argument("--family", choices=STATE_FAMILIES, required=True)
    erg.add_argument("--n", required=True)
    erg.add_argument("--total-entropy", dest="total_entropy", type=float)
    erg.set_defaults(handler=_cmd_ergotropy)

    ver = sub.add_parser("verify", parents=[common], help="run invariant suites")
    ver.add_argument("--suite", choices=("all", "passivity", "protocols",
                                         "entanglement", "bounds"), default="all")
    ver.set_defaults(handler=_cmd_verify)

    swp = sub.add_parser("sweep", parents=[common], help="scan a family over n, emit CSV")
    swp.add_argument("--family", choices=SWEEP_FAMILIES, required=True)
    swp.add_argument("--n", required=True, help="single size or inclusive range lo:hi")
    swp.add_argument("--total-entropy", dest="total_entropy", type=float)
    swp.add_argument("--beta-prime", dest="beta_prime", type=float)
    swp.add_argument("--target-bias", dest="target_bias", type=float, action="append")
    swp.add_argument("--ppt", action="store_true",
                     help="add the half-split partial-transpose minimum (n <= 8)")
    swp.set_defaults(handler=_cmd_sweep)

    pro = sub.add_parser("protocol", parents=[common], help="bias-steering demos")
    pro.add_argument("--kind", choices=("rotate", "invert"), default="rotate")
    pro.add_argument("--n", required=True)
    pro.add_argument("--beta-prime", dest="beta_prime", type=float, required=True)
    pro.add_argument("--target-bias", dest="target_bias", type=float, default=0.0)
    pro.set_defaults(handler=_cmd_protocol)

    if defaults:
        for p in (fig, erg, ver, swp, pro):
            valid = {k: v for k, v in defaults.items()
                     if any(a.dest == k for a in p._actions)}
            p.set_defaults(**valid)
    return parser


# ---------------------------------------------------------------------------
# subcommand handlers
# ---------------------------------------------------------------------------

def _outputs(args, rows, columns, series, default_stem: str) -> int:
    if args.out is None and args.format == "csv":
        sys.stdout.write(emit_csv(columns, rows))
        return 0
    stem = Path(args.out) if args.out else Path(f"{default_stem}.csv")
    if args.format in ("csv", "both"):
        csv_path = stem if stem.suffix == ".csv" else stem.with_suffix(".csv")
        emit_csv(columns, rows, csv_path)
        print(f"wrote {csv_path}")
    if args.format in ("svg", "both"):
        svg_path = stem.with_suffix(".svg")
        svg_line_chart(series, svg_path, title=default_stem,
                       x_label="n", y_label="work ratio")
        print(f"wrote {svg_path}")
    return 0


def _cmd_figure1(args) -> int:
    rows = figure1_rows(args.beta, args.n_max)
    table = [
        {
            "n": r.n,
            "entangled_ratio": r.entangled_ratio,
            "separable_ratio": r.separable_ratio,
            "entropy_bound_ratio": r.entropy_bound_ratio,
        }
        for r in rows
    ]
    ns = [r.n for r in rows]
    series = [
        ("entangled", ns, [r.entangled_ratio for r in rows]),
        ("separable", ns, [r.separable_ratio for r in rows]),
        ("entropy bound", ns, [r.entropy_bound_ratio for r in rows]),
    ]
    return _outputs(args, table, FIGURE1_COLUMNS, series, "figure1")


def _cmd_ergotropy(args) -> int:
    n = int(args.n)
    spec = _spec(n, args.d, args.beta, _parse_ladder(args.energy_ladder), args.dim_cap)
    state = build_family_state(spec, args.family, args.total_entropy)
    entropy = von_neumann_entropy(state)
    report = ergotropy(state, build_hamiltonian(spec), spec, total_entropy=entropy)
    values = {
        "family": args.family,
        "n": n,
        "beta": args.beta,
        "initial_energy": report.initial_energy,
        "passive_energy": report.passive_energy,
        "ergotropy": report.ergotropy,
        "entropy": entropy,
        "bound_total_energy": report.bound_total_energy,
        "bound_entropy": report.bound_entropy,
        "ratio_to_bound": report.ratio_to_bound,
    }
    for key, value in values.items():
        print(f"{key} = {value if not isinstance(value, float) else f'{value:.12g}'}")
    if args.out:
        emit_csv(tuple(values), [values], args.out)
        print(f"wrote {args.out}")
    return 0


def _cmd_verify(args) -> int:
    results = run_suite(args.suite, seed=args.seed)
    print(format_report(results, seed=args.seed))
    return 0 if all(r.passed for r in results) else 1


def _cmd_sweep(args) -> int:
    config = SweepConfig(
        family=args.family,
        n_values=_parse_n_range(args.n),
        d=args.d,
        beta=args.beta,
        local_energies=_parse_ladder(args.energy_ladder),
        total_entropy=args.total_entropy,
        beta_prime=args.beta_prime,
        target_biases=tuple(args.target_bias or ()),
        include_ppt=args.ppt,
        dim_cap=args.dim_cap,
    )
    rows = sweep_rows(config)
    ns = [r["n"] for r in rows]
    works = [r.get("ergotropy") or 0.0 for r in rows]
    series = [(config.family, ns, works)]
    return _outputs(args, rows, SWEEP_COLUMNS, series, f"sweep_{config.family}")


def _cmd_protocol(args) -> int:
    n = int(args.n)
    spec = _spec(n, args.d, args.beta, _parse_ladder(args.energy_ladder), args.dim_cap)
    if args.kind == "rotate":
        result = prepare_locally_thermal(spec, args.beta_prime, args.target_bias)
        extra = {"angle": result.angle}
    else:
        result = inversion_sequence_to_bias(spec, args.beta_prime, args.target_bias)
        extra = {"levels": " ".join(str(l) for l in result.levels) or "(none)"}
    values = {
        "kind": args.kind,
        "n": n,
        "beta_prime": args.beta_prime,
        "target_bias": result.target_bias,
        "achieved_bias": result.achieved_bias,
        "residual": result.residual,
        "beta_local": result.beta_local,
        "entropy": von_neumann_entropy(result.state),
        **extra,
    }
    for key, value in values.items():
        print(f"{key} = {value if not isinstance(value, float) else f'{value:.12g}'}")
    return 0


def main(argv=None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    try:
        defaults = _scan_config(argv)
        parser = build_parser(defaults)
        args = parser.parse_args(argv)
        return args.handler(args)
    except InfeasibilityError as exc:
        print(f"infeasible: {exc}", file=sys.stderr)
        return 3
    except (DomainError, UnsupportedError, ShapeError, ValidityError,
            CapacityError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except ErgokitError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())

"""Command-line front end: simulate, derive, superpose, verify.

Configuration files are flat INI with a [potential] or [riccati] section
holding time-function expressions in the term grammar, a [run] section
with the time window and integrator settings, and an optional [ics]
section listing initial conditions one per key::

    [potential]
    a0 = poly 0
    a1 = poly 0
    a2 = poly 1

    [run]
    t0 = 0.0
    t1 = 1.0
    step = 0.01
    tol = 1e-10
    seed = 1234

    [ics]
    ic1 = 0.0 -0.25
    ic2 = 0.5 -1.0

All numeric output is CSV with a header row and 17-significant-digit
decimals, which reproduces IEEE doubles bit-for-bit on re-read.

Exit codes: 0 success, 1 verification failure, 2 config/parse error,
3 domain error, 4 genericity error, 5 numeric failure.
"""

from __future__ import annotations

import argparse
import configparser
import os
import sys
from dataclasses import dataclass

import numpy as np

from . import suites
from .errors import ConfigError, DomainError, GenericityError, NumericError
from .integrator import hamiltonian_guard, integrate, sample_at
from .model import (
    PhasePoint,
    PotentialSpec,
    RiccatiSpec,
    coefficients_from_potential,
    hamiltonian_field,
    potential_from_coefficients,
    riccati2_field,
)
from .superpose import Constants, integral_F0, integral_F1, integral_F2, superpose_point
from .timefn import parse_timefn

EXIT_OK = 0
EXIT_FAIL = 1
EXIT_CONFIG = 2
EXIT_DOMAIN = 3
EXIT_GENERICITY = 4
EXIT_NUMERIC = 5

SEED_ENV_VAR = "RICCATI_LIE_SEED"


# --- scenario loading -----------------------------------------------------


@dataclass
class Scenario:
    potential: PotentialSpec
    riccati: RiccatiSpec
    t0: float
    t1: float
    step: float
    tol: float
    seed: int
    ics: list
    source: str           # "potential" | "riccati"
    c0_residual: float    # consistency defect of the inverse map (riccati source)

    def grid(self) -> np.ndarray:
        n = max(1, round((self.t1 - self.t0) / self.step))
        return np.linspace(self.t0, self.t1, n + 1)


def _get(cfg, section, key, default=None):
    if cfg.has_option(section, key):
        return cfg.get(section, key)
    if default is None:
        raise ConfigError(f"missing [{section}] {key}")
    return default


def _get_float(cfg, section, key, default=None):
    raw = _get(cfg, section, key, default)
    try:
        return float(raw)
    except ValueError:
        raise ConfigError(f"[{section}] {key} must be a number, got {raw!r}") from None


def _parse_pair(raw: str):
    parts = raw.replace(",", " ").split()
    if len(parts) != 2:
        raise ConfigError(f"expected two numbers, got {raw!r}")
    try:
        return (float(parts[0]), float(parts[1]))
    except ValueError:
        raise ConfigError(f"expected two numbers, got {raw!r}") from None


def load_scenario(path: str) -> Scenario:
    cfg = configparser.ConfigParser()
    try:
        read = cfg.read(path)
    except configparser.Error as exc:
        raise ConfigError(f"cannot parse {path}: {exc}") from exc
    if not read:
        raise ConfigError(f"cannot read config file {path}")

    has_pot = cfg.has_section("potential")
    has_ric = cfg.has_section("riccati")
    if has_pot == has_ric:
        raise ConfigError("config needs exactly one of [potential] or [riccati]")

    t0 = _get_float(cfg, "run", "t0", "0.0")
    t1 = _get_float(cfg, "run", "t1", "1.0")
    step = _get_float(cfg, "run", "step", "0.01")
    tol = _get_float(cfg, "run", "tol", "1e-10")
    seed = int(_get_float(cfg, "run", "seed", "0"))
    if not t1 > t0:
        raise ConfigError(f"[run] needs t1 > t0, got t0={t0}, t1={t1}")
    if not step > 0.0:
        raise ConfigError(f"[run] step must be positive, got {step}")
    if not tol > 0.0:
        raise ConfigError(f"[run] tol must be positive, got {tol}")

    ics = []
    if cfg.has_section("ics"):
        for key in cfg["ics"]:
            ics.append(_parse_pair(cfg.get("ics", key)))

    grid = np.linspace(t0, t1, max(2, round((t1 - t0) / step) + 1))
    if has_pot:
        P = PotentialSpec(
            parse_timefn(_get(cfg, "potential", "a0")),
            parse_timefn(_get(cfg, "potential", "a1")),
            parse_timefn(_get(cfg, "potential", "a2")),
        )
        # no grid validation here: a2 > 0 is needed by the coefficient
        # correspondence (checked in `derive`), not by simulation itself
        R = coefficients_from_potential(P)
        source, residual = "potential", 0.0
    else:
        R = RiccatiSpec.from_cubic(
            parse_timefn(_get(cfg, "riccati", "c0")),
            parse_timefn(_get(cfg, "riccati", "c1")),
            parse_timefn(_get(cfg, "riccati", "c2")),
            parse_timefn(_get(cfg, "riccati", "c3")),
        )
        P, residual = potential_from_coefficients(R, grid)
        source = "riccati"
    return Scenario(P, R, t0, t1, step, tol, seed, ics, source, residual)


def scenario_seed(scenario: Scenario) -> int:
    raw = os.environ.get(SEED_ENV_VAR)
    if raw is not None:
        try:
            return int(raw)
        except ValueError:
            raise ConfigError(f"{SEED_ENV_VAR} must be an integer, got {raw!r}") from None
    return scenario.seed


# --- CSV ------------------------------------------------------------------


def _fmt(x: float) -> str:
    return format(float(x), ".17g")


def write_csv(path: str, header, rows) -> None:
    with open(path, "w") as fh:
        fh.write(",".join(header) + "\n")
        for row in rows:
            fh.write(",".join(_fmt(v) for v in row) + "\n")


def read_csv(path: str):
    """Read a solution table; returns (header, data array).

    Validates numeric cells and a strictly increasing first (time) column.
    """
    try:
        with open(path) as fh:
            lines = [line.strip() for line in fh if line.strip()]
    except OSError as exc:
        raise ConfigError(f"cannot read table {path}: {exc}") from exc
    if len(lines) < 2:
        raise ConfigError(f"table {path} needs a header and at least one row")
    header = lines[0].split(",")
    rows = []
    for ln, line in enumerate(lines[1:], start=2):
        cells = line.split(",")
        if len(cells) != len(header):
            raise ConfigError(f"{path}:{ln}: expected {len(header)} cells, got {len(cells)}")
        try:
            rows.append([float(c) for c in cells])
        except ValueError:
            raise ConfigError(f"{path}:{ln}: non-numeric cell") from None
    data = np.array(rows)
    if np.any(np.diff(data[:, 0]) <= 0):
        raise ConfigError(f"table {path}: time column must be strictly increasing")
    return header, data


@dataclass(frozen=True)
class SolutionTable:
    """A time column plus per-solution state pairs, CSV-backed."""

    header: list
    data: np.ndarray

    @classmethod
    def read(cls, path: str) -> "SolutionTable":
        header, data = read_csv(path)
        return cls(header, data)

    def write(self, path: str) -> None:
        write_csv(path, self.header, self.data)

    @property
    def ts(self) -> np.ndarray:
        return self.data[:, 0]

    def n_solutions(self) -> int:
        return (self.data.shape[1] - 1) // 2

    def solution_points(self, row: int):
        """Phase points of every solution at one table row."""
        vals = self.data[row]
        return [PhasePoint(vals[1 + 2 * j], vals[2 + 2 * j]) for j in range(self.n_solutions())]


# --- commands ---------------------------------------------------------------


def _resolve_ic(raw: str, scenario: Scenario):
    try:
        index = int(raw)
    except ValueError:
        return _parse_pair(raw)
    if not 0 <= index < len(scenario.ics):
        raise ConfigError(f"IC index {index} out of range; config has {len(scenario.ics)} ICs")
    return scenario.ics[index]


def cmd_simulate(args) -> int:
    scenario = load_scenario(args.config)
    ic = _resolve_ic(args.ic, scenario)
    if args.system == "hamiltonian":
        rhs = hamiltonian_field(scenario.potential)
        guard = hamiltonian_guard
        header = ["t", "x", "p"]
        if not ic[1] < 0:
            raise DomainError(f"hamiltonian IC needs p < 0, got p={ic[1]}")
    else:
        rhs = riccati2_field(scenario.riccati)
        guard = None
        header = ["t", "x", "v"]
    traj = integrate(
        rhs, (scenario.t0, ic), scenario.t1, scenario.tol,
        guard=guard, max_step=min(scenario.step, (scenario.t1 - scenario.t0) / 50.0),
        system=args.system,
    )
    grid = scenario.grid()
    rows = [(t, *sample_at(traj, t)) for t in grid]
    write_csv(args.out, header, rows)
    print(f"wrote {len(rows)} samples to {args.out} "
          f"({traj.stats.n_accepted} steps, {traj.stats.n_rhs} RHS evaluations)")
    return EXIT_OK


def cmd_derive(args) -> int:
    scenario = load_scenario(args.config)
    grid = scenario.grid()
    t0 = scenario.t0
    R, P = scenario.riccati, scenario.potential
    print(f"source = {scenario.source}")
    if scenario.source == "potential":
        coefficients_from_potential(P, grid)  # a2 > 0 validation
        for name in ("c0", "c1", "c2", "c3", "f0", "f1"):
            print(f"{name}(t0) = {_fmt(getattr(R, name).eval(t0))}")
        res_f1 = max(abs(R.f1.eval(t) - 3.0 * np.sqrt(R.c3.eval(t))) for t in grid)
        res_f0 = max(
            abs(
                R.f0.eval(t)
                - (R.c2.eval(t) / np.sqrt(R.c3.eval(t)) - R.c3.eval(t, 1) / (2.0 * R.c3.eval(t)))
            )
            for t in grid
        )
        print(f"f1_constraint_residual = {_fmt(res_f1)}")
        print(f"f0_constraint_residual = {_fmt(res_f0)}")
    else:
        for name in ("a0", "a1", "a2"):
            print(f"{name}(t0) = {_fmt(getattr(P, name).eval(t0))}")
        print(f"c0_defect_residual = {_fmt(scenario.c0_residual)}")
    return EXIT_OK


def _constants_from_table(args, table: SolutionTable) -> Constants:
    xi1, xi2, xi3 = table.solution_points(0)
    F0 = integral_F0(xi1, xi2, xi3)
    if args.k1 is not None or args.k2 is not None:
        if args.k1 is None or args.k2 is None:
            raise ConfigError("--k1 and --k2 must be given together")
        return Constants(args.k1, args.k2, F0)
    if args.fourth_ic is None:
        raise ConfigError("need either --k1/--k2 or --fourth-ic")
    x0, p0 = _parse_pair(args.fourth_ic)
    xi0 = PhasePoint(x0, p0)
    return Constants(integral_F1(xi0, xi1, xi2), integral_F2(xi0, xi1, xi3), F0)


def cmd_superpose(args) -> int:
    load_scenario(args.config)  # validates the scenario the table came from
    table = SolutionTable.read(args.sols)
    if len(table.header) != 7:
        raise ConfigError(
            f"solution table must have columns t,x1,p1,x2,p2,x3,p3; got {len(table.header)}"
        )
    k = _constants_from_table(args, table)
    rows = []
    for row in range(len(table.ts)):
        t = table.ts[row]
        try:
            rec = superpose_point(*table.solution_points(row), k)
        except GenericityError as exc:
            raise type(exc)(f"at t={t}: {exc}") from exc
        rows.append((t, rec.x, rec.p))
    write_csv(args.out, ["t", "x0", "p0"], rows)
    root, ext = os.path.splitext(args.out)
    upsilon_path = f"{root}_upsilon{ext or '.csv'}"
    write_csv(upsilon_path, ["t", "x0"], [(t, x) for t, x, _ in rows])
    print(f"wrote {len(rows)} reconstructed samples to {args.out} "
          f"(x-only view: {upsilon_path})")
    return EXIT_OK


def cmd_verify(args) -> int:
    scenario = load_scenario(args.config)
    rng = np.random.default_rng(scenario_seed(scenario))
    results = suites.run_suites(
        args.suite, scenario.potential, scenario.t0, scenario.t1,
        scenario.tol, rng, args.trials,
    )
    for result in results:
        print(result.line())
    n_failed = sum(not r.passed for r in results)
    print(f"{len(results) - n_failed}/{len(results)} checks passed")
    return EXIT_OK if n_failed == 0 else EXIT_FAIL


# --- entry point ------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="riccati-lie",
        description="Simulate, transform and verify cubic second-order equations "
                    "through their Hamiltonian picture and superposition rule.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("simulate", help="integrate one initial condition, write CSV")
    p.add_argument("config")
    p.add_argument("--system", choices=("hamiltonian", "riccati2"), default="hamiltonian")
    p.add_argument("--ic", default="0", help="index into config ICs, or a literal 'x,p' / 'x,v' pair")
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("derive", help="print the coefficient map and its residuals")
    p.add_argument("config")
    p.set_defaults(func=cmd_derive)

    p = sub.add_parser("superpose", help="reconstruct a fourth solution from a table of three")
    p.add_argument("config")
    p.add_argument("--sols", required=True, help="CSV with columns t,x1,p1,x2,p2,x3,p3")
    p.add_argument("--k1", type=float)
    p.add_argument("--k2", type=float)
    p.add_argument("--fourth-ic", help="'x,p' at t0; constants are extracted from it")
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_superpose)

    p = sub.add_parser("verify", help="run randomized verification suites")
    p.add_argument("suite", choices=("integrals", "brackets", "action", "superposition", "all"))
    p.add_argument("config")
    p.add_argument("--trials", type=int, default=100)
    p.set_defaults(func=cmd_verify)

    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except GenericityError as exc:
        print(f"genericity error: {exc}", file=sys.stderr)
        return EXIT_GENERICITY
    except DomainError as exc:
        print(f"domain error: {exc}", file=sys.stderr)
        return EXIT_DOMAIN
    except NumericError as exc:
        print(f"numeric failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC


def console_main() -> None:
    sys.exit(main())


if __name__ == "__main__":
    console_main()

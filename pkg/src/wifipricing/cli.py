"""Command-line front end.

Every subcommand reads an optional JSON config file; flags override file
values. Exit codes: 0 ok, 1 invalid input, 2 no agreement or solver failure,
3 verification failure.
"""

from __future__ import annotations

import argparse
import csv
import json
import sys
from typing import Sequence

from . import certify, competition, congestion, duopoly, entry, monopoly, sweeps
from .market import GlobalMarket, LocalMarket, traveler_count

EXIT_OK, EXIT_INPUT, EXIT_SOLVER, EXIT_VERIFY = 0, 1, 2, 3

NUMERIC_KEYS = ("n", "g", "k", "c", "travelers", "g1", "g2", "grid_step")
INT_KEYS = ("providers", "u_cells", "workers", "market_index")
CONFIG_KEYS = set(NUMERIC_KEYS) | set(INT_KEYS) | {"markets", "alpha", "format", "sweep"}
SWEEP_KEYS = {"figure", "param", "min", "max", "steps", "target"}
MARKET_KEYS = {"n", "g", "k", "c"}
FORMATS = ("text", "json", "csv")

REQUIRED = {
    "monopoly": ("n",),
    "global-entry": ("n", "travelers"),
    "competition-entry": ("n",),
    "duopoly": ("g1", "g2"),
}


class ConfigError(ValueError):
    pass


def warn(message: str) -> None:
    print(f"WARNING: {message}", file=sys.stderr)


def error(message: str) -> None:
    print(f"ERROR: {message}", file=sys.stderr)


def load_config(path: str | None) -> dict:
    if path is None:
        return {}
    try:
        with open(path, encoding="utf-8") as fh:
            data = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from exc
    if not isinstance(data, dict):
        raise ConfigError("config must be a JSON object")
    return data


def validate_config(cfg: dict) -> dict:
    unknown = set(cfg) - CONFIG_KEYS
    if unknown:
        raise ConfigError(f"unknown config keys: {', '.join(sorted(unknown))}")
    for key in NUMERIC_KEYS:
        if key in cfg and (isinstance(cfg[key], bool) or not isinstance(cfg[key], (int, float))):
            raise ConfigError(f"{key} must be a number")
    for key in INT_KEYS:
        if key in cfg and (isinstance(cfg[key], bool) or not isinstance(cfg[key], int)):
            raise ConfigError(f"{key} must be an integer")
    if "format" in cfg and cfg["format"] not in FORMATS:
        raise ConfigError(f"format must be one of {FORMATS}")
    if "sweep" in cfg:
        if not isinstance(cfg["sweep"], dict):
            raise ConfigError("sweep must be an object")
        extra = set(cfg["sweep"]) - SWEEP_KEYS
        if extra:
            raise ConfigError(f"unknown sweep keys: {', '.join(sorted(extra))}")
    if "markets" in cfg:
        for m in cfg["markets"]:
            if not isinstance(m, dict) or set(m) - MARKET_KEYS:
                raise ConfigError(f"each market needs keys among {sorted(MARKET_KEYS)}")
    return cfg


def _resolve_travelers(cfg: dict) -> dict:
    """Fill ``n``, ``g`` and ``travelers`` from a market list and travel matrix."""
    if "markets" not in cfg:
        return cfg
    if "alpha" not in cfg or "market_index" not in cfg:
        raise ConfigError("markets requires alpha and market_index")
    try:
        markets = [LocalMarket(float(m["n"]), float(m.get("g", 1.0))) for m in cfg["markets"]]
        gm = GlobalMarket.from_lists(markets, cfg["alpha"])
        i = cfg["market_index"]
        t = traveler_count(gm, i)
    except KeyError as exc:
        raise ConfigError(f"market is missing field {exc}") from exc
    except (ValueError, IndexError, TypeError) as exc:
        raise ConfigError(str(exc)) from exc
    out = dict(cfg)
    out.setdefault("n", markets[i].n_users)
    out.setdefault("g", markets[i].coverage)
    out.setdefault("travelers", t)
    return out


def merge(cfg: dict, args: argparse.Namespace) -> dict:
    out = dict(cfg)
    for key in (*NUMERIC_KEYS, *INT_KEYS, "format"):
        value = getattr(args, key, None)
        if value is not None:
            out[key] = value
    return _resolve_travelers(validate_config(out))


def require(cfg: dict, command: str) -> None:
    missing = [k for k in REQUIRED.get(command, ()) if k not in cfg]
    if missing:
        raise ConfigError(f"missing required field(s): {', '.join(missing)}")


def _market(cfg: dict) -> LocalMarket:
    return LocalMarket(
        float(cfg["n"]), float(cfg.get("g", 1.0)), float(cfg.get("k", 1.0)), float(cfg.get("c", 0.0))
    )


def emit(report: dict, fmt: str, out=None) -> None:
    out = out or sys.stdout
    if fmt == "json":
        out.write(json.dumps(report, indent=2, sort_keys=False, default=str) + "\n")
    elif fmt == "csv":
        writer = csv.writer(out, lineterminator="\n")
        writer.writerow(report)
        writer.writerow(_text(v) for v in report.values())
    else:
        for key, value in report.items():
            out.write(f"{key}: {_text(value)}\n")


def _text(value) -> str:
    if isinstance(value, bool):
        return str(value).lower()
    if isinstance(value, (int, float)):
        return sweeps.format_number(value)
    return str(value)


def cmd_monopoly(cfg: dict) -> dict:
    require(cfg, "monopoly")
    m = _market(cfg)
    if m.congestion_coeff > 0:
        usage = congestion.optimal_congested_usage(m, cfg.get("grid_step", 1e-4))
        flat = congestion.optimal_congested_flat(m)
    else:
        usage = monopoly.optimal_usage_pricing(m)
        flat = monopoly.optimal_flat_pricing(m)
    ratio = flat.revenue / usage.revenue
    return {
        "usage_price": usage.price,
        "usage_revenue": usage.revenue,
        "flat_price": flat.price,
        "flat_revenue": flat.revenue,
        "flat_over_usage": ratio,
        "r_k": monopoly.revenue_ratio(m.elasticity),
        "winner": "flat" if flat.revenue > usage.revenue else "usage",
    }


def cmd_global_entry(cfg: dict) -> dict:
    require(cfg, "global-entry")
    scenario = entry.EntryScenario(_market(cfg), float(cfg["travelers"]))
    step = cfg.get("grid_step", 1e-5)
    deal = entry.bargain(scenario, step)
    low = entry.low_regime_bargain(scenario)
    ratio = low.product / deal.product
    if ratio > 1:
        warn(
            f"low-regime product exceeds the medium-regime one (ratio {ratio:.4g}): "
            "travelers dominate and the global provider would take the whole market"
        )
    return {
        "regime": deal.regime.value,
        "p_glob": deal.p_glob,
        "eta": deal.eta,
        "theta_th": deal.theta_th,
        "delta_pi_global": deal.delta_pi_global,
        "delta_pi_local": deal.delta_pi_local,
        "nash_product": deal.product,
        "low_regime_eta": low.eta,
        "low_regime_product": low.product,
        "regime_product_ratio": ratio,
        "extreme_case": ratio > 1,
    }


def cmd_duopoly(cfg: dict) -> dict:
    require(cfg, "duopoly")
    n = float(cfg.get("n", 1.0))
    g1, g2 = float(cfg["g1"]), float(cfg["g2"])
    for name, g in (("g1", g1), ("g2", g2)):
        if not 0 < g <= 1:
            raise ConfigError(f"{name} must lie in (0, 1], got {g}")
    eq = duopoly.solve_duopoly(g1, g2, LocalMarket(n))
    share1, share2 = eq.shares()
    return {
        "p1": eq.p1, "p2": eq.p2,
        "t_low": eq.t_low, "t_mid": eq.t_mid, "t_switch": eq.t_switch,
        "share1": share1, "share2": share2,
        "rev1": eq.rev1, "rev2": eq.rev2,
    }


def cmd_competition_entry(cfg: dict) -> dict:
    require(cfg, "competition-entry")
    scenario = entry.EntryScenario(_market(cfg), float(cfg.get("travelers", 0.0)))
    m = cfg.get("providers", 2)
    out = competition.group_bargain(scenario, m, cfg.get("grid_step", 1e-5))
    return {
        "providers": m,
        "p_glob": out.p_glob,
        "eta": out.eta,
        "regime": entry.classify_regime(out.p_glob).value,
        "p_closed_form": competition.competition_price_closed_form(scenario),
        "switch_threshold": out.switch_threshold,
        "delta_pi_global": out.delta_pi_global,
        "delta_pi_local_each": out.delta_pi_local_each,
    }


def sweep_spec(cfg: dict, args: argparse.Namespace):
    spec = dict(cfg.get("sweep", {}))
    for key in SWEEP_KEYS:
        value = getattr(args, f"sweep_{key}", None)
        if value is not None:
            spec[key] = value
    if "figure" in spec:
        if spec["figure"] not in sweeps.FIGURES:
            raise ConfigError(f"unknown figure {spec['figure']!r}; choose from {sorted(sweeps.FIGURES)}")
        return spec["figure"]
    missing = [k for k in ("param", "min", "max", "steps") if k not in spec]
    if missing:
        raise ConfigError(f"sweep needs a figure or an axis; missing {', '.join(missing)}")
    base = {k: cfg[k] for k in ("n", "g", "k", "c", "travelers", "providers") if k in cfg}
    try:
        return sweeps.AxisSpec(
            spec["param"], float(spec["min"]), float(spec["max"]), int(spec["steps"]),
            spec.get("target", "monopoly"), base,
        )
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc


def cmd_sweep(cfg: dict, args: argparse.Namespace) -> str:
    spec = sweep_spec(cfg, args)
    header, rows = sweeps.run_sweep(spec, workers=cfg.get("workers", 1), grid_step=cfg.get("grid_step"))
    return sweeps.to_csv(header, rows)


def cmd_verify(cfg: dict) -> tuple[dict, bool]:
    checks = certify.run_checks(
        float(cfg.get("n", 1000.0)), float(cfg.get("travelers", 400.0)), cfg.get("u_cells", 10**5)
    )
    report = {}
    for c in checks:
        status = "pass" if c.passed else "FAIL"
        report[c.name] = f"{status} error={c.error:.3e} tol={c.tolerance:.3e} margin={c.margin:.3e}"
    ok = all(c.passed for c in checks)
    report["result"] = "pass" if ok else "FAIL"
    return report, ok


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="JSON config file; flags override its values")
    common.add_argument("--format", choices=FORMATS, default=None)
    for key in ("n", "g", "k", "c", "travelers", "g1", "g2"):
        common.add_argument(f"--{key}", type=float, default=None)
    common.add_argument("--providers", type=int, default=None)
    common.add_argument("--grid-step", dest="grid_step", type=float, default=None)
    common.add_argument("--u-cells", dest="u_cells", type=int, default=None)
    common.add_argument("--workers", type=int, default=None)

    parser = argparse.ArgumentParser(prog="wifipricing", description="WiFi pricing equilibria.")
    sub = parser.add_subparsers(dest="command", required=True)
    sub.add_parser("monopoly", parents=[common], help="usage vs flat monopoly pricing")
    sub.add_parser("global-entry", parents=[common], help="global provider entry bargain")
    sub.add_parser("duopoly", parents=[common], help="flat-rate duopoly equilibrium")
    sub.add_parser("competition-entry", parents=[common], help="entry into a competitive market")
    sw = sub.add_parser("sweep", parents=[common], help="figure data or axis sweep as CSV")
    sw.add_argument("--figure", dest="sweep_figure")
    sw.add_argument("--param", dest="sweep_param")
    sw.add_argument("--min", dest="sweep_min", type=float)
    sw.add_argument("--max", dest="sweep_max", type=float)
    sw.add_argument("--steps", dest="sweep_steps", type=int)
    sw.add_argument("--target", dest="sweep_target")
    sub.add_parser("verify", parents=[common], help="oracle certification suite")
    return parser


COMMANDS = {
    "monopoly": cmd_monopoly,
    "global-entry": cmd_global_entry,
    "duopoly": cmd_duopoly,
    "competition-entry": cmd_competition_entry,
}


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code == 0 else EXIT_INPUT
    try:
        cfg = merge(load_config(args.config), args)
        fmt = cfg.get("format", "text")
        if args.command == "sweep":
            sys.stdout.write(cmd_sweep(cfg, args))
            return EXIT_OK
        if args.command == "verify":
            report, ok = cmd_verify(cfg)
            emit(report, fmt if fmt != "csv" else "text")
            return EXIT_OK if ok else EXIT_VERIFY
        emit(COMMANDS[args.command](cfg), fmt)
        return EXIT_OK
    except (entry.NoAgreement, congestion.ConvergenceError) as exc:
        error(str(exc))
        return EXIT_SOLVER
    except (ConfigError, ValueError) as exc:
        error(str(exc))
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())

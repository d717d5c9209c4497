"""Command-line entry point ``krylov``.

Exit codes: 0 success, 2 config error, 3 resource cap, 4 numerical
inconsistency. Errors are reported as a single ``error: <kind>: <message>``
line on stderr.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
from pathlib import Path

from . import analytics
from .config import ExperimentConfig, read_config_file
from .errors import ConfigError, KrylovCircuitError, NumericalInconsistencyError, ResourceCapError
from .experiments import run_experiment

_KIND = {2: "config", 3: "resource", 4: "numerical"}


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise ConfigError(message)


def _common() -> argparse.ArgumentParser:
    p = _Parser(add_help=False)
    S = argparse.SUPPRESS
    p.add_argument("--seed", type=int, default=S)
    p.add_argument("--workers", type=int, default=S)
    p.add_argument("--out", default=S)
    p.add_argument("--config", default=S, help="key = value file; flags override it")
    p.add_argument("--n", type=lambda s: [int(x) for x in s.split(",")], default=S,
                   help="system size, or comma-separated list")
    p.add_argument("--T", "--steps", dest="T", type=int, default=S)
    p.add_argument("--samples", type=int, default=S)
    p.add_argument("--window", type=int, default=S)
    p.add_argument("--rel-tol", dest="rel_tol", type=float, default=S)
    p.add_argument("--boundary", choices=["open", "periodic"], default=S)
    p.add_argument("-v", "--verbose", action="store_true", default=S)
    return p


def build_parser() -> argparse.ArgumentParser:
    common = _common()
    S = argparse.SUPPRESS
    parser = _Parser(prog="krylov", description=__doc__.splitlines()[0], parents=[common])
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    ruc = sub.add_parser("ruc", parents=[common], help="brickwork (or global) Haar random circuit")
    ruc.add_argument("--circuit", choices=["brickwork", "global"], default=S)

    mon = sub.add_parser("monitored", parents=[common], help="brickwork circuit with Z measurements")
    mon.add_argument("--p", type=float, default=S)
    mon.add_argument("--passes", choices=["half_layer", "full_step"], default=S)

    gau = sub.add_parser("gaussian", parents=[common], help="Floquet Gaussian circuit")
    gau.add_argument("--homogeneous", action="store_true", default=S)
    gau.add_argument("--mode", choices=["single_particle", "covariance_hs"], default=S)

    spn = sub.add_parser("spins", parents=[common], help="Floquet spin circuit")
    spn.add_argument("--ensemble", choices=["haar", "mbl"], default=S)
    spn.add_argument("--h", type=float, default=S)

    scan = sub.add_parser("mbl-scan", parents=[common], help="C_inf(h) scan and h0 estimate")
    scan.add_argument("--h-grid", dest="h_grid", type=lambda s: [float(x) for x in s.split(",")], default=S)

    ana = sub.add_parser("analytics", help="evaluate a closed-form expression")
    ana.add_argument("formula", choices=["expected", "expected-exact", "coverage", "partial", "bound",
                                         "min-complexity"])
    ana.add_argument("--t", type=int)
    ana.add_argument("--n", type=int)
    ana.add_argument("--m", type=int)
    ana.add_argument("--d", type=int, required=True)
    ana.add_argument("--eps", type=float, default=0.1)

    rep = sub.add_parser("reproduce", parents=[common], help="canned desk-scale figure runs")
    rep.add_argument("figure", choices=["fig1", "fig2", "fig3"])
    return parser


def _analytics(args) -> object:
    def need(name):
        value = getattr(args, name)
        if value is None:
            raise ConfigError(f"analytics {args.formula} needs --{name}")
        return value

    d = args.d
    if args.formula == "expected":
        return analytics.expected_complexity_haar(need("t"), d)
    if args.formula == "expected-exact":
        return analytics.expected_complexity_haar_exact(need("t"), d)
    if args.formula == "coverage":
        return analytics.coverage_probability(need("n"), d)
    if args.formula == "partial":
        return analytics.partial_coverage_probability(need("n"), need("m"), d)
    if args.formula == "bound":
        b = analytics.saturation_time_bound(d, args.eps)
        return {"n": b.n, "proxy": b.proxy}
    est = analytics.min_complexity_estimate(need("t"), d)
    return {"m_max": est.m_max, "estimate": est.estimate, "proxy": est.proxy, "expectation": est.expectation}


_EXPERIMENT_OF = {"ruc": "ruc", "monitored": "monitored", "gaussian": "gaussian", "spins": "spins",
                  "mbl-scan": "mbl_scan"}

_FIGURES = {
    "fig1": [
        {"experiment": "ruc", "n": [6, 7, 8], "samples": 100},
        {"experiment": "monitored", "n": [6], "p": 0.3, "samples": 50},
        {"experiment": "monitored", "n": [6], "p": 0.8, "samples": 50},
    ],
    "fig2": [
        {"experiment": "gaussian", "n": [100], "homogeneous": True, "samples": 200},
        {"experiment": "gaussian", "n": [20, 40, 60, 80, 100], "samples": 200},
    ],
    "fig3": [
        {"experiment": "spins", "n": [8], "ensemble": "haar", "samples": 50},
        {"experiment": "mbl_scan", "n": [6], "samples": 50},
    ],
}


def _figure_configs(figure: str, overrides: dict) -> list[ExperimentConfig]:
    base = Path(overrides.pop("out", "results")) / figure
    configs = []
    for k, canned in enumerate(_FIGURES[figure]):
        data = {**canned, **{k2: v for k2, v in overrides.items() if k2 in ("seed", "workers")}}
        data["out"] = str(base / f"{k}_{canned['experiment']}")
        configs.append(ExperimentConfig(**data))
    return configs


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        values = vars(args).copy()
        command = values.pop("command")
        logging.basicConfig(level=logging.INFO if values.pop("verbose", False) else logging.WARNING,
                            format="%(levelname)s %(name)s: %(message)s")
        if command == "analytics":
            print(json.dumps(_analytics(args)))
            return 0
        file_values = read_config_file(values.pop("config")) if "config" in values else {}
        if command == "reproduce":
            figure = values.pop("figure")
            for cfg in _figure_configs(figure, {**file_values, **values}):
                run_experiment(cfg)
            return 0
        data = {**file_values, **values, "experiment": _EXPERIMENT_OF[command]}
        summaries = run_experiment(ExperimentConfig.from_dict(data))
        for s in summaries:
            print(json.dumps({k: s[k] for k in ("t_sat", "c_inf", "c_inf_stderr", "h0") if k in s}))
        return 0
    except KrylovCircuitError as exc:
        code = exc.exit_code
        if isinstance(exc, ResourceCapError):
            code = 3
        elif isinstance(exc, NumericalInconsistencyError):
            code = 4
        msg = " ".join(str(exc).split())
        print(f"error: {_KIND.get(code, 'runtime')}: {msg}", file=sys.stderr)
        return code
    except (TypeError, ValueError) as exc:
        print(f"error: config: {' '.join(str(exc).split())}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())

"""Command-line entry point.

Config files are flat ``key = value`` text; ``#`` starts a comment, lists
are comma separated and sampler settings use the ``mcmc.`` prefix::

    family = legendre
    p = 2
    n = 500
    theoretical = true
    mcmc.iterations = 5000
    mcmc.burn_in = 1000

Exit status: 0 success, 1 failed check, 2 invalid input, 3 numeric failure.
"""
from __future__ import annotations

import argparse
import datetime
import json
import logging
import sys
from dataclasses import asdict, replace
from pathlib import Path

import numpy as np

from . import __version__, experiments, svgplot
from .basis import get_family
from .divergence import divergence_report
from .errors import InputError, NumericError, PolysieveError, StuckChainError
from .inference import (
    McmcConfig,
    credible_bands,
    explicit_prior,
    posterior_mean_density,
    rw_metropolis,
    theoretical_sigmas,
)
from .sampling import TrueKind, build_true_density, draw, read_observations, write_observations

log = logging.getLogger("polysieve")

EXIT_CHECK_FAILED = 1
EXIT_INPUT = 2
EXIT_NUMERIC = 3

_DEFAULT_TRUTH = {"legendre": "exp1_sine", "laguerre": "supp_exponential", "hermite": "supp_gaussian"}


class ConfigError(InputError):
    pass


def _parse_bool(text: str) -> bool:
    low = text.strip().lower()
    if low in ("1", "true", "yes", "on"):
        return True
    if low in ("0", "false", "no", "off"):
        return False
    raise ValueError(f"not a boolean: {text!r}")


def _int_list(text: str) -> tuple:
    return tuple(int(v) for v in text.split(",") if v.strip())


def _float_list(text: str) -> tuple:
    return tuple(float(v) for v in text.split(",") if v.strip())


FIT_KEYS = {
    "family": str,
    "p": int,
    "n": int,
    "k": int,
    "sigmas": _float_list,
    "theoretical": _parse_bool,
    "data": str,
    "truth": str,
    "seed": int,
    "grid_points": int,
    "level": float,
    "mcmc.iterations": int,
    "mcmc.burn_in": int,
    "mcmc.proposal_scale": float,
    "mcmc.adapt": _parse_bool,
}

EXPERIMENT_KEYS = {
    "p": int,
    "n_values": _int_list,
    "m": int,
    "sigmas": _float_list,
    "k_values": _int_list,
    "grid_points": int,
    "seed": int,
    "basis": str,
    "level": float,
    "mcmc.iterations": int,
    "mcmc.burn_in": int,
    "mcmc.proposal_scale": float,
    "mcmc.adapt": _parse_bool,
}


def parse_config(text: str, schema: dict, source: str = "<config>") -> dict:
    """Parse flat ``key = value`` lines against ``schema``; unknown or malformed keys raise."""
    out = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"{source}:{lineno}: expected 'key = value'")
        key, value = (s.strip() for s in line.split("=", 1))
        if key not in schema:
            raise ConfigError(f"{source}:{lineno}: unknown key '{key}'")
        if key in out:
            raise ConfigError(f"{source}:{lineno}: duplicate key '{key}'")
        try:
            out[key] = schema[key](value)
        except ValueError as exc:
            raise ConfigError(f"{source}:{lineno}: bad value for '{key}': {exc}") from None
    return out


def _load_config(path, schema) -> dict:
    if path is None:
        return {}
    p = Path(path)
    if not p.is_file():
        raise ConfigError(f"config file {path} not found")
    return parse_config(p.read_text(), schema, str(path))


def _mcmc_fields(conf: dict) -> dict:
    names = {"mcmc.iterations": "iterations", "mcmc.burn_in": "burn_in",
             "mcmc.proposal_scale": "proposal_scale", "mcmc.adapt": "adapt"}
    return {names[k]: v for k, v in conf.items() if k in names}


def _write_manifest(out: Path, command: str, config_path, resolved: dict, seed: int, files: dict) -> Path:
    missing = [str(f) for f in files.values() if not Path(f).exists()]
    if missing:
        raise NumericError(f"outputs missing after run: {missing}")
    manifest = {
        "command": command,
        "config_path": None if config_path is None else str(config_path),
        "config": resolved,
        "version": __version__,
        "timestamp": datetime.datetime.now(datetime.timezone.utc).isoformat(timespec="seconds"),
        "seed": seed,
        "outputs": {k: Path(v).name for k, v in sorted(files.items())},
    }
    path = out / "manifest.json"
    path.write_text(json.dumps(manifest, indent=2, sort_keys=True) + "\n")
    return path


def _read_manifest(path) -> dict:
    try:
        return json.loads(Path(path).read_text())
    except (OSError, json.JSONDecodeError) as exc:
        raise ConfigError(f"cannot read manifest {path}: {exc}") from None


def resolve_fit_config(conf: dict) -> dict:
    """Fill defaults and validate a fit config; returns the resolved echo."""
    if "family" not in conf:
        raise ConfigError("missing required key 'family'")
    family = get_family(conf["family"])
    if family.name not in _DEFAULT_TRUTH:
        raise ConfigError(f"fit supports legendre, laguerre and hermite, not '{family.name}'")
    if "data" not in conf and "n" not in conf:
        raise ConfigError("missing required key 'n' (or 'data')")
    if "sigmas" in conf and conf.get("theoretical"):
        raise ConfigError("'sigmas' and 'theoretical = true' are mutually exclusive")
    res = {
        "family": family.name,
        "p": conf.get("p", 2),
        "seed": conf.get("seed", 0),
        "grid_points": conf.get("grid_points", 401),
        "level": conf.get("level", 0.95),
        "mcmc.iterations": conf.get("mcmc.iterations", 10000),
        "mcmc.burn_in": conf.get("mcmc.burn_in", 2000),
        "mcmc.proposal_scale": conf.get("mcmc.proposal_scale", 0.3),
        "mcmc.adapt": conf.get("mcmc.adapt", True),
    }
    if "data" in conf:
        res["data"] = conf["data"]
    else:
        res["n"] = conf["n"]
        res["truth"] = conf.get("truth", _DEFAULT_TRUTH[family.name])
        TrueKind(res["truth"])
    if "sigmas" in conf:
        res["sigmas"] = list(conf["sigmas"])
        if "k" in conf and conf["k"] != len(conf["sigmas"]):
            raise ConfigError("'k' disagrees with the number of sigmas")
    else:
        res["theoretical"] = True
        res["k"] = conf.get("k", 10)
    McmcConfig(**_mcmc_fields(res), seed=0)
    return res


def cmd_fit(args) -> int:
    if args.from_manifest:
        conf = _read_manifest(args.from_manifest)["config"]
        conf = {k: (tuple(v) if isinstance(v, list) else v) for k, v in conf.items()}
    else:
        conf = _load_config(args.config, FIT_KEYS)
    if args.seed is not None:
        conf["seed"] = args.seed
    res = resolve_fit_config(conf)
    family = get_family(res["family"])
    seed = res["seed"]
    if "data" in res:
        y = read_observations(res["data"])
    else:
        truth = build_true_density(res["truth"], family)
        y = draw(truth, res["n"], experiments.derive_seed(seed, 0, 0, experiments.DATA_STREAM))
    if "sigmas" in res:
        prior = explicit_prior(family, res["sigmas"])
    else:
        prior = theoretical_sigmas(family, res["p"], res["k"])
    mcmc = McmcConfig(**_mcmc_fields(res), seed=experiments.derive_seed(seed, 0, 0, experiments.MCMC_STREAM))
    chain = rw_metropolis(prior, y, mcmc)

    lo, hi = np.quantile(y, [0.0, 1.0]) if family.name != "legendre" else family.domain
    x = np.linspace(lo, hi, res["grid_points"])
    curve = posterior_mean_density(chain, x)
    lower, upper = credible_bands(chain, x, res["level"])

    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    files = {"chain": out / "chain.csv", "curves": out / "curves.csv",
             "report": out / "report.json", "plot": out / "plot.svg"}
    files["chain"].write_text(chain.to_csv(burn_in=mcmc.burn_in))
    rows = ["x,mean,lower,upper"] + [
        f"{a:.17g},{b:.17g},{c:.17g},{d:.17g}" for a, b, c, d in zip(x, curve.mean, lower, upper)
    ]
    files["curves"].write_text("\n".join(rows) + "\n")
    report = {
        "config": res,
        "n": int(y.size),
        "acceptance_rate": chain.acceptance_rate,
        "proposal_scale": chain.proposal_scale,
        "clamp_mass": curve.clamp_mass,
        "prior": prior.to_record(),
        "posterior_mean_coefficients": [float(v) for v in chain.samples.mean(axis=0)],
    }
    if "truth" in res:
        truth = build_true_density(res["truth"], family)
        est = experiments.posterior_mean_weighted(chain)
        report["divergences"] = asdict(divergence_report(est, truth.density, warn=False))
    files["report"].write_text(json.dumps(report, indent=2, sort_keys=True) + "\n")
    files["plot"].write_text(
        svgplot.line_plot(x, {"mean": curve.mean}, {"mean": (lower, upper)},
                          title=f"posterior mean ({family.name})", xlabel="x", ylabel="g(x)")
    )
    _write_manifest(out, "fit", args.config, res, seed, files)
    print(f"fit: n={y.size} acceptance={chain.acceptance_rate:.3f} -> {out}")
    return 0


def _experiment_config(args) -> experiments.ExperimentConfig:
    if args.from_manifest:
        rec = _read_manifest(args.from_manifest)["config"]
        rec = {k: (tuple(v) if isinstance(v, list) else v) for k, v in rec.items()}
        return replace(experiments.ExperimentConfig(**rec), threads=args.threads)
    overrides = {}
    conf = _load_config(args.config, EXPERIMENT_KEYS)
    for key, value in conf.items():
        overrides[key.split(".", 1)[1] if key.startswith("mcmc.") else key] = value
    if args.seed is not None:
        overrides["seed"] = args.seed
    if args.m is not None:
        overrides["m"] = args.m
    if args.basis is not None:
        overrides["basis"] = args.basis
    overrides["threads"] = args.threads
    if args.id == "exp1" and "sigmas" in overrides and "k_values" not in overrides:
        overrides["k_values"] = (len(overrides["sigmas"]),)
    return experiments.default_config(args.id, paper_scale=args.paper_scale, **overrides)


def cmd_experiment(args) -> int:
    cfg = _experiment_config(args)
    report = experiments.run(cfg)
    out = Path(args.out)
    files = report.write(out)
    _write_manifest(out, f"experiment {cfg.experiment}", args.config, cfg.to_record(), cfg.seed, files)
    for n, med in report.medians().items():
        print(f"{cfg.experiment}: n={n} median d_H={med:.4f} (rate {n ** (-1.0 / (2 * cfg.p + 1)):.4f})")
    return 0


def cmd_check(args) -> int:
    if args.suite == "hardy":
        rep = experiments.hardy_check(trials=args.trials, J=args.J, seed=args.seed or 0)
    elif args.suite == "growth":
        fams = (args.family,) if args.family else ("legendre", "hermite")
        ps = (args.p,) if args.p else (1, 2)
        rep = experiments.growth_check(fams, ps)
    else:
        rep = experiments.CHECKS[args.suite]()
    print(rep.summary())
    return 0 if rep.passed else EXIT_CHECK_FAILED


def cmd_sample(args) -> int:
    spec = build_true_density(args.kind)
    y = draw(spec, args.n, args.seed or 0)
    write_observations(args.out, y)
    print(f"sample: {args.n} draws from {args.kind} -> {args.out}")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="polysieve", description="Sieve-prior density estimation.")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    fit = sub.add_parser("fit", help="fit one posterior from a config file")
    fit.add_argument("--config")
    fit.add_argument("--from-manifest")
    fit.add_argument("--seed", type=int)
    fit.add_argument("--out", default="out")
    fit.set_defaults(func=cmd_fit)

    exp = sub.add_parser("experiment", help="run a packaged experiment")
    exp.add_argument("id", choices=experiments.EXPERIMENTS)
    exp.add_argument("--config")
    exp.add_argument("--from-manifest")
    exp.add_argument("--seed", type=int)
    exp.add_argument("--out", default="out")
    exp.add_argument("--threads", type=int)
    exp.add_argument("--paper-scale", action="store_true")
    exp.add_argument("--m", type=int)
    exp.add_argument("--basis", choices=("legendre", "trig", "both"))
    exp.set_defaults(func=cmd_experiment)

    chk = sub.add_parser("check", help="run a numerical property suite")
    chk.add_argument("suite", choices=sorted(experiments.CHECKS))
    chk.add_argument("--trials", type=int, default=1000)
    chk.add_argument("--J", type=int, default=50)
    chk.add_argument("--seed", type=int)
    chk.add_argument("--family", choices=("legendre", "hermite"))
    chk.add_argument("--p", type=int, choices=(1, 2))
    chk.set_defaults(func=cmd_check)

    smp = sub.add_parser("sample", help="draw observations from a target density")
    smp.add_argument("--kind", default="exp1_sine",
                     choices=[k.value for k in TrueKind if k is not TrueKind.COEFFICIENT_BACKED])
    smp.add_argument("--n", type=int, required=True)
    smp.add_argument("--seed", type=int)
    smp.add_argument("--out", default="observations.csv")
    smp.set_defaults(func=cmd_sample)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_INPUT if exc.code else 0
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        return args.func(args)
    except (NumericError, StuckChainError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    except (PolysieveError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())

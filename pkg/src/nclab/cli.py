"""Command-line front end.

Subcommands::

    nclab fig2|fig3|fig4|observe|soundness|conjecture [--seed N] [--out PATH]
          [--format csv|json] [--dim D] [--samples N] [--config FILE] ...
    nclab check STATE.json CRITERION [--theta T]

Exit codes: 0 ok, 2 bad input, 3 Fock truncation, 4 optimizer or
fixed-point non-convergence, 5 soundness failure. Worker threads are capped
by ``NONCLASSICALITY_LAB_THREADS``.
"""

from __future__ import annotations

import argparse
import dataclasses
import json
import sys

from nclab import registry
from nclab.experiments import EXPERIMENTS, ConfigError, ExperimentConfig, run, worker_count
from nclab.fock import ConvergenceError, DegeneratePhaseError, TruncationError
from nclab.io import load_state, render, to_json

EXIT_OK, EXIT_INPUT, EXIT_TRUNCATION, EXIT_CONVERGENCE, EXIT_SOUNDNESS = 0, 2, 3, 4, 5


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise SystemExit(EXIT_INPUT)


def _complex(text):
    try:
        return complex(text.replace(" ", ""))
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a complex number: {text!r}") from None


def build_parser():
    p = _Parser(prog="nclab", description="Nonclassicality and entanglement criteria lab.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)
    for name in EXPERIMENTS:
        s = sub.add_parser(name)
        s.add_argument("--seed", type=int)
        s.add_argument("--out")
        s.add_argument("--format", choices=("csv", "json"))
        s.add_argument("--dim", type=int)
        s.add_argument("--samples", type=int)
        s.add_argument("--config")
        s.add_argument("--grid", type=int, help="sweep points")
        s.add_argument("--r", type=float, help="squeezing parameter")
        s.add_argument("--nbar", type=float, help="intelligent-state mean photon number")
        s.add_argument("--alpha", type=_complex, help="coherent amplitude, e.g. 2.2j")
        s.add_argument("--theta-bs", dest="theta_bs", type=float)
        s.add_argument("--family", choices=("bs", "general"), help="observe: state family")
    c = sub.add_parser("check")
    c.add_argument("state", help="state JSON file")
    c.add_argument("criterion", help="registered criterion name")
    c.add_argument("--theta", type=float, help="angle for angular criteria")
    return p


def _config(args) -> ExperimentConfig:
    base = {}
    if args.config:
        try:
            with open(args.config) as fh:
                base = json.load(fh)
        except (OSError, json.JSONDecodeError) as exc:
            raise ConfigError(f"cannot read config: {exc}") from None
        if not isinstance(base, dict):
            raise ConfigError("config must be a JSON object")
        if base.get("experiment", args.command) != args.command:
            raise ConfigError("config experiment does not match the subcommand")
    cfg = ExperimentConfig.from_dict({**base, "experiment": args.command})
    over = {k: getattr(args, k) for k in ("seed", "out", "format", "dim", "samples", "grid",
                                          "r", "nbar", "alpha", "theta_bs", "family")
            if getattr(args, k) is not None}
    try:
        return dataclasses.replace(cfg, **over).validated()
    except TypeError as exc:
        raise ConfigError(str(exc)) from None


def _emit(text, path):
    if path:
        with open(path, "w", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def cmd_experiment(args):
    cfg = _config(args)
    worker_count()  # reject a malformed thread cap even when nothing runs in parallel
    out = run(cfg)
    _emit(render(out, cfg.format), cfg.out)
    if cfg.out or cfg.format == "csv":
        # the summary goes to stderr so data output stays machine-readable
        sys.stderr.write(to_json(out.summary))
    return out.exit_code


def cmd_check(args):
    try:
        crit = registry.get(args.criterion)
    except KeyError as exc:
        print(exc.args[0], file=sys.stderr)
        return EXIT_INPUT
    try:
        with open(args.state) as fh:
            raw = json.load(fh)
        state, domain = load_state(raw)
    except (OSError, json.JSONDecodeError, ValueError) as exc:
        print(f"bad state file: {exc}", file=sys.stderr)
        return EXIT_INPUT
    if domain != crit.domain:
        print(f"criterion {crit.name!r} needs a {crit.domain} state, got {domain}",
              file=sys.stderr)
        return EXIT_INPUT
    try:
        verdict = crit.evaluate(state, args.theta)
    except DegeneratePhaseError as exc:
        print(f"criterion undefined for this state: {exc}", file=sys.stderr)
        return EXIT_INPUT
    sys.stdout.write(to_json(verdict.to_dict()))
    return EXIT_OK


def main(argv=None):
    args = build_parser().parse_args(argv)
    try:
        if args.command == "check":
            return cmd_check(args)
        return cmd_experiment(args)
    except (ConfigError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except TruncationError as exc:
        print(f"truncation: {exc}", file=sys.stderr)
        return EXIT_TRUNCATION
    except ConvergenceError as exc:
        print(f"convergence: {exc}", file=sys.stderr)
        return EXIT_CONVERGENCE


if __name__ == "__main__":
    sys.exit(main())

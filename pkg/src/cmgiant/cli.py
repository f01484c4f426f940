"""Command-line interface.

Subcommands: solve, bounds, table1, maxgap, figures, simulate.  Every
command can read defaults from a JSON config file (flags win), writes its
primary output to --output or stdout, and exits 0 on success, 2 on
validation problems and 3 when the solver fails to converge.  Data goes
to the output path; diagnostics go to stderr, as plain text or as a JSON
object under --json-errors.
"""

from __future__ import annotations

import argparse
import json
import sys

from . import reports
from .bounds import Prefix, bounds_report
from .errors import DomainError, Error, NoConvergence
from .pmf import DegreePMF, load_pmf, parse_inline_pmf
from .search import FIGURE_NAMES, figure3_dataset, figure_dataset, max_gap_search
from .simulate import monte_carlo
from .solver import solve_giant

EXIT_OK = 0
EXIT_VALIDATION = 2
EXIT_NO_CONVERGENCE = 3


def _common_flags(sp: argparse.ArgumentParser) -> None:
    sp.add_argument("--config", help="JSON file with defaults for this command")
    sp.add_argument("--output", help="output path (default: stdout)")
    sp.add_argument("--format", choices=["csv", "json"], help="output format")
    sp.add_argument("--threads", type=int, help="worker cap for parallel commands")
    sp.add_argument("--seed", type=int, help="base seed (simulate only)")
    sp.add_argument("--json-errors", action="store_true",
                    help="emit errors as a JSON object on stderr")


def _pmf_flags(sp: argparse.ArgumentParser) -> None:
    sp.add_argument("--pmf", help="inline distribution 'degree:prob,degree:prob,...'")
    sp.add_argument("--pmf-file", help="distribution file (text or .json)")


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="cmgiant",
        description="Giant-component sizes and extremal bounds for "
                    "configuration-model degree distributions.",
    )
    sub = p.add_subparsers(dest="command", required=True)

    sp = sub.add_parser("solve", help="mean, criticality, extinction and giant size")
    _common_flags(sp)
    _pmf_flags(sp)

    sp = sub.add_parser("bounds", help="bound report for one (prefix, mu) cell")
    _common_flags(sp)
    sp.add_argument("--prefix", help="comma-separated p_1..p_L")
    sp.add_argument("--mu", type=float, help="class mean")

    sp = sub.add_parser("table1", help="the six benchmark bound rows")
    _common_flags(sp)

    sp = sub.add_parser("maxgap", help="grid search for the maximal bound gap")
    _common_flags(sp)
    sp.add_argument("--L", help="comma-separated L values (default 2,3,4,5)")
    sp.add_argument("--mu-lo", type=float, help="smallest mu (default 1.0)")
    sp.add_argument("--mu-hi", type=float, help="largest mu (default 5.0)")
    sp.add_argument("--mu-step", type=float, help="mu step (default 0.2)")
    sp.add_argument("--step", type=float, help="prefix lattice step (default 0.05)")
    sp.add_argument("--figure3-output", help="also write the per-mu max-gap CSV here")
    sp.add_argument("--plot", help="also render the per-mu curve to this image file")

    sp = sub.add_parser("figures", help="component-size sweep datasets")
    _common_flags(sp)
    sp.add_argument("--which", help="one of " + ", ".join(FIGURE_NAMES))
    sp.add_argument("--control-step", type=float, help="sweep step (default 0.01)")
    sp.add_argument("--tail-cutoff", type=int,
                    help="materialized tail support cap (per-family defaults)")
    sp.add_argument("--plot", help="also render the sweep to this image file")

    sp = sub.add_parser("simulate", help="Monte Carlo largest-component fractions")
    _common_flags(sp)
    _pmf_flags(sp)
    sp.add_argument("--n", type=int, help="number of vertices")
    sp.add_argument("--reps", type=int, help="number of replicas")

    return p


class _Options:
    """Flag values backed by config-file defaults; flags always win."""

    def __init__(self, args: argparse.Namespace):
        self._args = vars(args)
        self._config = {}
        path = self._args.get("config")
        if path:
            with open(path, encoding="utf-8") as fh:
                self._config = json.load(fh)
            if not isinstance(self._config, dict):
                raise DomainError("config file must hold a JSON object")

    def get(self, name: str, default=None):
        value = self._args.get(name.replace("-", "_"))
        if value is not None and value is not False:
            return value
        return self._config.get(name, default)

    def require(self, name: str):
        value = self.get(name)
        if value is None:
            raise DomainError(f"missing required option --{name}")
        return value


def _load_input_pmf(opts: _Options) -> DegreePMF:
    inline = opts.get("pmf")
    path = opts.get("pmf-file")
    if (inline is None) == (path is None):
        raise DomainError("exactly one of --pmf and --pmf-file is required")
    return parse_inline_pmf(inline) if inline else load_pmf(path)


def _write(opts: _Options, text: str) -> None:
    path = opts.get("output")
    if path:
        with open(path, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _write_path(path: str, text: str) -> None:
    with open(path, "w", encoding="utf-8", newline="") as fh:
        fh.write(text)


def cmd_solve(opts: _Options) -> int:
    res = solve_giant(_load_input_pmf(opts))
    payload = {
        "mu": round(res.mu, 6),
        "nu": round(res.nu, 6),
        "z_tilde": round(res.z_tilde, 6),
        "xi": round(res.xi, 6),
    }
    if res.near_critical:
        payload["near_critical"] = True
    if opts.get("format", "json") == "csv":
        keys = list(payload)
        _write(opts, reports.csv_text(keys, [tuple(payload[k] for k in keys)]))
    else:
        _write(opts, reports.json_text(payload))
    return EXIT_OK


def _parse_prefix(text: str) -> Prefix:
    try:
        values = tuple(float(x) for x in str(text).split(","))
    except ValueError as exc:
        raise DomainError(f"bad prefix {text!r}") from exc
    return Prefix(values)


def cmd_bounds(opts: _Options) -> int:
    prefix = _parse_prefix(opts.require("prefix"))
    mu = float(opts.require("mu"))
    report = bounds_report(prefix, mu)
    if opts.get("format", "json") == "csv":
        _write(opts, reports.csv_text(reports.TABLE_HEADER,
                                      [reports.bounds_row(report)]))
    else:
        _write(opts, reports.json_text(report.to_json_dict()))
    return EXIT_OK


def cmd_table1(opts: _Options) -> int:
    header, rows = reports.table1_dataset()
    if opts.get("format", "csv") == "json":
        _write(opts, reports.json_text([dict(zip(header, r)) for r in rows]))
    else:
        _write(opts, reports.csv_text(header, rows))
    return EXIT_OK


def cmd_maxgap(opts: _Options) -> int:
    raw = opts.get("L", "2,3,4,5")
    L_set = [int(x) for x in str(raw).split(",")]
    search = max_gap_search(
        L_set,
        mu_lo=float(opts.get("mu-lo", 1.0)),
        mu_hi=float(opts.get("mu-hi", 5.0)),
        mu_step=float(opts.get("mu-step", 0.2)),
        prefix_step=float(opts.get("step", 0.05)),
        threads=int(opts.get("threads", 1)),
    )
    if opts.get("format", "csv") == "json":
        _write(opts, reports.json_text(reports.grid_result_json(search)))
    else:
        header, rows = reports.table2_dataset(search)
        _write(opts, reports.csv_text(header, rows))
    fig3 = opts.get("figure3-output")
    header3, rows3 = figure3_dataset(search)
    if fig3:
        _write_path(fig3, reports.csv_text(header3, rows3))
    plot = opts.get("plot")
    if plot:
        from .plots import plot_maxgap_figure

        plot_maxgap_figure(header3, rows3, plot)
    return EXIT_OK


def cmd_figures(opts: _Options) -> int:
    which = str(opts.require("which"))
    cutoff = opts.get("tail-cutoff")
    header, rows = figure_dataset(
        which,
        control_step=float(opts.get("control-step", 0.01)),
        tail_cutoff=None if cutoff is None else int(cutoff),
    )
    if opts.get("format", "csv") == "json":
        _write(opts, reports.json_text([dict(zip(header, r)) for r in rows]))
    else:
        _write(opts, reports.csv_text(header, rows))
    plot = opts.get("plot")
    if plot:
        from .plots import plot_family_figure

        plot_family_figure(header, rows, plot, title=f"figure {which}")
    return EXIT_OK


def cmd_simulate(opts: _Options) -> int:
    pmf = _load_input_pmf(opts)
    seed = opts.get("seed")
    if seed is None:
        raise DomainError("simulate requires --seed")
    result = monte_carlo(
        pmf,
        n=int(opts.require("n")),
        reps=int(opts.require("reps")),
        seed=int(seed),
        threads=int(opts.get("threads", 1)),
    )
    if opts.get("format", "json") == "csv":
        header, rows = reports.sim_result_csv(result)
        _write(opts, reports.csv_text(header, rows))
    else:
        _write(opts, reports.json_text(result.to_json_dict()))
    return EXIT_OK


_COMMANDS = {
    "solve": cmd_solve,
    "bounds": cmd_bounds,
    "table1": cmd_table1,
    "maxgap": cmd_maxgap,
    "figures": cmd_figures,
    "simulate": cmd_simulate,
}


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    json_errors = bool(getattr(args, "json_errors", False))
    try:
        opts = _Options(args)
        json_errors = bool(opts.get("json-errors", False))
        return _COMMANDS[args.command](opts)
    except NoConvergence as exc:
        _report_error(exc, json_errors)
        return EXIT_NO_CONVERGENCE
    except (Error, OSError, ValueError, json.JSONDecodeError) as exc:
        _report_error(exc, json_errors)
        return EXIT_VALIDATION


def _report_error(exc: Exception, as_json: bool) -> None:
    if as_json:
        sys.stderr.write(json.dumps(
            {"error": type(exc).__name__, "message": str(exc)}) + "\n")
    else:
        sys.stderr.write(f"cmgiant: {type(exc).__name__}: {exc}\n")


if __name__ == "__main__":
    sys.exit(main())

"""Command-line sweeps producing CSV or JSON datasets.

Copyright 2024 Blue Brain Project / EPFL

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

    http://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
"""

import argparse
import functools
import itertools
import json
import logging
import math
import sys
from pathlib import Path

import pandas as pd

from qilab import covert, gain, spes
from qilab.distinguish import bhattacharyya, chernoff, fidelity_gaussian, fvg_bounds
from qilab.exceptions import ConfigError, IoError, QilabError
from qilab.gaussian_core import load_state_json
from qilab.multiprocessing import parallel_map
from qilab.utils import grid_values, parse_grid, parse_param
from qilab.version import VERSION

logger = logging.getLogger(__name__)

FORMATS = ("csv", "json")
CONFIG_KEYS = ("subcommand", "params", "grids", "output", "format", "threads", "state_a", "state_b")


def _log_grid(start, stop, count):
    return {"start": start, "stop": stop, "count": count, "scale": "log"}


def _linear_grid(start, stop, count):
    return {"start": start, "stop": stop, "count": count, "scale": "linear"}


def _perfect_covert_row(values):
    eta, n_b = values["eta"], values["n_b"]
    tmsv_qc = covert.perfect_tmsv_exponent(eta, n_b).exponent
    gcs_qc = covert.perfect_gcs_exponent(eta, n_b)
    tmsv_analytic, gcs_analytic, _ = covert.analytic_exponents(eta, n_b)
    return {
        "chi_tmsv_qc": tmsv_qc,
        "chi_tmsv_qb": covert.perfect_tmsv_exponent(eta, n_b, method="bhattacharyya").exponent,
        "chi_tmsv_analytic": tmsv_analytic,
        "chi_gcs_qc": gcs_qc,
        "chi_gcs_qb": covert.gcs_bhattacharyya_closed_form(eta, n_b),
        "chi_gcs_analytic": gcs_analytic,
        "ratio_qc": tmsv_qc / gcs_qc if gcs_qc > 0 else math.nan,
    }


def _covert_energy_row(values):
    band = covert.kkt_energy_band(values["n_b"], int(values["m"]), values["eps"], values["eta"])
    return {"ns_min": band.ns_min, "ns_max": band.ns_max}


def _covert_bound_row(values):
    eta, n_b, m, eps = values["eta"], values["n_b"], int(values["m"]), values["eps"]
    errors = {}
    for probe in ("tmsv", "gcs"):
        scenario = covert.CovertScenario(eta, n_b, m=m, eps=eps, probe=probe)
        errors[probe] = 0.5 * math.exp(-m * covert.ecovert_probe_exponent(scenario))
    return {
        "pe_floor": covert.ecovert_error_floor(eta, n_b, m, eps),
        "pe_tmsv": errors["tmsv"],
        "pe_gcs": errors["gcs"],
        "ns_covert": covert.max_covert_brightness(eta, n_b, m, eps),
    }


def _gain_qfi_row(values):
    n, m, g = values["n"], values["m"], values["g"]
    j_hom, j_het = gain.fi_homodyne_heterodyne(n, m, g)
    return {
        "k_nds": gain.qfi_nds(n, m, g)[1],
        "k_coh": gain.qfi_coherent(n, m, g),
        "j_hom": j_hom,
        "j_het": j_het,
    }


def _gain_mse_row(values):
    n, m, g, eta_d = values["n"], values["m"], values["g"], values["eta_d"]
    return {
        "qcrb_num": gain.crb_nds(n, m, g),
        "qcrb_coh": gain.crb_coherent(n, m, g, eta_d),
        "mse_num": gain.mse_number(n, m, g, eta_d),
        "mse_coh": gain.mse_coherent(n, m, g, eta_d),
    }


def _gain_threshold_row(values):
    return {"g_star": gain.threshold_gain(values["eta_d"], values["n"])}


def _ecb_row(values):
    n, m, g, g_prime = values["n"], values["m"], values["g"], values["g_prime"]
    b_quantum, _ = gain.ecb_distance(n, m, g, g_prime)
    b_classical, _ = gain.cecb_distance(n, m, g, g_prime)
    return {
        "b_quantum": b_quantum,
        "b_classical": b_classical,
        "ratio": b_classical / b_quantum if b_quantum > 0 else math.nan,
    }


def _spes_row(values):
    scenario = spes.NpsScenario(values["eta"], values["n_b"], values["n_s"])
    return {
        "chi_spes": spes.bhattacharyya_exponent_nps("spes", scenario),
        "chi_tmsv": spes.bhattacharyya_exponent_nps("tmsv", scenario),
        "chi_coh": spes.bhattacharyya_exponent_nps("coherent", scenario),
        "chi_mmpc": spes.optimal_mmpc_exponent(scenario)[0],
        "chi_mmpdc": spes.mmpdc_exponent(scenario, 0.5),
    }


def _distinguish_row(values):
    state_a, state_b = load_state_json(values["state_a"]), load_state_json(values["state_b"])
    fidelity = fidelity_gaussian(state_a, state_b)
    best = chernoff(state_a, state_b)
    return {
        "fidelity": fidelity,
        "c_half": bhattacharyya(state_a, state_b).value,
        "chernoff": best.value,
        "s_star": best.s_star,
        "pe_lower": fvg_bounds(fidelity)[0],
        "pe_upper": best.error_upper_bound(),
    }


class Subcommand:
    """A sweepable computation: default inputs, column schema and row function.

    Attributes:
        params: default scalar inputs
        grids: default grid inputs
        axes: input columns leading each row
        outputs: computed columns
        row: function mapping the inputs of one point to its computed columns
    """

    def __init__(self, params, grids, axes, outputs, row):
        """Constructor."""
        self.params = params
        self.grids = grids
        self.axes = axes
        self.outputs = outputs
        self.row = row

    @property
    def names(self):
        """Inputs accepted by the subcommand."""
        return set(self.params) | set(self.grids) | set(self.axes)

    @property
    def columns(self):
        """Dataset columns, the error message last."""
        return list(self.axes) + list(self.outputs) + ["error"]


SUBCOMMANDS = {
    "perfect-covert": Subcommand(
        {"eta": 0.01},
        {"n_b": _log_grid(0.01, 10.0, 5)},
        ("n_b",),
        (
            "chi_tmsv_qc",
            "chi_tmsv_qb",
            "chi_tmsv_analytic",
            "chi_gcs_qc",
            "chi_gcs_qb",
            "chi_gcs_analytic",
            "ratio_qc",
        ),
        _perfect_covert_row,
    ),
    "covert-energy": Subcommand(
        {"n_b": 0.2, "eps": 1e-3, "eta": 0.01},
        {"m": _log_grid(1e2, 1e6, 5)},
        ("m",),
        ("ns_min", "ns_max"),
        _covert_energy_row,
    ),
    "covert-bound": Subcommand(
        {"eta": 0.01, "n_b": 0.2, "eps": 1e-3},
        {"m": _log_grid(1e2, 1e5, 4)},
        ("m",),
        ("pe_floor", "pe_tmsv", "pe_gcs", "ns_covert"),
        _covert_bound_row,
    ),
    "gain-qfi": Subcommand(
        {"n": 6.0, "m": 9.0},
        {"g": _linear_grid(1.5, 3.0, 4)},
        ("g",),
        ("k_nds", "k_coh", "j_hom", "j_het"),
        _gain_qfi_row,
    ),
    "gain-mse": Subcommand(
        {"n": 6.0, "m": 9.0, "eta_d": 1.0},
        {"g": _linear_grid(1.5, 3.0, 4)},
        ("g",),
        ("qcrb_num", "qcrb_coh", "mse_num", "mse_coh"),
        _gain_mse_row,
    ),
    "gain-threshold": Subcommand(
        {"n": 20.0},
        {"eta_d": _linear_grid(0.5, 0.9, 5)},
        ("eta_d",),
        ("g_star",),
        _gain_threshold_row,
    ),
    "ecb": Subcommand(
        {"n": 6.0, "m": 9.0},
        {"g": _linear_grid(1.05, 5.0, 10), "g_prime": _linear_grid(1.05, 5.0, 10)},
        ("g", "g_prime"),
        ("b_quantum", "b_classical", "ratio"),
        _ecb_row,
    ),
    "spes": Subcommand(
        {"eta": 0.01, "n_b": 0.2},
        {"n_s": _log_grid(1e-3, 0.5, 5)},
        ("n_s",),
        ("chi_spes", "chi_tmsv", "chi_coh", "chi_mmpc", "chi_mmpdc"),
        _spes_row,
    ),
    "distinguish": Subcommand(
        {},
        {},
        (),
        ("fidelity", "c_half", "chernoff", "s_star", "pe_lower", "pe_upper"),
        _distinguish_row,
    ),
}


class SweepConfig:
    """Resolved inputs of one sweep.

    Attributes:
        subcommand: name of the computation
        params: scalar inputs
        grids: grid inputs, each ``{start, stop, count, scale}``
        output: output path, None for stdout
        format: ``"csv"`` or ``"json"``
        threads: worker count or ``"auto"``
        state_a: first state file of ``distinguish``
        state_b: second state file of ``distinguish``
    """

    def __init__(self, subcommand):
        """Start from the subcommand's defaults."""
        if subcommand not in SUBCOMMANDS:
            raise ConfigError(f"Unknown subcommand {subcommand!r}.")
        entry = SUBCOMMANDS[subcommand]
        self.subcommand = subcommand
        self.params = dict(entry.params)
        self.grids = {name: dict(grid) for name, grid in entry.grids.items()}
        self.output = None
        self.format = "csv"
        self.threads = 1
        self.state_a = None
        self.state_b = None

    def _check_name(self, name):
        if name not in SUBCOMMANDS[self.subcommand].names:
            raise ConfigError(f"Unknown parameter {name!r} for {self.subcommand}.")

    def set_param(self, name, value):
        """Fix an input to a scalar, replacing any grid over it."""
        self._check_name(name)
        try:
            self.params[name] = float(value)
        except (TypeError, ValueError) as exc:
            raise ConfigError(f"Parameter {name!r} has a non-numeric value {value!r}.") from exc
        self.grids.pop(name, None)

    def set_grid(self, name, grid):
        """Sweep an input over a grid, replacing any scalar value."""
        self._check_name(name)
        grid_values(grid)
        self.grids[name] = dict(grid)
        self.params.pop(name, None)

    def update(self, overrides):
        """Apply a config-file mapping."""
        unknown = set(overrides) - set(CONFIG_KEYS)
        if unknown:
            raise ConfigError(f"Unknown config keys {sorted(unknown)}.")
        if overrides.get("subcommand", self.subcommand) != self.subcommand:
            raise ConfigError(
                f"Config is for {overrides['subcommand']!r}, not {self.subcommand!r}."
            )
        for name, value in overrides.get("params", {}).items():
            self.set_param(name, value)
        for name, grid in overrides.get("grids", {}).items():
            self.set_grid(name, grid)
        for key in ("output", "format", "threads", "state_a", "state_b"):
            if key in overrides:
                setattr(self, key, overrides[key])

    @property
    def n_jobs(self):
        """joblib worker count."""
        if self.threads == "auto":
            return -1
        try:
            threads = int(self.threads)
        except (TypeError, ValueError) as exc:
            raise ConfigError(
                f"Threads must be a positive integer or 'auto', got {self.threads!r}."
            ) from exc
        if threads < 1:
            raise ConfigError(f"Threads must be a positive integer or 'auto', got {threads}.")
        return threads

    def points(self):
        """Input values of every row, grids expanded in declaration order."""
        entry = SUBCOMMANDS[self.subcommand]
        missing = [
            name for name in entry.axes if name not in self.params and name not in self.grids
        ]
        if missing:
            raise ConfigError(f"Missing inputs {missing} for {self.subcommand}.")
        base = dict(self.params)
        if self.subcommand == "distinguish":
            if not self.state_a or not self.state_b:
                raise ConfigError("distinguish needs --state-a and --state-b.")
            base.update(state_a=self.state_a, state_b=self.state_b)
        names = list(self.grids)
        axes = [grid_values(self.grids[name]) for name in names]
        return [
            dict(base, **{name: float(value) for name, value in zip(names, combo)})
            for combo in itertools.product(*axes)
        ]


def evaluate_row(subcommand, values):
    """One dataset row; library errors are recorded instead of raised."""
    entry = SUBCOMMANDS[subcommand]
    row = {name: values[name] for name in entry.axes}
    try:
        row.update(entry.row(values))
        row["error"] = ""
    except QilabError as exc:
        logger.warning("%s row %s failed: %s", subcommand, row, exc)
        row.update({name: math.nan for name in entry.outputs})
        row["error"] = f"{type(exc).__name__}: {exc}"
    return row


def run(config, progress=False):
    """Evaluate every grid point of a sweep.

    Args:
        config (SweepConfig): the sweep.
        progress (bool): show a progress bar.

    Returns:
        pandas.DataFrame: one row per point in grid order, columns fixed by the subcommand.
    """
    points = config.points()
    logger.info("%s: %d points on %s worker(s)", config.subcommand, len(points), config.n_jobs)
    rows = parallel_map(
        functools.partial(evaluate_row, config.subcommand),
        points,
        n_jobs=config.n_jobs,
        desc=config.subcommand,
        progress=progress,
    )
    logger.info("%s: done", config.subcommand)
    return pd.DataFrame(rows, columns=SUBCOMMANDS[config.subcommand].columns)


def _json_value(value):
    if isinstance(value, float) and not math.isfinite(value):
        return "nan" if math.isnan(value) else ("inf" if value > 0 else "-inf")
    if hasattr(value, "item"):
        return _json_value(value.item())
    return value


def emit(dataset, fmt="csv"):
    """Serialise a dataset.

    CSV carries a header row, 17 significant digits and LF line endings; JSON is an
    array of row objects. Non-finite numbers are written as ``inf``, ``-inf`` and ``nan``.

    Returns:
        bytes: the encoded dataset.
    """
    if dataset.empty:
        raise IoError("Refusing to write an empty dataset.")
    if fmt == "csv":
        text = dataset.to_csv(index=False, float_format="%.17g", na_rep="nan", lineterminator="\n")
    elif fmt == "json":
        records = [
            {key: _json_value(value) for key, value in record.items()}
            for record in dataset.to_dict(orient="records")
        ]
        text = json.dumps(records, indent=1) + "\n"
    else:
        raise IoError(f"Unknown output format {fmt!r}, expected one of {FORMATS}.")
    return text.encode("utf-8")


def write_output(payload, path=None):
    """Write bytes to ``path``, or to stdout when no path is given."""
    if path is None:
        sys.stdout.buffer.write(payload)
        return
    try:
        Path(path).write_bytes(payload)
    except OSError as exc:
        raise IoError(f"Cannot write {path}: {exc}") from exc


def build_config(args):
    """Resolve defaults, config file and command-line flags into a SweepConfig."""
    config = SweepConfig(args.subcommand)
    if args.config:
        try:
            overrides = json.loads(Path(args.config).read_text())
        except (OSError, ValueError) as exc:
            raise ConfigError(f"Cannot read config file {args.config}: {exc}") from exc
        if not isinstance(overrides, dict):
            raise ConfigError(f"Config file {args.config} must hold a JSON object.")
        config.update(overrides)
    for text in args.param:
        config.set_param(*parse_param(text))
    for text in args.grid:
        config.set_grid(*parse_grid(text))
    for key in ("output", "format", "threads", "state_a", "state_b"):
        value = getattr(args, key)
        if value is not None:
            setattr(config, key, value)
    if config.format not in FORMATS:
        raise ConfigError(f"Unknown output format {config.format!r}, expected one of {FORMATS}.")
    return config


def get_parser():
    """Command-line parser."""
    parser = argparse.ArgumentParser(
        prog="qilab", description="Quantum-limit sweeps for covert sensing and gain estimation."
    )
    parser.add_argument("subcommand", choices=sorted(SUBCOMMANDS), help="Computation to sweep")
    parser.add_argument("--config", help="JSON file mirroring the sweep configuration")
    parser.add_argument("--out", dest="output", help="Output path, stdout when omitted")
    parser.add_argument("--format", choices=FORMATS, default=None, help="Output format")
    parser.add_argument("--threads", default=None, help="Number of workers or 'auto'")
    parser.add_argument(
        "--param", action="append", default=[], metavar="NAME=VALUE", help="Scalar input"
    )
    parser.add_argument(
        "--grid",
        action="append",
        default=[],
        metavar="NAME=START:STOP:COUNT[:log]",
        help="Grid input",
    )
    parser.add_argument("--state-a", dest="state_a", help="First state file for distinguish")
    parser.add_argument("--state-b", dest="state_b", help="Second state file for distinguish")
    parser.add_argument("--seed", type=int, default=None, help="Reserved, sweeps are deterministic")
    parser.add_argument("-v", "--verbose", action="count", default=0, help="-v info, -vv debug")
    parser.add_argument("--version", action="version", version=f"%(prog)s {VERSION}")
    return parser


def main(argv=None):
    """The qilab entry point."""
    parser = get_parser()
    args = parser.parse_args(argv)
    level = {0: logging.WARNING, 1: logging.INFO}.get(args.verbose, logging.DEBUG)
    logging.basicConfig(level=level, format="%(asctime)s %(name)s %(levelname)s %(message)s")
    if args.seed is not None:
        logger.info("--seed %d ignored, no sweep draws random numbers", args.seed)
    try:
        config = build_config(args)
        dataset = run(config, progress=args.verbose > 0)
    except ConfigError as exc:
        parser.error(str(exc))
    try:
        write_output(emit(dataset, config.format), config.output)
    except IoError as exc:
        logger.error("%s", exc)
        return 1
    return 0

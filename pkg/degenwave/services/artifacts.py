"""CSV and JSON writers for the command outputs.

Floats are printed with 17 significant digits and JSON keys are sorted, so that
identical inputs give byte-identical files.
"""

import json
import math
from collections.abc import Iterable, Sequence
from pathlib import Path

import numpy as np
from pydantic import BaseModel

from degenwave.core.constants import FLOAT_FORMAT
from degenwave.core.logging import logger
from degenwave.models.domain import ControlSignal
from degenwave.models.schemas import (
    CounterexampleReport,
    DecayReport,
    EigenReport,
    GramSweepRow,
    ObservabilityReport,
)
from degenwave.services.scenarios import SolveResult


def _cell(value) -> str:
    if isinstance(value, (bool, np.bool_)):
        return str(bool(value)).lower()
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    if isinstance(value, (float, np.floating)):
        return FLOAT_FORMAT.format(float(value))
    return str(value)


def write_csv(path: Path, header: Sequence[str], rows: Iterable[Sequence]) -> Path:
    path.parent.mkdir(parents=True, exist_ok=True)
    count = 0
    with open(path, "w", encoding="utf-8", newline="\n") as f:
        f.write(",".join(header) + "\n")
        for row in rows:
            f.write(",".join(_cell(v) for v in row) + "\n")
            count += 1
    logger.info(f"Wrote {count} rows to {path}")
    return path


class _FixedDigitsEncoder(json.JSONEncoder):
    """Prints floats with FLOAT_FORMAT, the same digits as the CSV cells."""

    def iterencode(self, o, _one_shot=False):
        allow_nan = self.allow_nan

        def floatstr(value: float) -> str:
            if math.isfinite(value):
                return FLOAT_FORMAT.format(value)
            if not allow_nan:
                raise ValueError(f"float {value!r} is not JSON compliant")
            return "NaN" if math.isnan(value) else ("Infinity" if value > 0 else "-Infinity")

        indent = " " * self.indent if isinstance(self.indent, int) else self.indent
        encode = json.encoder.encode_basestring_ascii if self.ensure_ascii else json.encoder.encode_basestring
        return json.encoder._make_iterencode(
            {} if self.check_circular else None,
            self.default,
            encode,
            indent,
            floatstr,
            self.key_separator,
            self.item_separator,
            self.sort_keys,
            self.skipkeys,
            _one_shot,
        )(o, 0)


def dump_json(model: BaseModel) -> str:
    data = model.model_dump(mode="json")
    return json.dumps(data, cls=_FixedDigitsEncoder, sort_keys=True, indent=2, ensure_ascii=False) + "\n"


def write_json(path: Path, model: BaseModel) -> Path:
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", encoding="utf-8", newline="\n") as f:
        f.write(dump_json(model))
    logger.info(f"Wrote {path}")
    return path


# --- Per-command artifacts ---
def write_eigen(out: Path, name: str, report: EigenReport) -> list[Path]:
    rows = [(r.n, r.j_mu_n, r.lambda_n, r.flux_l) for r in report.rows]
    return [write_csv(out / f"{name}_eigen.csv", ("n", "j_mu_n", "lambda_n", "flux_L"), rows)]


def write_solve(out: Path, name: str, engine: str, result: SolveResult) -> list[Path]:
    traj = result.trajectory
    traj_rows = ((t, x, w) for t, snap in zip(traj.times, traj.snapshots) for x, w in zip(traj.x, snap))
    return [
        write_csv(out / f"{name}_trajectory_{engine}.csv", ("t", "x", "w"), traj_rows),
        write_csv(out / f"{name}_energy_{engine}.csv", ("t", "E"), zip(result.energy.times, result.energy.energy)),
        write_csv(out / f"{name}_trace_{engine}.csv", ("t", "v_x_at_L"), zip(result.trace.times, result.trace.values)),
        write_json(out / f"{name}_solve.json", result.report),
    ]


def write_observe(out: Path, name: str, report: ObservabilityReport, sweep: list[GramSweepRow]) -> list[Path]:
    rows = [(r.alpha, r.horizon_t, r.n, r.lambda_min) for r in sweep]
    return [
        write_json(out / f"{name}_observability.json", report),
        write_csv(out / f"{name}_gram_sweep.csv", ("alpha", "T", "N", "lambda_min"), rows),
    ]


def write_control(out: Path, name: str, signal: ControlSignal, report: DecayReport) -> list[Path]:
    return [
        write_csv(out / f"{name}_control.csv", ("t", "theta"), zip(signal.times, signal.theta)),
        write_json(out / f"{name}_control.json", report),
    ]


def write_counterexample(out: Path, name: str, report: CounterexampleReport) -> list[Path]:
    rows = [(r.shift, r.numerator, r.denominator, r.quotient) for r in report.rows]
    return [write_csv(out / f"{name}_quotients.csv", ("shift", "numerator", "denominator", "quotient"), rows)]

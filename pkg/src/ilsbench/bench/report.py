"""Aggregation of run results into report rows, and report serialisation."""

from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import asdict, dataclass, field

from ilsbench.errors import ParameterError

COLUMNS = (
    "instance",
    "config",
    "runs",
    "mean_best",
    "min_best",
    "max_best",
    "best_known",
    "mean_excess_pct",
    "mean_local_searches",
    "mean_time_s",
)
FORMATS = ("csv", "markdown", "json-lines")


@dataclass
class ReportRow:
    instance: str
    config: str
    runs: int
    mean_best: float
    min_best: int
    max_best: int
    best_known: int | None
    mean_excess_pct: float | None
    mean_local_searches: float
    mean_time_s: float
    params: dict = field(default_factory=dict)
    baseline: bool = False

    def values(self) -> dict:
        return {c: getattr(self, c) for c in COLUMNS}


@dataclass
class Report:
    rows: list[ReportRow] = field(default_factory=list)
    runs: list[dict] = field(default_factory=list)
    trajectories: list[dict] = field(default_factory=list)

    def row(self, instance: str, config: str) -> ReportRow:
        for r in self.rows:
            if r.instance == instance and r.config == config:
                return r
        raise KeyError((instance, config))


def excess_pct(cost: float, best_known: int | None) -> float | None:
    if best_known is None:
        return None
    return 100.0 * (cost - best_known) / best_known


def _mean(values) -> float:
    values = list(values)
    return math.fsum(values) / len(values)


def aggregate(runs: list[dict]) -> Report:
    """Group raw run dicts by (instance, config), in order of first appearance.

    This is the only aggregation path: reports built during an experiment and
    reports rebuilt from a saved ``runs.jsonl`` go through the same arithmetic.
    """
    groups: dict[tuple[str, str], list[dict]] = {}
    for run in runs:
        groups.setdefault((run["instance"], run["config"]), []).append(run)
    rows = []
    for (instance, config), group in groups.items():
        costs = [int(r["best_cost"]) for r in group]
        bk = group[0].get("best_known")
        rows.append(
            ReportRow(
                instance=instance,
                config=config,
                runs=len(group),
                mean_best=_mean(costs),
                min_best=min(costs),
                max_best=max(costs),
                best_known=bk,
                mean_excess_pct=None if bk is None else _mean(excess_pct(c, bk) for c in costs),
                mean_local_searches=_mean(r["n_local_searches"] for r in group),
                mean_time_s=_mean(r["elapsed"] for r in group),
                params=dict(group[0].get("params", {})),
                baseline=bool(group[0].get("baseline", False)),
            )
        )
    return Report(rows=rows, runs=list(runs))


def read_runs(text: str) -> list[dict]:
    return [json.loads(line) for line in text.splitlines() if line.strip()]


def runs_to_jsonl(runs: list[dict]) -> str:
    return "".join(json.dumps(r, sort_keys=True) + "\n" for r in runs)


def trajectory_capture(run, sample_every: int) -> list[tuple[int, int]]:
    """Best-cost series sampled every ``sample_every`` iterations; the last point is always kept."""
    if sample_every < 1:
        raise ParameterError(f"sample_every must be >= 1, got {sample_every}")
    trace = run.trace
    if len(trace) == 0:
        raise ParameterError("run has no trace")
    out = [(it, best) for it, best in zip(trace.iteration, trace.best) if it % sample_every == 0]
    last = (trace.iteration[-1], trace.best[-1])
    if not out or out[-1] != last:
        out.append(last)
    return out


def _csv(report: Report) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\r\n")
    w.writerow(COLUMNS)
    for row in report.rows:
        w.writerow(["" if v is None else repr(v) if isinstance(v, float) else v for v in row.values().values()])
    return buf.getvalue()


def _fmt_cell(row: ReportRow) -> str:
    if row.mean_excess_pct is not None:
        return f"{row.mean_excess_pct:.2f}"
    return f"{row.mean_best:.1f}"


def _markdown_flat(report: Report) -> str:
    lines = ["| " + " | ".join(COLUMNS) + " |", "|" + "---|" * len(COLUMNS)]
    for row in report.rows:
        cells = []
        for v in row.values().values():
            cells.append("" if v is None else f"{v:.2f}" if isinstance(v, float) else str(v))
        lines.append("| " + " | ".join(cells) + " |")
    return "\n".join(lines) + "\n"


def _markdown_pivot(report: Report) -> str:
    strengths: list[str] = []
    table: dict[tuple[str, str], dict[str, str]] = {}
    baseline: dict[str, str] = {}
    for row in report.rows:
        if row.baseline:
            baseline[row.instance] = _fmt_cell(row)
            continue
        s = str(row.params["strength"])
        if s not in strengths:
            strengths.append(s)
        rest = " ".join(f"{k}={v}" for k, v in row.params.items() if k != "strength")
        table.setdefault((row.instance, rest), {})[s] = _fmt_cell(row)
    cols = strengths + (["RR"] if baseline else [])
    has_rest = any(rest for _, rest in table)
    head = ["instance"] + (["config"] if has_rest else []) + cols
    lines = ["| " + " | ".join(head) + " |", "|" + "---|" * len(head)]
    for (instance, rest), cells in table.items():
        vals = [cells.get(s, "") for s in strengths]
        if baseline:
            vals.append(baseline.get(instance, ""))
        lines.append("| " + " | ".join([instance] + ([rest] if has_rest else []) + vals) + " |")
    legend = "Cells: mean excess % over best known, or mean best cost where none is known."
    return "\n".join(lines) + "\n\n" + legend + "\n"


def is_strength_sweep(report: Report) -> bool:
    rows = [r for r in report.rows if not r.baseline]
    return bool(rows) and all("strength" in r.params for r in rows) and len({str(r.params["strength"]) for r in rows}) > 1


def emit_report(report: Report, fmt: str = "csv") -> bytes:
    """Serialise a report. Column order is fixed by ``COLUMNS``.

    Markdown output pivots strength sweeps into instance rows by strength
    columns (plus an RR column when the baseline ran); other reports are
    printed flat.
    """
    if fmt == "csv":
        text = _csv(report)
    elif fmt == "markdown":
        text = _markdown_pivot(report) if is_strength_sweep(report) else _markdown_flat(report)
    elif fmt == "json-lines":
        text = "".join(json.dumps({**row.values(), "params": row.params, "baseline": row.baseline}) + "\n"
                       for row in report.rows)
    else:
        raise ParameterError(f"unknown report format {fmt!r}; choose from {FORMATS}")
    return text.encode("utf-8")


def row_dict(row: ReportRow) -> dict:
    return asdict(row)

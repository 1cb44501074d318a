"""Experiment orchestration and report emission (table, json-lines, csv-series)."""

from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import dataclass, field, fields

import numpy as np

from .adversary import SynthesisReport, demonstrate_equal, demonstrate_inconsistency
from .comparators import (BoundCheck, Verdict, compare_berinde_def25,
                          compare_berinde_def27, compare_popescu, compare_rhoades,
                          compare_zalinescu)
from .config import SCHEMA_VERSION, ExperimentConfig
from .errors import ItercompareError
from .iterations import trace_of
from .metric import error_trace, xratio_array

FORMATS = ("table", "jsonl", "csv")


@dataclass
class Series:
    """Per-index data behind a record, for csv output and plotting."""

    n: np.ndarray
    e_left: np.ndarray
    e_right: np.ndarray
    a: np.ndarray | None = None
    b: np.ndarray | None = None

    @property
    def ratio(self) -> np.ndarray:
        return xratio_array(self.e_left, self.e_right)


@dataclass
class ReportRecord:
    experiment: str
    comparator: str
    relation: str
    direction: str | None = None
    stats: dict = field(default_factory=dict)
    evidence: list = field(default_factory=list)
    bounds: dict | None = None
    bound_checks: list | None = None
    truncated_at: int | None = None
    notes: str = ""
    warnings: list = field(default_factory=list)
    schema_version: int = SCHEMA_VERSION
    series: Series | None = field(default=None, repr=False, compare=False)

    def to_json(self) -> str:
        d = {f.name: getattr(self, f.name) for f in fields(self) if f.name != "series"}
        return json.dumps(_encode(d), sort_keys=True, allow_nan=False)

    @classmethod
    def from_json(cls, line: str) -> "ReportRecord":
        return cls(**_decode(json.loads(line)))


def _encode(obj):
    if isinstance(obj, float) and math.isinf(obj):
        return "inf" if obj > 0 else "-inf"
    if isinstance(obj, dict):
        return {k: _encode(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_encode(v) for v in obj]
    return obj


def _decode(obj):
    if obj == "inf":
        return math.inf
    if obj == "-inf":
        return -math.inf
    if isinstance(obj, dict):
        return {k: _decode(v) for k, v in obj.items()}
    if isinstance(obj, list):
        return [_decode(v) for v in obj]
    return obj


def _check_dict(c: BoundCheck) -> dict:
    return {"ok": c.ok, "index": c.index, "condition": c.condition,
            "tail_max": c.tail_max, "vanishing": c.vanishing, "source": c.source}


def _record(cfg: ExperimentConfig, v: Verdict, series: Series, **extra) -> ReportRecord:
    return ReportRecord(
        experiment=cfg.id, comparator=v.comparator, relation=v.relation,
        stats=dict(v.stats), evidence=[e.as_dict() for e in v.evidence],
        truncated_at=v.truncated_at, notes=v.notes, series=series, **extra)


def _synthesis_record(cfg, rep: SynthesisReport, series: Series) -> ReportRecord:
    s = Series(series.n, series.e_left, series.e_right,
               rep.bounds_for_x.values, rep.bounds_for_y.values)
    stats = dict(rep.berinde_verdict.stats)
    stats["bound_ratio_tail"] = rep.ratio_tail.value
    warnings = list(rep.warnings)
    if rep.offset:
        warnings.append(f"re-indexed from n={rep.offset + 1} to n=1")
    rec = _record(cfg, rep.berinde_verdict, s, direction=rep.direction,
                  bounds={"left": rep.bounds_for_x.source, "right": rep.bounds_for_y.source},
                  bound_checks=[_check_dict(rep.validity_x), _check_dict(rep.validity_y)],
                  warnings=warnings)
    rec.stats = stats
    return rec


def run_experiment(cfg: ExperimentConfig) -> list[ReportRecord]:
    """Generate both traces and apply every selected comparator in order."""
    traces = {}
    for side, sc in (("left", cfg.left), ("right", cfg.right)):
        try:
            traces[side] = trace_of(sc)
        except ItercompareError as exc:
            raise type(exc)(f"{cfg.id}: {side}: {exc}") from None
    el = error_trace(traces["left"], cfg.left.limit, cfg.metric)
    er = error_trace(traces["right"], cfg.right.limit, cfg.metric)
    series = Series(el.indices, el.values, er.values)
    est = cfg.estimator
    records = []
    for comp in cfg.comparators:
        if comp == "rhoades":
            records.append(_record(cfg, compare_rhoades(el, er), series))
        elif comp == "popescu":
            records.append(_record(cfg, compare_popescu(el, er, est), series))
        elif comp == "zalinescu":
            records.append(_record(cfg, compare_zalinescu(el, er, est), series))
        elif comp == "berinde25":
            if traces["left"].dimension == 1:
                v = compare_berinde_def25(traces["left"].points[:, 0],
                                          traces["right"].points[:, 0],
                                          cfg.left.limit[0], cfg.right.limit[0], est)
                note = "real sequences x_n, y_n against their limits"
            else:
                v = compare_berinde_def25(el.values, er.values, 0.0, 0.0, est)
                note = "error sequences against 0 (dimension > 1)"
            rec = _record(cfg, v, series)
            rec.notes = note
            records.append(rec)
        elif comp == "berinde27":
            records.extend(_berinde27_records(cfg, el, er, series))
    return records


def _berinde27_records(cfg, el, er, series) -> list[ReportRecord]:
    est = cfg.estimator
    out = []
    for mode in cfg.bounds_modes:
        if mode == "user-supplied":
            bl, br = cfg.user_bounds
            v = compare_berinde_def27(el, er, bl, br, est)
            m = series.n.size
            full = len(bl) >= m and len(br) >= m
            s = Series(series.n, series.e_left, series.e_right,
                       bl.values[:m] if full else None, br.values[:m] if full else None)
            out.append(_record(cfg, v, s, direction="user",
                               bounds={"left": bl.source, "right": br.source}))
        elif mode == "equal":
            out.append(_synthesis_record(cfg, demonstrate_equal(el, er, est), series))
        else:
            fwd, rev = demonstrate_inconsistency(el, er, est)
            pair = (fwd, rev) if mode == "prop1-forward" else (rev, fwd)
            out.extend(_synthesis_record(cfg, r, series) for r in pair)
    return out


# -- emission -------------------------------------------------------------------

def _fmt(x) -> str:
    if x is None:
        return "-"
    if isinstance(x, float):
        if math.isinf(x):
            return "inf"
        return f"{x:.6g}"
    return str(x)


def _detail(r: ReportRecord) -> str:
    s = r.stats
    if r.comparator == "zalinescu":
        return f"liminf={_fmt(s.get('liminf'))} limsup={_fmt(s.get('limsup'))}"
    if r.comparator == "rhoades":
        keys = [k for k in ("first_left_worse", "first_right_worse") if k in s]
        return " ".join(f"{k}={s[k]}" for k in keys) or "pointwise"
    if "l" in s:
        return f"l={_fmt(s['l'])} tail_max={_fmt(s.get('ratio_tail_max'))}"
    return (f"tail in [{_fmt(s.get('ratio_tail_min'))}, "
            f"{_fmt(s.get('ratio_tail_max'))}]")


def emit_table(records) -> str:
    header = ("EXPERIMENT", "COMPARATOR", "BOUNDS", "RELATION", "DETAIL")
    rows = [header]
    for r in records:
        bounds = r.direction or "-"
        rows.append((r.experiment, r.comparator, bounds, r.relation, _detail(r)))
    widths = [max(len(row[i]) for row in rows) for i in range(len(header) - 1)]
    lines = []
    for row in rows:
        cells = [c.ljust(w) for c, w in zip(row[:-1], widths)] + [row[-1]]
        lines.append("  ".join(cells).rstrip())
    warnings = [f"warning: {r.experiment}/{r.comparator}: {w}" for r in records for w in r.warnings]
    return "\n".join(lines + warnings) + "\n"


def emit_jsonl(records) -> str:
    return "".join(r.to_json() + "\n" for r in records)


def _csv_value(x) -> str:
    x = float(x)
    if math.isinf(x):
        return "inf"
    return repr(x)


def emit_csv(records) -> str:
    """Per-index series, one block of rows per experiment."""
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    by_exp: dict[str, list[ReportRecord]] = {}
    for r in records:
        by_exp.setdefault(r.experiment, []).append(r)
    bound_recs = {k: [r for r in v if r.series is not None and r.series.a is not None]
                  for k, v in by_exp.items()}
    nb = max((len(v) for v in bound_recs.values()), default=0)
    header = ["experiment", "n", "e_left", "e_right", "ratio"]
    if nb == 1:
        header += ["a_n", "b_n"]
    else:
        for i in range(nb):
            header += [f"a_n_{i + 1}", f"b_n_{i + 1}"]
    writer.writerow(header)
    for exp, recs in by_exp.items():
        s = next((r.series for r in recs if r.series is not None), None)
        if s is None:
            continue
        ratio = s.ratio
        brs = bound_recs[exp]
        for k in range(s.n.size):
            row = [exp, int(s.n[k]), _csv_value(s.e_left[k]), _csv_value(s.e_right[k]),
                   _csv_value(ratio[k])]
            for i in range(nb):
                if i < len(brs):
                    row += [_csv_value(brs[i].series.a[k]), _csv_value(brs[i].series.b[k])]
                else:
                    row += ["", ""]
            writer.writerow(row)
    return buf.getvalue()


def emit(records, fmt: str = "table") -> str:
    records = list(records)
    if not records:
        raise ValueError("nothing to emit")
    if fmt == "table":
        return emit_table(records)
    if fmt in ("jsonl", "json-lines"):
        return emit_jsonl(records)
    if fmt in ("csv", "csv-series"):
        return emit_csv(records)
    raise ValueError(f"unknown format {fmt!r}; expected one of {FORMATS}")


def emit_demonstration(forward: ReportRecord, reverse: ReportRecord) -> str:
    """Side-by-side view of the two contradictory bound-mediated verdicts."""
    def col(r: ReportRecord):
        checks = r.bound_checks or []
        return [
            r.direction,
            r.bounds["left"], r.bounds["right"],
            ", ".join("ok" if c["ok"] else f"FAIL {c['condition']}@{c['index']}"
                      for c in checks),
            _fmt(r.stats.get("bound_ratio_tail")),
            r.relation,
        ]
    labels = ["direction", "bound for left", "bound for right", "validations",
              "a_n/b_n tail", "verdict"]
    left, right = col(forward), col(reverse)
    w0 = max(map(len, labels))
    w1 = max(len(str(x)) for x in left)
    lines = [f"{forward.experiment}: both directions certified by valid bounds"]
    for lab, a, b in zip(labels, left, right):
        lines.append(f"  {lab.ljust(w0)}  {str(a).ljust(w1)}  {b}")
    contradiction = {forward.relation, reverse.relation} == {"left_faster", "right_faster"}
    lines.append("  => contradiction: left is faster AND right is faster"
                 if contradiction else "  => no contradiction obtained")
    return "\n".join(lines) + "\n"

"""File interchange: population tables, GDU histories, forecasts, reports.

All tabular data is CSV. Population files carry ISO dates; dates are mapped
to 1-based horizon day indices at load time (the horizon calendar skips
Feb 29, matching the forecasting convention). JSON is used for the instance
bundle descriptor and the strategy report.
"""

from __future__ import annotations

import csv
import datetime as dt
import json
import warnings as _warnings
from pathlib import Path
from typing import Optional

import numpy as np

from .errors import SchemaError
from .forecast import GduForecast, GduHistory, horizon_dates
from .model import Instance, SeedPopulation

POPULATION_COLUMNS = ("id", "site", "early_date", "late_date", "required_gdu",
                      "harvest_qty", "original_date")
GDU_COLUMNS = ("site", "date", "gdu")
FORECAST_COLUMNS = ("day_index", "calendar_date", "gdu")


def _day_index_map(horizon_start: dt.date, horizon_days: int) -> dict[dt.date, int]:
    return {day: i + 1 for i, day in enumerate(horizon_dates(horizon_start, horizon_days))}


def _parse_date(text: str, path, line: int) -> dt.date:
    try:
        return dt.date.fromisoformat(text.strip())
    except ValueError:
        raise SchemaError(f"{path}:{line}: bad ISO date {text!r}") from None


def _check_header(reader: csv.DictReader, required, path) -> None:
    have = tuple(reader.fieldnames or ())
    for column in required:
        if column not in have:
            raise SchemaError(f"{path}: missing required column {column!r}")
    unknown = [c for c in have if c not in required]
    if unknown:
        _warnings.warn(f"{path}: ignoring unknown columns {unknown}", stacklevel=3)


def load_populations(path, horizon_start: dt.date, horizon_days: int,
                     site: Optional[int] = None) -> list[SeedPopulation]:
    """Read a population CSV and convert its dates to horizon day indices."""
    path = Path(path)
    index_of = _day_index_map(horizon_start, horizon_days)
    populations = []
    seen: set[str] = set()
    with path.open(newline="") as fh:
        reader = csv.DictReader(fh)
        _check_header(reader, POPULATION_COLUMNS, path)
        for row in reader:
            line = reader.line_num
            try:
                pid = row["id"].strip()
                row_site = int(row["site"])
                required = float(row["required_gdu"])
                qty = int(row["harvest_qty"])
            except (ValueError, AttributeError):
                raise SchemaError(f"{path}:{line}: malformed row {row!r}") from None
            if not pid:
                raise SchemaError(f"{path}:{line}: empty population id")
            if site is not None and row_site != site:
                continue
            if pid in seen:
                raise SchemaError(f"{path}:{line}: duplicate population id {pid!r}")
            seen.add(pid)

            def to_index(column: str, optional: bool = False) -> Optional[int]:
                text = (row[column] or "").strip()
                if not text:
                    if optional:
                        return None
                    raise SchemaError(f"{path}:{line}: missing {column}")
                day = _parse_date(text, path, line)
                if day not in index_of:
                    raise SchemaError(
                        f"{path}:{line}: {column} {text} outside the "
                        f"{horizon_days}-day horizon starting {horizon_start}"
                    )
                return index_of[day]

            populations.append(SeedPopulation(
                id=pid,
                site=row_site,
                early_day=to_index("early_date"),
                late_day=to_index("late_date"),
                required_gdu=required,
                harvest_qty=qty,
                original_day=to_index("original_date", optional=True),
            ))
    if site is None:
        sites = {p.site for p in populations}
        if len(sites) > 1:
            raise SchemaError(f"{path}: mixed sites {sorted(sites)}; pass an explicit site")
    return populations


def save_populations(path, populations, horizon_start: dt.date, horizon_days: int) -> None:
    dates = horizon_dates(horizon_start, horizon_days)
    with Path(path).open("w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(POPULATION_COLUMNS)
        for p in populations:
            writer.writerow([
                p.id, p.site,
                dates[p.early_day - 1].isoformat(),
                dates[p.late_day - 1].isoformat(),
                repr(p.required_gdu),
                p.harvest_qty,
                dates[p.original_day - 1].isoformat() if p.original_day is not None else "",
            ])


def load_gdu_history(path, site: Optional[int] = None) -> GduHistory:
    """Read a GDU history CSV; Feb 29 rows are kept but never used downstream."""
    path = Path(path)
    records: dict[tuple[int, int, int], float] = {}
    sites = set()
    with path.open(newline="") as fh:
        reader = csv.DictReader(fh)
        _check_header(reader, GDU_COLUMNS, path)
        for row in reader:
            line = reader.line_num
            try:
                row_site = int(row["site"])
                value = float(row["gdu"])
            except (ValueError, TypeError):
                raise SchemaError(f"{path}:{line}: malformed row {row!r}") from None
            if value < 0:
                raise SchemaError(f"{path}:{line}: negative GDU {value}")
            if site is not None and row_site != site:
                continue
            day = _parse_date(row["date"], path, line)
            sites.add(row_site)
            records[(day.year, day.month, day.day)] = value
    if site is None and len(sites) > 1:
        raise SchemaError(f"{path}: mixed sites {sorted(sites)}; pass an explicit site")
    return GduHistory(site=site if site is not None else (sites.pop() if sites else 0),
                      records=records)


def save_gdu_history(path, history: GduHistory) -> None:
    with Path(path).open("w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(GDU_COLUMNS)
        for (year, month, day), value in sorted(history.records.items()):
            writer.writerow([history.site, f"{year:04d}-{month:02d}-{day:02d}", repr(value)])


def save_forecast_csv(path, forecast: GduForecast) -> None:
    dates = (horizon_dates(forecast.start, forecast.horizon_days)
             if forecast.start is not None else None)
    with Path(path).open("w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(FORECAST_COLUMNS)
        for i, value in enumerate(forecast.daily):
            date_text = dates[i].isoformat() if dates else ""
            writer.writerow([i + 1, date_text, repr(float(value))])


def load_forecast_csv(path, site: int = 0) -> GduForecast:
    """Read a daily forecast; this is the entry point for externally produced
    predictions (day_index must run 1..D contiguously)."""
    path = Path(path)
    rows = []
    start = None
    with path.open(newline="") as fh:
        reader = csv.DictReader(fh)
        _check_header(reader, FORECAST_COLUMNS, path)
        for row in reader:
            line = reader.line_num
            try:
                idx = int(row["day_index"])
                value = float(row["gdu"])
            except (ValueError, TypeError):
                raise SchemaError(f"{path}:{line}: malformed row {row!r}") from None
            if idx == 1 and (row["calendar_date"] or "").strip():
                start = _parse_date(row["calendar_date"], path, line)
            rows.append((idx, value))
    if not rows:
        raise SchemaError(f"{path}: empty forecast")
    rows.sort()
    indices = [i for i, _ in rows]
    if indices != list(range(1, len(rows) + 1)):
        raise SchemaError(f"{path}: day_index must be contiguous from 1")
    return GduForecast.from_daily([v for _, v in rows], start=start, site=site)


INSTANCE_BUNDLE = "instance.json"


def write_instance_bundle(out_dir, instance: Instance, history: GduHistory,
                          horizon_start: dt.date, seed: Optional[int] = None) -> Path:
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    save_populations(out / "populations.csv", instance.populations, horizon_start,
                     instance.horizon_days)
    save_gdu_history(out / "gdu_history.csv", history)
    descriptor = {
        "schema_version": 1,
        "site": instance.site,
        "horizon_start": horizon_start.isoformat(),
        "horizon_days": instance.horizon_days,
        "capacity": instance.capacity,
        "populations_csv": "populations.csv",
        "gdu_csv": "gdu_history.csv",
        "rng_seed": seed,
        "instance_hash": instance.fingerprint(),
    }
    bundle = out / INSTANCE_BUNDLE
    bundle.write_text(json.dumps(descriptor, indent=2, sort_keys=True) + "\n")
    return bundle


def load_instance_bundle(bundle_path) -> tuple[Instance, GduHistory, dt.date]:
    bundle_path = Path(bundle_path)
    try:
        descriptor = json.loads(bundle_path.read_text())
    except json.JSONDecodeError as err:
        raise SchemaError(f"{bundle_path}: not valid JSON ({err})") from None
    for key in ("site", "horizon_start", "horizon_days", "populations_csv", "gdu_csv"):
        if key not in descriptor:
            raise SchemaError(f"{bundle_path}: missing key {key!r}")
    start = dt.date.fromisoformat(descriptor["horizon_start"])
    horizon_days = int(descriptor["horizon_days"])
    site = int(descriptor["site"])
    base = bundle_path.parent
    populations = load_populations(base / descriptor["populations_csv"], start,
                                   horizon_days, site=site)
    history = load_gdu_history(base / descriptor["gdu_csv"], site=site)
    capacity = descriptor.get("capacity")
    instance = Instance(
        populations=tuple(populations),
        horizon_days=horizon_days,
        capacity=int(capacity) if capacity is not None else None,
        site=site,
    )
    return instance, history, start


def write_report_json(path, report_dict: dict) -> None:
    Path(path).write_text(json.dumps(report_dict, indent=2, sort_keys=True) + "\n")


def write_front_csvs(out_dir, report_dict: dict) -> list[Path]:
    """One CSV per model: criterion values, source model, combination id, and
    the TOPSIS score for members of the selected front."""
    out = Path(out_dir)
    written = []
    selected_model = report_dict["selected_model"]
    scores = report_dict["topsis"]["scores"]
    arity = len(report_dict["reference"])
    for model_key in sorted(report_dict["models"]):
        front = report_dict["models"][model_key]["front"]
        path = out / f"front_model{model_key}.csv"
        with path.open("w", newline="") as fh:
            writer = csv.writer(fh)
            header = [f"objective_{i + 1}" for i in range(arity)]
            writer.writerow(["member", *header, "source_model", "combo_id", "topsis_score"])
            for i, member in enumerate(front):
                score = ""
                if int(model_key) == selected_model:
                    score = repr(float(scores[i]))
                writer.writerow([
                    i,
                    *[repr(float(v)) for v in member["values"]],
                    model_key,
                    member["combo_id"],
                    score,
                ])
        written.append(path)
    return written


def write_schedule_csv(path, report_dict: dict) -> None:
    instance_info = report_dict["instance"]
    selected = report_dict["selected"]
    start_text = instance_info.get("horizon_start")
    dates = None
    if start_text:
        dates = horizon_dates(dt.date.fromisoformat(start_text), instance_info["horizon_days"])
    weeks = selected["harvest_weeks"]
    with Path(path).open("w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["population_id", "planting_day", "planting_date", "harvest_week"])
        for pid, day, week in zip(instance_info["population_ids"], selected["schedule"], weeks):
            date_text = dates[day - 1].isoformat() if dates else ""
            writer.writerow([pid, day, date_text, week])


def write_weekly_csv(path, report_dict: dict) -> None:
    selected = report_dict["selected"]
    capacity = report_dict["instance"]["capacity"]
    if report_dict["scenario"] == 2:
        capacity = selected["capacity_hat"]
    with Path(path).open("w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["week", "total", "capacity", "deviation"])
        for week, total in enumerate(selected["weekly_totals"], start=1):
            writer.writerow([week, total, capacity, total - capacity])


def write_weekly_svg(path, report_dict: dict, width: int = 900, height: int = 420) -> None:
    """Static bar chart of weekly totals with the capacity as a rule line."""
    selected = report_dict["selected"]
    totals = selected["weekly_totals"]
    capacity = report_dict["instance"]["capacity"]
    if report_dict["scenario"] == 2:
        capacity = selected["capacity_hat"]
    top = max(max(totals), capacity) * 1.1 or 1.0
    margin = 40
    plot_w, plot_h = width - 2 * margin, height - 2 * margin
    bar_w = plot_w / max(len(totals), 1)
    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" '
        f'viewBox="0 0 {width} {height}">',
        f'<rect width="{width}" height="{height}" fill="white"/>',
    ]
    for i, total in enumerate(totals):
        bar_h = plot_h * total / top
        x = margin + i * bar_w
        y = height - margin - bar_h
        parts.append(
            f'<rect x="{x:.2f}" y="{y:.2f}" width="{bar_w * 0.85:.2f}" '
            f'height="{bar_h:.2f}" fill="#4d8f3a"/>'
        )
    cap_y = height - margin - plot_h * capacity / top
    parts.append(
        f'<line x1="{margin}" y1="{cap_y:.2f}" x2="{width - margin}" y2="{cap_y:.2f}" '
        f'stroke="#c0392b" stroke-width="2" stroke-dasharray="6,3"/>'
    )
    parts.append(
        f'<text x="{margin}" y="{cap_y - 6:.2f}" font-size="12" fill="#c0392b">'
        f'capacity {capacity}</text>'
    )
    parts.append(
        f'<text x="{margin}" y="{height - 8}" font-size="12" fill="#333">'
        f'weeks 1..{len(totals)} from first harvest week</text>'
    )
    parts.append("</svg>")
    Path(path).write_text("\n".join(parts) + "\n")


def emit_strategy_outputs(out_dir, report_dict: dict) -> list[Path]:
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    written = [out / "report.json"]
    write_report_json(written[0], report_dict)
    written.extend(write_front_csvs(out, report_dict))
    schedule_path = out / "schedule_final.csv"
    write_schedule_csv(schedule_path, report_dict)
    written.append(schedule_path)
    weekly_path = out / "weekly_harvest.csv"
    write_weekly_csv(weekly_path, report_dict)
    written.append(weekly_path)
    svg_path = out / "weekly_harvest.svg"
    write_weekly_svg(svg_path, report_dict)
    written.append(svg_path)
    return written

"""Operator command line: synth, ingest, simulate, report, serve, client.

The batch commands read and write the documented CSV/NDJSON artifacts; the
``client`` group is a thin HTTP client for a running service instance.
Exit codes: 0 success, 1 runtime failure, 2 usage errors (including a
malformed input header).
"""

from __future__ import annotations

import json
import sys
from datetime import date, datetime
from decimal import Decimal
from pathlib import Path

import click

from . import engine, ingest, metrics, simulator, synth
from .core import DateWindow


def _day(value: str) -> date:
    return date.fromisoformat(value)


def _die_usage(message: str) -> None:
    click.echo(f"error: {message}", err=True)
    sys.exit(2)


@click.group()
def main() -> None:
    """Level-loaded elective surgery scheduling toolkit."""


# --------------------------------------------------------------------------
# synth
# --------------------------------------------------------------------------


@main.command("synth")
@click.option("--out-dir", type=click.Path(path_type=Path), required=True)
@click.option("--start", default="2019-01-01", show_default=True, help="First day of the horizon.")
@click.option("--horizon-days", default=365, show_default=True)
@click.option(
    "--unit-rate",
    "unit_rates",
    multiple=True,
    default=("PICUs=2.0", "PCUs=4.0"),
    show_default=True,
    help="UNIT=RATE expected elective inpatients per calendar day; repeatable.",
)
@click.option("--outpatient-rate", default=1.0, show_default=True)
@click.option("--medical-rate", default=0.5, show_default=True)
@click.option("--lead-mean-days", default=10.0, show_default=True)
@click.option("--lead-max-days", default=45, show_default=True)
@click.option(
    "--los",
    "los_params",
    multiple=True,
    default=("PICUs=0.8,0.5", "PCUs=0.6,0.5"),
    show_default=True,
    help="UNIT=MU,SIGMA lognormal stay length in days; repeatable.",
)
@click.option("--duration-mu", default=0.5, show_default=True, help="Lognormal mu of surgery hours.")
@click.option("--duration-sigma", default=0.35, show_default=True)
@click.option("--surgeons", default=14, show_default=True)
@click.option("--block-days", default=2, show_default=True, help="Weekly block days per surgeon.")
@click.option("--block-hours", default=7.0, show_default=True)
@click.option("--seed", default=0, show_default=True)
def cmd_synth(
    out_dir: Path,
    start: str,
    horizon_days: int,
    unit_rates: tuple[str, ...],
    outpatient_rate: float,
    medical_rate: float,
    lead_mean_days: float,
    lead_max_days: int,
    los_params: tuple[str, ...],
    duration_mu: float,
    duration_sigma: float,
    surgeons: int,
    block_days: int,
    block_hours: float,
    seed: int,
) -> None:
    """Generate a census/procedure/availability CSV triple."""
    try:
        rates = {name: float(rate) for name, rate in (item.split("=") for item in unit_rates)}
        los = {
            name: tuple(float(x) for x in params.split(","))
            for name, params in (item.split("=") for item in los_params)
        }
    except ValueError:
        _die_usage("expected UNIT=RATE and UNIT=MU,SIGMA forms")
        return
    config = synth.SynthConfig(
        start=_day(start),
        horizon_days=horizon_days,
        unit_rates=rates,
        outpatient_rate=outpatient_rate,
        medical_rate=medical_rate,
        lead_mean_days=lead_mean_days,
        lead_max_days=lead_max_days,
        los_params=los,  # type: ignore[arg-type]
        duration_params=(duration_mu, duration_sigma),
        surgeon_count=surgeons,
        block_days_per_surgeon=block_days,
        block_hours=block_hours,
        seed=seed,
    )
    paths = synth.write_csvs(synth.generate(config), out_dir)
    for name, path in paths.items():
        click.echo(f"{name}: {path}")


# --------------------------------------------------------------------------
# ingest
# --------------------------------------------------------------------------


@main.command("ingest")
@click.argument("census_csv", type=click.Path(exists=True, path_type=Path))
@click.argument("procedure_csv", type=click.Path(exists=True, path_type=Path))
@click.argument("availability_csv", type=click.Path(exists=True, path_type=Path), required=False)
@click.option("--out-dir", type=click.Path(path_type=Path), required=True)
@click.option("--sim-start", required=True, help="First day of the simulation horizon.")
@click.option("--warmup-days", default=ingest.DEFAULT_WARMUP_DAYS, show_default=True)
@click.option(
    "--scope",
    default=",".join(sorted(ingest.DEFAULT_SCOPE_UNITS)),
    show_default=True,
    help="Comma-separated census units to keep.",
)
@click.option("--alpha", default="1", show_default=True, help="Availability-window scale factor.")
@click.option("--threshold-hours", default="3.0", show_default=True,
              help="Inferred availability: case-hours threshold.")
@click.option("--block-hours", default="7.0", show_default=True,
              help="Inferred availability: assumed block size.")
def cmd_ingest(
    census_csv: Path,
    procedure_csv: Path,
    availability_csv: Path | None,
    out_dir: Path,
    sim_start: str,
    warmup_days: int,
    scope: str,
    alpha: str,
    threshold_hours: str,
    block_hours: str,
) -> None:
    """Parse and clean the input tables into profiles plus reports."""
    from datetime import timedelta

    sim_start_day = _day(sim_start)
    warmup_start = sim_start_day - timedelta(days=warmup_days)
    try:
        parsed = ingest.parse_tables(census_csv, procedure_csv, availability_csv)
    except ingest.MalformedHeader as exc:
        _die_usage(str(exc))
        return
    profiles, report = ingest.build_profiles(
        parsed.census,
        parsed.procedures,
        warmup_start,
        sim_start_day,
        scope_units=frozenset(scope.split(",")),
        alpha=Decimal(alpha),
    )
    report.rejected_rows = len(parsed.rejects)

    out_dir.mkdir(parents=True, exist_ok=True)
    ingest.write_profiles(out_dir / "profiles.ndjson", profiles)
    with open(out_dir / "cleaning_report.json", "w", encoding="utf-8") as fh:
        json.dump(report.to_json_dict(), fh, indent=2)
    with open(out_dir / "rejected_rows.json", "w", encoding="utf-8") as fh:
        json.dump(
            [{"table": r.table, "row": r.row_number, "reason": r.reason} for r in parsed.rejects],
            fh,
            indent=2,
        )
    if parsed.availability is None:
        inferred = ingest.infer_surgeon_availability(
            parsed.procedures,
            threshold_hours=Decimal(threshold_hours),
            block_hours=Decimal(block_hours),
        )
        ingest.write_availability_csv(out_dir / "availability_inferred.csv", inferred)
        click.echo(f"availability inferred: {out_dir / 'availability_inferred.csv'}")
    click.echo(f"profiles: {len(profiles)}  excluded: {report.excluded_total()}  "
               f"rejected rows: {report.rejected_rows}")


# --------------------------------------------------------------------------
# simulate
# --------------------------------------------------------------------------


@main.command("simulate")
@click.option("--profiles", "profiles_path", type=click.Path(exists=True, path_type=Path),
              required=True)
@click.option("--availability", "availability_path", type=click.Path(exists=True, path_type=Path),
              required=True)
@click.option("--out-dir", type=click.Path(path_type=Path), required=True)
@click.option("--mode", type=click.Choice(["historical", "beds"]), default="historical",
              show_default=True)
@click.option("--beds-start", default=None, help="First request day handled by the scheduler.")
@click.option("--units", default="PICUs,PCUs", show_default=True,
              help="Comma-separated units the scheduler levels.")
@click.option("--alpha", default="1", show_default=True)
@click.option("--seed", default=0, show_default=True)
@click.option("--los-perturbation", default=0.0, show_default=True,
              help="Bounded-uniform stay-length noise fraction; 0 disables.")
@click.option("--consume-historical-hours/--no-consume-historical-hours", default=True,
              show_default=True)
def cmd_simulate(
    profiles_path: Path,
    availability_path: Path,
    out_dir: Path,
    mode: str,
    beds_start: str | None,
    units: str,
    alpha: str,
    seed: int,
    los_perturbation: float,
    consume_historical_hours: bool,
) -> None:
    """Run the patient-flow simulation and write its artifacts."""
    profiles = ingest.read_profiles(profiles_path)
    rejects: list = []
    availability = ingest.parse_availability_csv(availability_path, rejects)
    if rejects:
        _die_usage(f"availability file has {len(rejects)} bad rows")
    if mode == "beds" and beds_start is None:
        _die_usage("--beds-start is required with --mode beds")
    config = simulator.SimConfig(
        scheduler_mode=mode,
        beds_start_date=_day(beds_start) if beds_start else None,
        beds_units=frozenset(units.split(",")) if mode == "beds" else frozenset(),
        alpha=Decimal(alpha),
        rng_seed=seed,
        los_perturbation=los_perturbation,
        consume_hours_for_historical=consume_historical_hours,
    )
    result = simulator.run(profiles, availability, config)
    out_dir.mkdir(parents=True, exist_ok=True)
    simulator.write_events(out_dir / "events.ndjson", result.events)
    simulator.write_records_csv(out_dir / "sim_records.csv", result.records)
    with open(out_dir / "sim_summary.json", "w", encoding="utf-8") as fh:
        json.dump(
            {
                "mode": mode,
                "patients": len(result.records),
                "rescheduled": sum(1 for r in result.records if r.rescheduled),
                "fallback_no_feasible_day": result.fallback_no_feasible_day,
                "skipped_empty_window": result.skipped_empty_window,
                "seed": seed,
            },
            fh,
            indent=2,
        )
    click.echo(f"events: {out_dir / 'events.ndjson'}")
    click.echo(f"records: {out_dir / 'sim_records.csv'}")


# --------------------------------------------------------------------------
# report
# --------------------------------------------------------------------------


def _series_for_period(rows, unit: str, period: DateWindow, weekdays_only: bool):
    records = [
        metrics.AdmissionRecord(day=r.simulated_day, unit=r.unit, elective=True) for r in rows
    ]
    series = metrics.daily_admissions(records, unit, period)
    return series.weekdays_only() if weekdays_only else series


@main.command("report")
@click.option("--records", "records_path", type=click.Path(exists=True, path_type=Path),
              required=True)
@click.option("--unit", required=True)
@click.option("--periods", required=True,
              help="Comma-separated START:END day ranges; two ranges compare before/after.")
@click.option("--weekdays", is_flag=True, help="Add per-weekday statistics.")
@click.option("--weekdays-only", is_flag=True, help="Drop weekends from the base series.")
@click.option("--bootstrap", "bootstrap_spec", default=None,
              help="DELTA,M,SEED for the one-sided ratio-drop test across two periods.")
@click.option("--change-mode", type=click.Choice(["relative", "absolute"]), default="relative",
              show_default=True)
@click.option("--outliers", default=None, help="LO,HI band for the outlier-day count.")
@click.option("--hist-bin-width", default=1, show_default=True)
@click.option("--include-zero-delta", is_flag=True,
              help="Count never-moved patients in the reschedule histogram.")
@click.option("--out", "out_path", type=click.Path(path_type=Path), required=True)
@click.option("--csv", "csv_path", type=click.Path(path_type=Path), default=None)
@click.option("--plots", "plots_dir", type=click.Path(path_type=Path), default=None)
def cmd_report(
    records_path: Path,
    unit: str,
    periods: str,
    weekdays: bool,
    weekdays_only: bool,
    bootstrap_spec: str | None,
    change_mode: str,
    outliers: str | None,
    hist_bin_width: int,
    include_zero_delta: bool,
    out_path: Path,
    csv_path: Path | None,
    plots_dir: Path | None,
) -> None:
    """Summarize simulated (or historical) admission records."""
    rows = simulator.read_records_csv(records_path)
    try:
        windows = [
            DateWindow(_day(a), _day(b))
            for a, b in (p.split(":") for p in periods.split(","))
        ]
    except ValueError:
        _die_usage("periods must be START:END[,START:END...]")
        return

    labels = ["before", "after"] if len(windows) == 2 else [
        f"period_{i + 1}" for i in range(len(windows))
    ]
    report: dict = {"unit": unit, "weekdays_only": weekdays_only, "periods": []}
    series_by_label = {}
    for label, window in zip(labels, windows):
        series = _series_for_period(rows, unit, window, weekdays_only)
        series_by_label[label] = series
        entry = {
            "label": label,
            "start": window.start.isoformat(),
            "end": window.end.isoformat(),
            "stats": metrics.summarize(series).to_json_dict(),
        }
        if outliers:
            lo, hi = (int(x) for x in outliers.split(","))
            entry["outlier_days"] = metrics.count_outlier_days(series, lo, hi)
        if weekdays:
            entry["by_weekday"] = {
                name: (metrics.summarize(sub).to_json_dict() if len(sub) else None)
                for name, sub in metrics.weekday_split(series).items()
            }
        report["periods"].append(entry)

    if bootstrap_spec:
        if len(windows) != 2:
            _die_usage("--bootstrap needs exactly two periods")
        delta_s, m_s, seed_s = bootstrap_spec.split(",")
        delta, m, seed = float(delta_s), int(m_s), int(seed_s)
        before, after = series_by_label["before"], series_by_label["after"]
        report["bootstrap"] = metrics.bootstrap_test(
            before, after, delta=delta, m=m, seed=seed, change_mode=change_mode
        ).to_json_dict()
        if weekdays:
            per_weekday = {}
            before_split = metrics.weekday_split(before)
            after_split = metrics.weekday_split(after)
            for name in metrics.WEEKDAY_NAMES:
                if len(before_split[name]) == 0 or len(after_split[name]) == 0:
                    per_weekday[name] = None
                    continue
                per_weekday[name] = metrics.bootstrap_test(
                    before_split[name], after_split[name],
                    delta=delta, m=m, seed=seed, change_mode=change_mode,
                ).to_json_dict()
            report["bootstrap_by_weekday"] = per_weekday

    moved = [r for r in rows if unit == r.unit]
    report["reschedule_histogram"] = metrics.reschedule_histogram(
        moved, bin_width_days=hist_bin_width, include_unrescheduled=include_zero_delta
    ).to_json_dict()

    out_path.parent.mkdir(parents=True, exist_ok=True)
    with open(out_path, "w", encoding="utf-8") as fh:
        json.dump(report, fh, indent=2)
    click.echo(f"report: {out_path}")

    if csv_path:
        import csv as csv_module

        with open(csv_path, "w", newline="", encoding="utf-8") as fh:
            writer = csv_module.writer(fh)
            writer.writerow(
                ["label", "start", "end", "mean", "coefficient_of_variation",
                 "median", "q90", "qmra", "n_days", "outlier_days"]
            )
            for entry in report["periods"]:
                stats = entry["stats"]
                writer.writerow(
                    [entry["label"], entry["start"], entry["end"], stats["mean"],
                     stats["coefficient_of_variation"], stats["median"], stats["q90"],
                     stats["qmra"], stats["n_days"], entry.get("outlier_days", "")]
                )
        click.echo(f"table: {csv_path}")

    if plots_dir:
        _write_plots(Path(plots_dir), unit, series_by_label, report["reschedule_histogram"])
        click.echo(f"plots: {plots_dir}")


def _write_plots(plots_dir: Path, unit: str, series_by_label: dict, histogram: dict) -> None:
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    plots_dir.mkdir(parents=True, exist_ok=True)
    fig, ax = plt.subplots(figsize=(10, 4))
    for label, series in series_by_label.items():
        ax.plot(series.days, series.counts, label=label, linewidth=0.8)
    ax.set_title(f"Daily elective admissions, {unit}")
    ax.set_ylabel("admissions")
    ax.legend()
    fig.autofmt_xdate()
    fig.savefig(plots_dir / "daily_admissions.svg", bbox_inches="tight")
    plt.close(fig)

    fig, ax = plt.subplots(figsize=(6, 4))
    bins = histogram["bins"]
    ax.bar([b["start"] for b in bins], [b["count"] for b in bins],
           width=histogram["bin_width"] * 0.9)
    ax.set_title(f"Reschedule shift (days), {unit}")
    ax.set_xlabel("simulated day minus recorded day")
    ax.set_ylabel("patients")
    fig.savefig(plots_dir / "reschedule_histogram.svg", bbox_inches="tight")
    plt.close(fig)


# --------------------------------------------------------------------------
# serve
# --------------------------------------------------------------------------


@main.command("serve")
@click.option("--host", default="127.0.0.1", show_default=True)
@click.option("--port", default=8000, show_default=True)
@click.option("--journal", type=click.Path(path_type=Path), required=True)
@click.option("--snapshot", type=click.Path(path_type=Path), required=True)
@click.option("--availability", "availability_path", type=click.Path(exists=True, path_type=Path),
              default=None, help="Seed surgeon hours from this CSV on first boot.")
@click.option("--load", "profiles_path", type=click.Path(exists=True, path_type=Path),
              default=None, help="Seed admission counts from these profiles on first boot.")
@click.option("--thresholds", default="2,4,6", show_default=True)
@click.option("--top-n", default=3, show_default=True)
@click.option("--snapshot-every", default=1000, show_default=True)
@click.option("--static-dir", type=click.Path(path_type=Path), default=None,
              help="Serve this directory (the heatmap client bundle) at /.")
def cmd_serve(
    host: str,
    port: int,
    journal: Path,
    snapshot: Path,
    availability_path: Path | None,
    profiles_path: Path | None,
    thresholds: str,
    top_n: int,
    snapshot_every: int,
    static_dir: Path | None,
) -> None:
    """Run the live scheduling service."""
    import uvicorn

    from .service import ScheduleStore, ServiceConfig, create_app

    config = ServiceConfig(
        journal_path=journal,
        snapshot_path=snapshot,
        host=host,
        port=port,
        thresholds=tuple(int(x) for x in thresholds.split(",")),
        default_top_n=top_n,
        snapshot_every=snapshot_every,
        static_dir=static_dir,
    )
    initial = None
    if availability_path or profiles_path:
        rejects: list = []
        availability = (
            ingest.parse_availability_csv(availability_path, rejects) if availability_path else ()
        )
        profiles = ingest.read_profiles(profiles_path) if profiles_path else ()
        initial = ingest.initial_schedule_state(profiles, availability)
    app = create_app(config, ScheduleStore(config, initial_state=initial))
    uvicorn.run(app, host=host, port=port, log_level="info")


# --------------------------------------------------------------------------
# client
# --------------------------------------------------------------------------


@main.group("client")
@click.option("--server", default="http://127.0.0.1:8000", show_default=True)
@click.pass_context
def client(ctx: click.Context, server: str) -> None:
    """Talk to a running service over HTTP."""
    ctx.obj = server.rstrip("/")


def _print_response(resp) -> None:
    try:
        payload = resp.json()
    except ValueError:
        payload = resp.text
    click.echo(json.dumps(payload, indent=2))
    if resp.status_code >= 400:
        sys.exit(1)


@client.command("heatmap")
@click.option("--unit", required=True)
@click.option("--surgeon", required=True)
@click.option("--start", default=None)
@click.option("--end", default=None)
@click.option("--reference", default=None)
@click.pass_obj
def client_heatmap(server: str, unit: str, surgeon: str, start: str | None,
                   end: str | None, reference: str | None) -> None:
    import httpx

    params = {"unit": unit, "surgeon": surgeon}
    for key, value in (("start", start), ("end", end), ("reference", reference)):
        if value:
            params[key] = value
    _print_response(httpx.get(f"{server}/heatmap", params=params))


def _case_payload(patient, surgeon, duration, window_start, window_end, unit):
    window = {"start": window_start, "end": window_end}
    return {
        "patient_id": patient,
        "surgeon_id": surgeon,
        "duration_hours": duration,
        "clinical_window": window,
        "patient_window": window,
        "post_op_unit": unit,
    }


@client.command("recommend")
@click.option("--patient", required=True)
@click.option("--surgeon", required=True)
@click.option("--duration", type=float, required=True)
@click.option("--window-start", required=True)
@click.option("--window-end", required=True)
@click.option("--unit", required=True)
@click.option("-n", "top_n", default=3, show_default=True)
@click.pass_obj
def client_recommend(server: str, patient: str, surgeon: str, duration: float,
                     window_start: str, window_end: str, unit: str, top_n: int) -> None:
    import httpx

    payload = _case_payload(patient, surgeon, duration, window_start, window_end, unit)
    payload["n"] = top_n
    _print_response(httpx.post(f"{server}/recommend", json=payload))


@client.command("book")
@click.option("--patient", required=True)
@click.option("--surgeon", required=True)
@click.option("--duration", type=float, required=True)
@click.option("--window-start", required=True)
@click.option("--window-end", required=True)
@click.option("--unit", required=True)
@click.option("--day", required=True)
@click.pass_obj
def client_book(server: str, patient: str, surgeon: str, duration: float,
                window_start: str, window_end: str, unit: str, day: str) -> None:
    import httpx

    payload = _case_payload(patient, surgeon, duration, window_start, window_end, unit)
    payload["day"] = day
    _print_response(httpx.post(f"{server}/book", json=payload))


@client.command("state")
@click.pass_obj
def client_state(server: str) -> None:
    import httpx

    _print_response(httpx.get(f"{server}/state"))


if __name__ == "__main__":
    main()

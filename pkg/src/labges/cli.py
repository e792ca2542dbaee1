"""`ges` command line: validate, import, compute and serve, fully offline.

Exit codes are a stable contract: 0 success, 1 domain error (invalid
inventory, missing factor, zero imported rows), 2 usage or environment
error (missing files, bad config, busy port).
"""

from __future__ import annotations

import dataclasses
import json
import os
import sys
from pathlib import Path

import click

from .engine import EngineConfig, InvalidInventory, MissingFactor, compute_inventory, result_to_json
from .factors import FactorError, load_bundled_factor_set, load_factor_set
from .gazetteer import GazetteerError, load_bundled_gazetteer, load_gazetteer
from .geodesy import RouteCorrection
from .ingestion import EncodingError, parse_commute_csv, parse_travel_tsv, normalize_trips
from .inventory import (
    InventoryFormatError,
    inventory_from_json,
    inventory_to_json,
    merge_commute_responses,
    merge_trips,
    validate_inventory,
)
from .reporting import build_report_bundle, report_filename
from .service import ConfigError, ServiceConfig, create_app


class _Env:
    """Lazily resolved shared resources for the subcommands."""

    def __init__(self, factors: str | None, gazetteer: str | None, locale: str, config: str | None):
        self.locale = locale
        self.factors_path = factors
        self.gazetteer_path = gazetteer
        self.config_path = config
        self.route_correction = RouteCorrection()
        if config:
            try:
                data = json.loads(Path(config).read_text(encoding="utf-8"))
            except (OSError, ValueError) as exc:
                raise click.UsageError(f"cannot read config {config}: {exc}")
            self.factors_path = self.factors_path or data.get("factors")
            self.gazetteer_path = self.gazetteer_path or data.get("gazetteer")
            if locale == "en" and "locale" in data:
                self.locale = str(data["locale"])
            self.route_correction = RouteCorrection.from_dict(data.get("route_correction", {}))

    def factor_set(self):
        try:
            if self.factors_path:
                return load_factor_set(Path(self.factors_path).read_bytes())
            return load_bundled_factor_set()
        except OSError as exc:
            raise click.UsageError(f"cannot read factor file: {exc}")
        except FactorError as exc:
            raise click.UsageError(f"bad factor file: {exc}")

    def gazetteer(self):
        try:
            if self.gazetteer_path:
                return load_gazetteer(Path(self.gazetteer_path).read_bytes())
            return load_bundled_gazetteer()
        except OSError as exc:
            raise click.UsageError(f"cannot read gazetteer file: {exc}")
        except GazetteerError as exc:
            raise click.UsageError(f"bad gazetteer file: {exc}")

    def engine_config(self) -> EngineConfig:
        return EngineConfig(route_correction=self.route_correction)


def _read_inventory(path: str):
    if path == "-":
        document = sys.stdin.buffer.read()
    else:
        file = Path(path)
        if not file.is_file():
            raise click.UsageError(f"inventory file not found: {path}")
        document = file.read_bytes()
    try:
        return inventory_from_json(document)
    except InventoryFormatError as exc:
        click.echo(f"error: {exc}", err=True)
        sys.exit(1)


def _read_data_file(path: str) -> bytes:
    if path == "-":
        return sys.stdin.buffer.read()
    file = Path(path)
    if not file.is_file():
        raise click.UsageError(f"data file not found: {path}")
    return file.read_bytes()


@click.group()
@click.option("--factors", type=str, default=None, help="Factor file path (default: bundled sample set).")
@click.option("--gazetteer", type=str, default=None, help="Gazetteer TSV path (default: bundled extract).")
@click.option("--locale", type=click.Choice(["fr", "en"]), default="en", show_default=True)
@click.option("--config", type=str, default=None, help="JSON config file (factors, gazetteer, locale, route_correction).")
@click.pass_context
def main(ctx: click.Context, factors: str | None, gazetteer: str | None, locale: str, config: str | None) -> None:
    """Greenhouse-gas inventory toolkit for research labs."""
    ctx.obj = _Env(factors, gazetteer, locale, config)


@main.command()
@click.argument("inventory_file")
@click.pass_obj
def validate(env: _Env, inventory_file: str) -> None:
    """Check an inventory document against every invariant."""
    inv = _read_inventory(inventory_file)
    findings = validate_inventory(inv)
    if findings:
        for finding in findings:
            click.echo(str(finding), err=True)
        sys.exit(1)
    click.echo("ok")


def _run_import(env: _Env, inventory_file: str, merge, imported: int, issues) -> None:
    for issue in issues:
        click.echo(str(issue), err=True)
    if imported == 0:
        click.echo("error: no rows could be imported", err=True)
        sys.exit(1)
    Path(inventory_file).write_bytes(inventory_to_json(merge))
    errors = sum(1 for i in issues if i.severity == "error")
    click.echo(f"imported {imported} rows ({errors} rows in error)")


@main.command("import-travel")
@click.argument("inventory_file")
@click.argument("travel_tsv")
@click.pass_obj
def import_travel(env: _Env, inventory_file: str, travel_tsv: str) -> None:
    """Import a professional-travel TSV into the inventory (in place)."""
    inv = _read_inventory(inventory_file)
    document = _read_data_file(travel_tsv)
    try:
        rows, parse_issues = parse_travel_tsv(document)
    except EncodingError as exc:
        click.echo(f"error: {exc}", err=True)
        sys.exit(1)
    trips, normalize_issues = normalize_trips(rows, env.gazetteer(), env.route_correction)
    merged = merge_trips(inv, trips)
    imported = sum(len(t.legs) for t in trips)
    _run_import(env, inventory_file, merged, imported, parse_issues + normalize_issues)


@main.command("import-commutes")
@click.argument("inventory_file")
@click.argument("commutes_csv")
@click.pass_obj
def import_commutes(env: _Env, inventory_file: str, commutes_csv: str) -> None:
    """Import a commute-survey CSV into the inventory (in place)."""
    inv = _read_inventory(inventory_file)
    document = _read_data_file(commutes_csv)
    try:
        responses, issues = parse_commute_csv(document)
    except EncodingError as exc:
        click.echo(f"error: {exc}", err=True)
        sys.exit(1)
    merged = merge_commute_responses(inv, responses)
    _run_import(env, inventory_file, merged, len(responses), issues)


@main.command()
@click.argument("inventory_file")
@click.option("--out", "out_dir", type=str, default=".", show_default=True, help="Output directory.")
@click.pass_obj
def compute(env: _Env, inventory_file: str, out_dir: str) -> None:
    """Compute the footprint and write result JSON, regulatory CSV and charts."""
    inv = _read_inventory(inventory_file)
    factor_set = env.factor_set()
    try:
        result = compute_inventory(inv, factor_set, env.engine_config())
    except InvalidInventory as exc:
        for finding in exc.findings:
            click.echo(str(finding), err=True)
        sys.exit(1)
    except MissingFactor as exc:
        click.echo(f"error: {exc}", err=True)
        sys.exit(1)

    for warning in result.methodology.get("warnings", []):
        click.echo(f"warning: {warning}", err=True)

    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    bundle = build_report_bundle(result, env.locale)
    lab, year = result.lab_name, result.year
    written = []

    def emit(report: str, ext: str, payload: bytes) -> None:
        path = out / report_filename(lab, year, report, ext)
        path.write_bytes(payload)
        written.append(path)

    emit("result", "json", result_to_json(result))
    emit("regulatory", "csv", bundle.regulatory_csv)
    for chart_name, svg in bundle.charts.items():
        emit(chart_name, "svg", svg)

    click.echo(bundle.synthetic_text, nl=False)
    for path in written:
        click.echo(f"wrote {path}", err=True)


@main.command()
@click.option("--config", "config_file", type=str, default=None, help="Service config JSON.")
@click.option("--host", type=str, default=None, help="Bind address override.")
@click.option("--port", type=int, default=None, help="Port override.")
@click.pass_obj
def serve(env: _Env, config_file: str | None, host: str | None, port: int | None) -> None:
    """Run the HTTP service."""
    import uvicorn

    try:
        config = ServiceConfig.from_file(config_file) if config_file else ServiceConfig().with_env(os.environ)
        if env.factors_path and not config.factors_path:
            config = dataclasses.replace(config, factors_path=env.factors_path)
        if env.gazetteer_path and not config.gazetteer_path:
            config = dataclasses.replace(config, gazetteer_path=env.gazetteer_path)
        if host:
            config = dataclasses.replace(config, host=host)
        if port:
            config = dataclasses.replace(config, port=port)
        config.validate_paths()
        app = create_app(config)
    except (ConfigError, FactorError, GazetteerError, ValueError) as exc:
        click.echo(f"error: {exc}", err=True)
        sys.exit(2)
    import socket

    try:
        probe = socket.socket(socket.AF_INET, socket.SOCK_STREAM)
        probe.setsockopt(socket.SOL_SOCKET, socket.SO_REUSEADDR, 1)
        probe.bind((config.host, config.port))
        probe.close()
    except OSError as exc:
        click.echo(f"error: cannot bind {config.host}:{config.port}: {exc}", err=True)
        sys.exit(2)
    try:
        uvicorn.run(app, host=config.host, port=config.port, log_level="warning")
    except OSError as exc:
        click.echo(f"error: cannot bind {config.host}:{config.port}: {exc}", err=True)
        sys.exit(2)


if __name__ == "__main__":
    main()

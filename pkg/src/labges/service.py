"""HTTP API: inventory CRUD, file uploads, computation, reports, accounts.

Anonymous inventories are addressed by unguessable 128-bit capability ids;
claiming one into an account restricts further access to that account's
bearer tokens. Per-inventory mutations are serialized through in-process
locks, and computed results are cached as canonical bytes so repeated
computes (and restarts) return byte-identical documents.
"""

from __future__ import annotations

import datetime as _dt
import json
import os
import secrets
import threading
from dataclasses import dataclass, field, replace
from hashlib import pbkdf2_hmac
from pathlib import Path
from typing import Mapping

from fastapi import Body, FastAPI, File, HTTPException, Request, Response, UploadFile
from fastapi.responses import JSONResponse

from . import __version__
from .engine import (
    EngineConfig,
    InvalidInventory,
    MissingFactor,
    compute_inventory,
    result_from_dict,
    result_to_json,
)
from .factors import FactorSet, load_bundled_factor_set, load_factor_set
from .gazetteer import Gazetteer, load_bundled_gazetteer, load_gazetteer
from .geodesy import RouteCorrection
from .ingestion import parse_commute_csv, parse_travel_tsv, normalize_trips
from .inventory import (
    Inventory,
    InventoryFormatError,
    inventory_from_dict,
    inventory_to_dict,
    merge_commute_responses,
    merge_trips,
    validate_inventory,
)
from .reporting import render_bar_svg, render_pie_svg, render_regulatory_csv, render_synthetic, EmptyChart

_NS_INVENTORY = "inventory"
_NS_RESULT = "result"
_NS_RESULT_META = "result_meta"
_NS_ACCOUNT = "account"
_NS_LOGIN = "login"
_NS_SESSION = "session"


class ConfigError(ValueError):
    """The service configuration is unusable (bad JSON, unresolvable path)."""


@dataclass(frozen=True)
class ServiceConfig:
    """Service settings; file values can be overridden by GES_* env vars."""

    host: str = "127.0.0.1"
    port: int = 8571
    data_dir: str = "./ges-data"
    factors_path: str | None = None
    gazetteer_path: str | None = None
    body_limit_bytes: int = 10 * 1024 * 1024
    locale: str = "en"
    route_correction: RouteCorrection = field(default_factory=RouteCorrection)
    grid_zone: str = "france"
    heat_zone: str = "france"

    @classmethod
    def from_file(cls, path: str | Path) -> "ServiceConfig":
        try:
            raw = Path(path).read_bytes()
        except OSError as exc:
            raise ConfigError(f"cannot read config file {path}: {exc}") from None
        try:
            data = json.loads(raw.decode("utf-8"))
        except (UnicodeDecodeError, json.JSONDecodeError) as exc:
            raise ConfigError(f"config file {path} is not valid JSON: {exc}") from None
        if not isinstance(data, dict):
            raise ConfigError("config top level must be an object")
        service = data.get("service", {})
        if not isinstance(service, dict):
            raise ConfigError("'service' section must be an object")
        route = RouteCorrection.from_dict(data.get("route_correction", {}))
        cfg = cls(
            host=str(service.get("host", cls.host)),
            port=int(service.get("port", cls.port)),
            data_dir=str(service.get("data_dir", cls.data_dir)),
            factors_path=data.get("factors"),
            gazetteer_path=data.get("gazetteer"),
            body_limit_bytes=int(service.get("body_limit_bytes", cls.body_limit_bytes)),
            locale=str(data.get("locale", cls.locale)),
            route_correction=route,
            grid_zone=str(data.get("grid_zone", cls.grid_zone)),
            heat_zone=str(data.get("heat_zone", cls.heat_zone)),
        )
        return cfg.with_env(os.environ)

    def with_env(self, env: Mapping[str, str]) -> "ServiceConfig":
        updates: dict = {}
        if "GES_HOST" in env:
            updates["host"] = env["GES_HOST"]
        if "GES_PORT" in env:
            updates["port"] = int(env["GES_PORT"])
        if "GES_DATA_DIR" in env:
            updates["data_dir"] = env["GES_DATA_DIR"]
        if "GES_FACTORS" in env:
            updates["factors_path"] = env["GES_FACTORS"]
        if "GES_GAZETTEER" in env:
            updates["gazetteer_path"] = env["GES_GAZETTEER"]
        if "GES_BODY_LIMIT" in env:
            updates["body_limit_bytes"] = int(env["GES_BODY_LIMIT"])
        return replace(self, **updates) if updates else self

    def validate_paths(self) -> None:
        for label, path in (("factors", self.factors_path), ("gazetteer", self.gazetteer_path)):
            if path is not None and not Path(path).is_file():
                raise ConfigError(f"{label} file not found: {path}")


def _now() -> str:
    return _dt.datetime.now(_dt.timezone.utc).strftime("%Y-%m-%dT%H:%M:%SZ")


def _hash_password(password: str, salt: bytes) -> str:
    return pbkdf2_hmac("sha256", password.encode("utf-8"), salt, 200_000).hex()


class _Context:
    """Mutable application state shared by the endpoints."""

    def __init__(self, config: ServiceConfig):
        from .storage import KVStore

        config.validate_paths()
        self.config = config
        self.store = KVStore(Path(config.data_dir) / "ges.sqlite3")
        if config.factors_path:
            self.factor_set: FactorSet = load_factor_set(Path(config.factors_path).read_bytes())
        else:
            self.factor_set = load_bundled_factor_set()
        if config.gazetteer_path:
            self.gazetteer: Gazetteer = load_gazetteer(Path(config.gazetteer_path).read_bytes())
        else:
            self.gazetteer = load_bundled_gazetteer()
        self.engine_config = EngineConfig(
            route_correction=config.route_correction,
            grid_zone=config.grid_zone,
            heat_zone=config.heat_zone,
        )
        self._locks: dict[str, threading.Lock] = {}
        self._locks_guard = threading.Lock()

    def lock_for(self, inventory_id: str) -> threading.Lock:
        with self._locks_guard:
            return self._locks.setdefault(inventory_id, threading.Lock())


def _error(status: int, message: str, **extra) -> HTTPException:
    detail = {"error": message}
    detail.update(extra)
    return HTTPException(status_code=status, detail=detail)


def create_app(config: ServiceConfig | None = None) -> FastAPI:
    ctx = _Context(config or ServiceConfig())
    app = FastAPI(title="labges", version=__version__, docs_url=None, redoc_url=None)
    app.state.ctx = ctx

    @app.middleware("http")
    async def body_size_guard(request: Request, call_next):
        length = request.headers.get("content-length")
        if length is not None:
            try:
                if int(length) > ctx.config.body_limit_bytes:
                    return JSONResponse(
                        status_code=413,
                        content={"error": f"body exceeds limit of {ctx.config.body_limit_bytes} bytes"},
                    )
            except ValueError:
                pass
        return await call_next(request)

    # -- helpers ------------------------------------------------------------

    def account_from_request(request: Request) -> str | None:
        header = request.headers.get("authorization")
        if header is None:
            return None
        parts = header.split(None, 1)
        if len(parts) != 2 or parts[0].lower() != "bearer":
            raise _error(401, "malformed Authorization header")
        account_id = ctx.store.get(_NS_SESSION, parts[1].strip())
        if account_id is None:
            raise _error(401, "invalid or expired token")
        return account_id.decode("utf-8")

    def load_stored(inventory_id: str) -> dict:
        raw = ctx.store.get(_NS_INVENTORY, inventory_id)
        if raw is None:
            raise _error(404, f"no inventory with id {inventory_id!r}")
        return json.loads(raw.decode("utf-8"))

    def authorize(stored: dict, request: Request) -> None:
        owner = stored.get("owner")
        if owner is None:
            return  # anonymous: the unguessable id is the capability
        account = account_from_request(request)
        if account is None:
            raise _error(401, "this inventory belongs to an account; provide a bearer token")
        if account != owner:
            raise _error(403, "this inventory belongs to another account")

    def save_stored(stored: dict, touch: bool = True) -> None:
        if touch:
            stored["updated_at"] = _now()
        ctx.store.put(_NS_INVENTORY, stored["id"], json.dumps(stored, sort_keys=True).encode("utf-8"))

    def invalidate_result(inventory_id: str) -> None:
        ctx.store.delete(_NS_RESULT, inventory_id)
        ctx.store.delete(_NS_RESULT_META, inventory_id)

    def parse_inventory_body(document: bytes) -> Inventory:
        try:
            inv = inventory_from_dict(json.loads(document.decode("utf-8")))
        except (UnicodeDecodeError, json.JSONDecodeError) as exc:
            raise _error(400, f"body is not valid JSON: {exc}")
        except InventoryFormatError as exc:
            raise _error(400, "inventory document is malformed", findings=[{"path": "", "message": str(exc)}])
        findings = validate_inventory(inv)
        if findings:
            raise _error(
                400,
                "inventory failed validation",
                findings=[{"path": f.path, "message": f.message} for f in findings],
            )
        return inv

    # -- health -------------------------------------------------------------

    @app.get("/api/health")
    def health() -> dict:
        return {
            "status": "ok",
            "version": __version__,
            "factor_set_version": ctx.factor_set.version,
        }

    # -- accounts and sessions ----------------------------------------------

    @app.post("/api/accounts", status_code=201)
    def create_account(payload: dict = Body(...)) -> dict:
        login = str(payload.get("login", "")).strip()
        password = str(payload.get("password", ""))
        lab_name = str(payload.get("lab_name", "")).strip()
        if not login or not password:
            raise _error(400, "login and password are required")
        if ctx.store.get(_NS_LOGIN, login) is not None:
            raise _error(409, f"login {login!r} is already taken")
        account_id = secrets.token_hex(16)
        salt = secrets.token_bytes(16)
        record = {
            "id": account_id,
            "login": login,
            "lab_name": lab_name,
            "salt": salt.hex(),
            "password_hash": _hash_password(password, salt),
            "created_at": _now(),
        }
        ctx.store.put(_NS_ACCOUNT, account_id, json.dumps(record, sort_keys=True).encode("utf-8"))
        ctx.store.put(_NS_LOGIN, login, account_id.encode("utf-8"))
        return {"account_id": account_id}

    @app.post("/api/sessions")
    def create_session(payload: dict = Body(...)) -> dict:
        login = str(payload.get("login", "")).strip()
        password = str(payload.get("password", ""))
        account_key = ctx.store.get(_NS_LOGIN, login)
        if account_key is None:
            raise _error(401, "unknown login or wrong password")
        account = json.loads(ctx.store.get(_NS_ACCOUNT, account_key.decode("utf-8")).decode("utf-8"))
        expected = account["password_hash"]
        computed = _hash_password(password, bytes.fromhex(account["salt"]))
        if not secrets.compare_digest(expected, computed):
            raise _error(401, "unknown login or wrong password")
        token = secrets.token_hex(16)
        ctx.store.put(_NS_SESSION, token, account["id"].encode("utf-8"))
        return {"token": token, "account_id": account["id"]}

    # -- inventory CRUD -----------------------------------------------------

    @app.post("/api/inventories", status_code=201)
    async def create_inventory(request: Request) -> dict:
        inv = parse_inventory_body(await request.body())
        owner = account_from_request(request)
        inventory_id = secrets.token_hex(16)
        stored = {
            "id": inventory_id,
            "owner": owner,
            "schema_version": inv.schema_version,
            "created_at": _now(),
            "updated_at": _now(),
            "inventory": inventory_to_dict(inv),
        }
        save_stored(stored, touch=False)
        return {"id": inventory_id}

    @app.get("/api/inventories")
    def list_inventories(request: Request) -> dict:
        account = account_from_request(request)
        if account is None:
            raise _error(401, "listing inventories requires a bearer token")
        labs: dict[str, list[dict]] = {}
        for key in ctx.store.keys(_NS_INVENTORY):
            stored = json.loads(ctx.store.get(_NS_INVENTORY, key).decode("utf-8"))
            if stored.get("owner") != account:
                continue
            lab = stored["inventory"]["lab"]["name"]
            labs.setdefault(lab, []).append(
                {
                    "id": stored["id"],
                    "year": stored["inventory"]["lab"]["year"],
                    "created_at": stored["created_at"],
                    "updated_at": stored["updated_at"],
                    "computed": ctx.store.get(_NS_RESULT, stored["id"]) is not None,
                }
            )
        return {
            "labs": [
                {"lab": lab, "inventories": sorted(entries, key=lambda e: (e["year"], e["id"]))}
                for lab, entries in sorted(labs.items())
            ]
        }

    @app.get("/api/inventories/{inventory_id}")
    def get_inventory(inventory_id: str, request: Request) -> dict:
        stored = load_stored(inventory_id)
        authorize(stored, request)
        return {
            "id": stored["id"],
            "owned": stored.get("owner") is not None,
            "created_at": stored["created_at"],
            "updated_at": stored["updated_at"],
            "inventory": stored["inventory"],
        }

    @app.put("/api/inventories/{inventory_id}")
    async def put_inventory(inventory_id: str, request: Request) -> dict:
        inv = parse_inventory_body(await request.body())
        with ctx.lock_for(inventory_id):
            stored = load_stored(inventory_id)
            authorize(stored, request)
            stored["inventory"] = inventory_to_dict(inv)
            save_stored(stored)
            invalidate_result(inventory_id)
        return {"id": inventory_id}

    @app.delete("/api/inventories/{inventory_id}", status_code=204)
    def delete_inventory(inventory_id: str, request: Request) -> Response:
        with ctx.lock_for(inventory_id):
            stored = load_stored(inventory_id)
            authorize(stored, request)
            ctx.store.delete(_NS_INVENTORY, inventory_id)
            invalidate_result(inventory_id)
        return Response(status_code=204)

    @app.post("/api/inventories/{inventory_id}/claim")
    def claim_inventory(inventory_id: str, request: Request) -> dict:
        account = account_from_request(request)
        if account is None:
            raise _error(401, "claiming requires a bearer token")
        with ctx.lock_for(inventory_id):
            stored = load_stored(inventory_id)
            owner = stored.get("owner")
            if owner is not None and owner != account:
                raise _error(403, "this inventory already belongs to another account")
            stored["owner"] = account
            save_stored(stored)
        return {"id": inventory_id, "owner_set": True}

    # -- uploads ------------------------------------------------------------

    def _apply_upload(inventory_id: str, request: Request, merge) -> dict:
        with ctx.lock_for(inventory_id):
            stored = load_stored(inventory_id)
            authorize(stored, request)
            inv = inventory_from_dict(stored["inventory"])
            new_inv, imported, issues = merge(inv)
            if imported == 0:
                raise _error(
                    422,
                    "no rows could be imported",
                    errors=[{"line": i.line, "message": i.message, "severity": i.severity} for i in issues],
                )
            stored["inventory"] = inventory_to_dict(new_inv)
            save_stored(stored)
            invalidate_result(inventory_id)
        return {
            "imported": imported,
            "errors": [{"line": i.line, "message": i.message, "severity": i.severity} for i in issues],
        }

    @app.post("/api/inventories/{inventory_id}/travel")
    def upload_travel(inventory_id: str, request: Request, file: UploadFile = File(...)) -> dict:
        document = file.file.read()

        def merge(inv: Inventory):
            rows, parse_issues = parse_travel_tsv(document)
            trips, normalize_issues = normalize_trips(rows, ctx.gazetteer, ctx.config.route_correction)
            merged = merge_trips(inv, trips)
            imported = sum(len(t.legs) for t in trips)
            return merged, imported, parse_issues + normalize_issues

        return _apply_upload(inventory_id, request, merge)

    @app.post("/api/inventories/{inventory_id}/commutes")
    def upload_commutes(inventory_id: str, request: Request, file: UploadFile = File(...)) -> dict:
        document = file.file.read()

        def merge(inv: Inventory):
            responses, issues = parse_commute_csv(document)
            return merge_commute_responses(inv, responses), len(responses), issues

        return _apply_upload(inventory_id, request, merge)

    # -- computation and reports ---------------------------------------------

    @app.post("/api/inventories/{inventory_id}/compute")
    def compute(inventory_id: str, request: Request, payload: dict | None = Body(default=None)) -> Response:
        override = None
        if payload:
            override = payload.get("electricity_use_phase_override")
            if override is not None:
                try:
                    override = float(override)
                except (TypeError, ValueError):
                    raise _error(400, "electricity_use_phase_override must be a number")
        with ctx.lock_for(inventory_id):
            stored = load_stored(inventory_id)
            authorize(stored, request)
            cached = ctx.store.get(_NS_RESULT, inventory_id)
            meta_raw = ctx.store.get(_NS_RESULT_META, inventory_id)
            if override is None and cached is not None and meta_raw is not None:
                meta = json.loads(meta_raw.decode("utf-8"))
                if meta.get("factor_set_version") == ctx.factor_set.version:
                    return Response(content=cached, media_type="application/json")
            inv = inventory_from_dict(stored["inventory"])
            try:
                result = compute_inventory(
                    inv, ctx.factor_set, ctx.engine_config, electricity_use_phase_override=override
                )
            except InvalidInventory as exc:
                raise _error(
                    400,
                    "inventory failed validation",
                    findings=[{"path": f.path, "message": f.message} for f in exc.findings],
                )
            except MissingFactor as exc:
                raise _error(409, str(exc), category=exc.category, selector=exc.selector)
            body = result_to_json(result)
            if override is None:
                ctx.store.put(_NS_RESULT, inventory_id, body)
                ctx.store.put(
                    _NS_RESULT_META,
                    inventory_id,
                    json.dumps({"factor_set_version": ctx.factor_set.version}).encode("utf-8"),
                )
        return Response(content=body, media_type="application/json")

    _REPORT_FORMATS = ("regulatory_csv", "synthetic_json", "synthetic_text", "pie_svg", "purpose_svg", "status_svg")

    @app.get("/api/inventories/{inventory_id}/report")
    def report(inventory_id: str, request: Request, format: str = "regulatory_csv", locale: str | None = None) -> Response:
        if format not in _REPORT_FORMATS:
            raise _error(400, f"unknown report format {format!r}; expected one of {list(_REPORT_FORMATS)}")
        loc = locale or ctx.config.locale
        if loc not in ("fr", "en"):
            raise _error(400, f"unknown locale {loc!r}; expected fr or en")
        stored = load_stored(inventory_id)
        authorize(stored, request)
        cached = ctx.store.get(_NS_RESULT, inventory_id)
        if cached is None:
            raise _error(409, "no computed result for this inventory; compute first")
        result = result_from_dict(json.loads(cached.decode("utf-8")))
        try:
            if format == "regulatory_csv":
                return Response(content=render_regulatory_csv(result.regulatory, loc), media_type="text/csv; charset=utf-8")
            if format == "synthetic_json":
                return Response(content=render_synthetic(result.synthetic, loc).json_bytes, media_type="application/json")
            if format == "synthetic_text":
                return Response(content=render_synthetic(result.synthetic, loc).text_table, media_type="text/plain; charset=utf-8")
            if format == "pie_svg":
                return Response(content=render_pie_svg(result.synthetic, loc), media_type="image/svg+xml")
            if format == "purpose_svg":
                return Response(content=render_bar_svg(result.breakdowns.get("purpose", ()), "purpose", loc), media_type="image/svg+xml")
            return Response(content=render_bar_svg(result.breakdowns.get("status", ()), "status", loc), media_type="image/svg+xml")
        except EmptyChart as exc:
            raise _error(409, f"chart is empty: {exc}")

    return app

"""Parsers for the professional-travel TSV and the commute-survey CSV.

Both parsers recover at row level: a bad row yields an issue carrying its
physical line number and the batch continues, so no data is lost silently
(rows parsed + rows in error = data rows seen). The only document-level
failure is undecodable text.
"""

from __future__ import annotations

import csv
import datetime as _dt
import io
import unicodedata
from dataclasses import dataclass

from . import geodesy
from .gazetteer import Gazetteer, GazetteerError, resolve_place
from .inventory import (
    MEMBER_STATUS_FR,
    TRAVEL_MODE_FR,
    TRAVEL_PURPOSE_FR,
    CommuteLeg,
    CommuteMode,
    CommuteResponse,
    MemberStatus,
    TravelLeg,
    TravelMode,
    TravelPurpose,
    Trip,
)


class EncodingError(ValueError):
    """The document bytes are not valid UTF-8."""


@dataclass(frozen=True)
class RowIssue:
    """A row-level problem; `severity` is "error" (row dropped) or "warning"."""

    line: int
    message: str
    severity: str = "error"

    def __str__(self) -> str:
        return f"line {self.line}: {self.message}"


@dataclass(frozen=True)
class RawTravelRow:
    """One TSV line of the travel file, one leg of a trip."""

    trip_number: int
    departure_date: _dt.date
    departure_city: str
    departure_country: str
    destination_city: str
    destination_country: str
    mode: TravelMode
    car_occupancy: int | None
    round_trip: bool
    purpose: TravelPurpose | None
    status: MemberStatus | None
    source_line: int


def _fold(token: str) -> str:
    """Accent-insensitive, case-insensitive, separator-insensitive key."""
    decomposed = unicodedata.normalize("NFKD", token)
    stripped = "".join(ch for ch in decomposed if not unicodedata.combining(ch))
    stripped = stripped.replace("-", " ").replace("_", " ").replace(".", " ").replace("'", " ").replace("’", " ")
    return " ".join(stripped.casefold().split())


def _vocabulary(labels: dict) -> dict[str, object]:
    table = {_fold(label): key for key, label in labels.items()}
    for key in labels:
        table.setdefault(_fold(key.value), key)
    return table


_MODE_VOCAB = _vocabulary(TRAVEL_MODE_FR)
_PURPOSE_VOCAB = _vocabulary(TRAVEL_PURPOSE_FR)
_STATUS_VOCAB = _vocabulary(MEMBER_STATUS_FR)
_COMMUTE_VOCAB: dict[str, CommuteMode] = {
    token: CommuteMode(mode.value) for token, mode in _MODE_VOCAB.items()
}
for walk_token in ("marche", "a pied", "walk"):
    _COMMUTE_VOCAB[walk_token] = CommuteMode.WALK

_ALLOWED_MODES = ", ".join(TRAVEL_MODE_FR[m] for m in TravelMode)


def _decode(document: bytes) -> str:
    try:
        return document.decode("utf-8-sig")
    except UnicodeDecodeError as exc:
        raise EncodingError(f"document is not valid UTF-8: {exc}") from None


def _parse_date(text: str) -> _dt.date:
    parts = text.strip().split("/")
    if len(parts) != 3:
        raise ValueError
    day, month, year = (int(p) for p in parts)
    if len(parts[2]) != 4:
        raise ValueError
    return _dt.date(year, month, day)


def parse_travel_tsv(document: bytes) -> tuple[list[RawTravelRow], list[RowIssue]]:
    """Parse the 11-column travel TSV.

    The first line is treated as a header when its date column does not
    parse as dd/mm/yyyy. Vocabulary columns match the French labels
    case-insensitively with accents and hyphens normalized.
    """
    text = _decode(document)
    rows: list[RawTravelRow] = []
    issues: list[RowIssue] = []
    first_data_line_seen = False

    for lineno, line in enumerate(text.splitlines(), start=1):
        if not line.strip():
            continue
        fields = [f.strip() for f in line.split("\t")]
        if not first_data_line_seen:
            first_data_line_seen = True
            try:
                _parse_date(fields[1] if len(fields) > 1 else "")
            except (ValueError, IndexError):
                continue  # header row
        if not (9 <= len(fields) <= 11):
            issues.append(RowIssue(lineno, f"expected 11 tab-separated columns, got {len(fields)}"))
            continue
        fields += [""] * (11 - len(fields))
        (
            trip_s,
            date_s,
            dep_city,
            dep_country,
            dst_city,
            dst_country,
            mode_s,
            occupancy_s,
            round_s,
            purpose_s,
            status_s,
        ) = fields

        try:
            trip_number = int(trip_s)
            if trip_number <= 0:
                raise ValueError
        except ValueError:
            issues.append(RowIssue(lineno, f"bad trip number {trip_s!r}, expected a positive integer"))
            continue
        try:
            departure_date = _parse_date(date_s)
        except ValueError:
            issues.append(RowIssue(lineno, f"bad date format {date_s!r}, expected dd/mm/yyyy"))
            continue
        if not dep_city or not dst_city:
            issues.append(RowIssue(lineno, "departure and destination cities are required"))
            continue
        if not dep_country or not dst_country:
            issues.append(RowIssue(lineno, "departure and destination countries are required"))
            continue
        mode = _MODE_VOCAB.get(_fold(mode_s))
        if mode is None:
            issues.append(RowIssue(lineno, f"unknown travel mode {mode_s!r}; allowed: {_ALLOWED_MODES}"))
            continue
        occupancy: int | None = None
        if mode in (TravelMode.CAR, TravelMode.TAXI):
            try:
                occupancy = int(occupancy_s)
                if occupancy <= 0:
                    raise ValueError
            except ValueError:
                issues.append(
                    RowIssue(lineno, f"car/taxi rows need a positive occupant count, got {occupancy_s!r}")
                )
                continue
        elif occupancy_s:
            issues.append(RowIssue(lineno, f"occupant count only applies to Voiture/Taxi rows, got {occupancy_s!r}"))
            continue
        round_token = _fold(round_s)
        if round_token not in ("oui", "non"):
            issues.append(RowIssue(lineno, f"bad round-trip flag {round_s!r}, expected OUI or NON"))
            continue
        purpose: TravelPurpose | None = None
        if purpose_s:
            purpose = _PURPOSE_VOCAB.get(_fold(purpose_s))
            if purpose is None:
                allowed = ", ".join(TRAVEL_PURPOSE_FR.values())
                issues.append(RowIssue(lineno, f"unknown travel purpose {purpose_s!r}; allowed: {allowed}"))
                continue
        status: MemberStatus | None = None
        if status_s:
            status = _STATUS_VOCAB.get(_fold(status_s))
            if status is None:
                allowed = ", ".join(MEMBER_STATUS_FR.values())
                issues.append(RowIssue(lineno, f"unknown agent status {status_s!r}; allowed: {allowed}"))
                continue

        rows.append(
            RawTravelRow(
                trip_number=trip_number,
                departure_date=departure_date,
                departure_city=dep_city,
                departure_country=dep_country,
                destination_city=dst_city,
                destination_country=dst_country,
                mode=mode,
                car_occupancy=occupancy,
                round_trip=round_token == "oui",
                purpose=purpose,
                status=status,
                source_line=lineno,
            )
        )
    return rows, issues


def normalize_trips(
    rows: list[RawTravelRow],
    gazetteer: Gazetteer,
    correction: geodesy.RouteCorrection | None = None,
) -> tuple[list[Trip], list[RowIssue]]:
    """Group rows into trips and resolve each row into a distance-bearing leg.

    Rows stay grouped by trip number in file order. Purpose and status are
    taken from the first leg of a group; conflicting later values yield a
    warning and the first value wins. A leg whose endpoint cannot be
    resolved is dropped with an error; the trip survives as long as one
    leg resolves.
    """
    issues: list[RowIssue] = []
    place_cache: dict[tuple[str, str], object] = {}

    def resolve(city: str, country: str, lineno: int):
        key = (city, country)
        if key not in place_cache:
            try:
                place_cache[key] = resolve_place(gazetteer, city, country)
            except GazetteerError as exc:
                place_cache[key] = exc
        result = place_cache[key]
        if isinstance(result, GazetteerError):
            issues.append(RowIssue(lineno, str(result)))
            return None
        return result

    groups: dict[int, list[RawTravelRow]] = {}
    for row in rows:
        groups.setdefault(row.trip_number, []).append(row)

    trips: list[Trip] = []
    for trip_number, group in groups.items():
        first = group[0]
        purpose = first.purpose if first.purpose is not None else TravelPurpose.UNKNOWN
        status = first.status
        legs: list[TravelLeg] = []
        for row in group:
            if row.purpose is not None and first.purpose is not None and row.purpose != first.purpose:
                issues.append(
                    RowIssue(
                        row.source_line,
                        f"trip {trip_number} mixes purposes "
                        f"({first.purpose.value} vs {row.purpose.value}); keeping the first",
                        severity="warning",
                    )
                )
            if row.status is not None and first.status is not None and row.status != first.status:
                issues.append(
                    RowIssue(
                        row.source_line,
                        f"trip {trip_number} mixes agent statuses; keeping the first",
                        severity="warning",
                    )
                )
            origin = resolve(row.departure_city, row.departure_country, row.source_line)
            destination = resolve(row.destination_city, row.destination_country, row.source_line)
            if origin is None or destination is None:
                continue
            gc_km = geodesy.great_circle_km(origin, destination)
            legs.append(
                TravelLeg(
                    mode=row.mode,
                    origin=origin,
                    destination=destination,
                    great_circle_km=gc_km,
                    corrected_km=geodesy.corrected_distance(row.mode, gc_km, correction),
                    round_trip=row.round_trip,
                    car_occupancy=row.car_occupancy,
                )
            )
        if legs:
            trips.append(Trip(trip_number=trip_number, legs=tuple(legs), purpose=purpose, status=status))
    return trips, issues


# Commute survey CSV: status, mode1, km1, mode2, km2, mode3, km3,
# days_per_week, weeks_per_year. Up to three legs per respondent;
# distances are respondent-reported route kilometres.
COMMUTE_CSV_HEADER = "status,mode1,km1,mode2,km2,mode3,km3,days_per_week,weeks_per_year"


def parse_commute_csv(document: bytes) -> tuple[list[CommuteResponse], list[RowIssue]]:
    """Parse the commute survey CSV; the first line is always the header."""
    text = _decode(document)
    responses: list[CommuteResponse] = []
    issues: list[RowIssue] = []
    reader = csv.reader(io.StringIO(text))
    for lineno, record in enumerate(reader, start=1):
        if lineno == 1 or not record or not any(f.strip() for f in record):
            continue
        if len(record) != 9:
            issues.append(RowIssue(lineno, f"expected 9 comma-separated columns, got {len(record)}"))
            continue
        fields = [f.strip() for f in record]
        status = _STATUS_VOCAB.get(_fold(fields[0]))
        if status is None:
            allowed = ", ".join(MEMBER_STATUS_FR.values())
            issues.append(RowIssue(lineno, f"unknown status {fields[0]!r}; allowed: {allowed}"))
            continue
        legs: list[CommuteLeg] = []
        leg_error = False
        for slot in range(3):
            mode_s, km_s = fields[1 + 2 * slot], fields[2 + 2 * slot]
            if not mode_s and not km_s:
                continue
            if not mode_s or not km_s:
                issues.append(RowIssue(lineno, f"leg {slot + 1} needs both a mode and a distance"))
                leg_error = True
                break
            mode = _COMMUTE_VOCAB.get(_fold(mode_s))
            if mode is None:
                allowed = _ALLOWED_MODES + ", Marche"
                issues.append(RowIssue(lineno, f"unknown commute mode {mode_s!r}; allowed: {allowed}"))
                leg_error = True
                break
            try:
                km = float(km_s)
            except ValueError:
                issues.append(RowIssue(lineno, f"bad distance {km_s!r} for leg {slot + 1}"))
                leg_error = True
                break
            if km <= 0:
                issues.append(RowIssue(lineno, f"leg {slot + 1} distance must be > 0, got {km_s}"))
                leg_error = True
                break
            legs.append(CommuteLeg(mode=mode, one_way_km=km))
        if leg_error:
            continue
        if not legs:
            issues.append(RowIssue(lineno, "a response needs at least one commute leg"))
            continue
        try:
            days = float(fields[7])
            weeks = float(fields[8])
        except ValueError:
            issues.append(RowIssue(lineno, f"bad days/weeks values {fields[7]!r}, {fields[8]!r}"))
            continue
        if not (0 <= days <= 7):
            issues.append(RowIssue(lineno, f"days_per_week must be in [0, 7], got {fields[7]}"))
            continue
        if not (0 <= weeks <= 52):
            issues.append(RowIssue(lineno, f"weeks_per_year must be in [0, 52], got {fields[8]}"))
            continue
        responses.append(
            CommuteResponse(status=status, legs=tuple(legs), days_per_week=days, weeks_per_year=weeks)
        )
    return responses, issues

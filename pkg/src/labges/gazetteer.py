"""Offline city gazetteer: name normalization, country resolution, lookup.

The bundled extract (data/cities.tsv) follows the column layout of the
public geonames dump — name, asciiname, country_code, latitude,
longitude, population — so a full dump can be substituted via the CLI
flag or the service configuration. Duplicate names inside a country
resolve to the most populous entry.
"""

from __future__ import annotations

import unicodedata
from dataclasses import dataclass
from importlib import resources
from typing import Mapping

from .geodesy import GeoPoint


class GazetteerError(Exception):
    """Base class for place-resolution problems."""


class UnknownPlace(GazetteerError):
    def __init__(self, city: str, country: str, detail: str = ""):
        self.city = city
        self.country = country
        msg = f"unknown place: {city!r} in {country!r}"
        if detail:
            msg += f" ({detail})"
        super().__init__(msg)


class AmbiguousCountry(GazetteerError):
    def __init__(self, country: str, codes: set[str]):
        self.country = country
        self.codes = set(codes)
        super().__init__(f"country name {country!r} is ambiguous: matches {sorted(codes)}")


def normalize_name(name: str) -> str:
    """Fold case, strip accents and unify hyphen/space so lookups are stable."""
    decomposed = unicodedata.normalize("NFKD", name)
    stripped = "".join(ch for ch in decomposed if not unicodedata.combining(ch))
    stripped = stripped.replace("-", " ").replace("'", " ").replace("’", " ").replace(".", " ")
    return " ".join(stripped.casefold().split())


# Country names (French and English) accepted alongside ISO 3166 alpha-2
# codes. Names that legitimately match several codes stay ambiguous.
_COUNTRY_NAMES: dict[str, tuple[str, ...]] = {
    "france": ("FR",),
    "allemagne": ("DE",), "germany": ("DE",),
    "espagne": ("ES",), "spain": ("ES",),
    "italie": ("IT",), "italy": ("IT",),
    "portugal": ("PT",),
    "belgique": ("BE",), "belgium": ("BE",),
    "pays bas": ("NL",), "netherlands": ("NL",), "hollande": ("NL",),
    "luxembourg": ("LU",),
    "suisse": ("CH",), "switzerland": ("CH",),
    "autriche": ("AT",), "austria": ("AT",),
    "royaume uni": ("GB",), "united kingdom": ("GB",), "uk": ("GB",), "angleterre": ("GB",),
    "irlande": ("IE",), "ireland": ("IE",),
    "danemark": ("DK",), "denmark": ("DK",),
    "suede": ("SE",), "sweden": ("SE",),
    "norvege": ("NO",), "norway": ("NO",),
    "finlande": ("FI",), "finland": ("FI",),
    "islande": ("IS",), "iceland": ("IS",),
    "pologne": ("PL",), "poland": ("PL",),
    "tchequie": ("CZ",), "republique tcheque": ("CZ",), "czechia": ("CZ",), "czech republic": ("CZ",),
    "slovaquie": ("SK",), "slovakia": ("SK",),
    "hongrie": ("HU",), "hungary": ("HU",),
    "roumanie": ("RO",), "romania": ("RO",),
    "bulgarie": ("BG",), "bulgaria": ("BG",),
    "grece": ("GR",), "greece": ("GR",),
    "croatie": ("HR",), "croatia": ("HR",),
    "slovenie": ("SI",), "slovenia": ("SI",),
    "serbie": ("RS",), "serbia": ("RS",),
    "turquie": ("TR",), "turkey": ("TR",),
    "russie": ("RU",), "russia": ("RU",),
    "ukraine": ("UA",),
    "etats unis": ("US",), "united states": ("US",), "usa": ("US",), "etats unis d amerique": ("US",),
    "canada": ("CA",),
    "mexique": ("MX",), "mexico": ("MX",),
    "bresil": ("BR",), "brazil": ("BR",),
    "argentine": ("AR",), "argentina": ("AR",),
    "chili": ("CL",), "chile": ("CL",),
    "perou": ("PE",), "peru": ("PE",),
    "colombie": ("CO",), "colombia": ("CO",),
    "venezuela": ("VE",),
    "japon": ("JP",), "japan": ("JP",),
    "chine": ("CN",), "china": ("CN",),
    "coree": ("KR", "KP"), "korea": ("KR", "KP"),
    "coree du sud": ("KR",), "south korea": ("KR",),
    "coree du nord": ("KP",), "north korea": ("KP",),
    "inde": ("IN",), "india": ("IN",),
    "indonesie": ("ID",), "indonesia": ("ID",),
    "thailande": ("TH",), "thailand": ("TH",),
    "vietnam": ("VN",), "viet nam": ("VN",),
    "singapour": ("SG",), "singapore": ("SG",),
    "malaisie": ("MY",), "malaysia": ("MY",),
    "philippines": ("PH",),
    "australie": ("AU",), "australia": ("AU",),
    "nouvelle zelande": ("NZ",), "new zealand": ("NZ",),
    "afrique du sud": ("ZA",), "south africa": ("ZA",),
    "maroc": ("MA",), "morocco": ("MA",),
    "algerie": ("DZ",), "algeria": ("DZ",),
    "tunisie": ("TN",), "tunisia": ("TN",),
    "egypte": ("EG",), "egypt": ("EG",),
    "senegal": ("SN",),
    "cote d ivoire": ("CI",), "ivory coast": ("CI",),
    "cameroun": ("CM",), "cameroon": ("CM",),
    "kenya": ("KE",),
    "ethiopie": ("ET",), "ethiopia": ("ET",),
    "nigeria": ("NG",),
    "ghana": ("GH",),
    "madagascar": ("MG",),
    "congo": ("CG", "CD"),
    "republique du congo": ("CG",),
    "republique democratique du congo": ("CD",), "democratic republic of the congo": ("CD",),
    "israel": ("IL",),
    "liban": ("LB",), "lebanon": ("LB",),
    "emirats arabes unis": ("AE",), "united arab emirates": ("AE",),
    "arabie saoudite": ("SA",), "saudi arabia": ("SA",),
    "qatar": ("QA",),
    "iran": ("IR",),
    "pakistan": ("PK",),
    "bangladesh": ("BD",),
    "kazakhstan": ("KZ",),
}


@dataclass(frozen=True)
class GazetteerEntry:
    name: str
    asciiname: str
    country: str
    point: GeoPoint
    population: int


class Gazetteer:
    """Immutable (after load) index of cities keyed by normalized name + country."""

    def __init__(self, entries: list[GazetteerEntry]):
        self._entries = tuple(entries)
        index: dict[tuple[str, str], GazetteerEntry] = {}
        for entry in entries:
            for key_name in {normalize_name(entry.name), normalize_name(entry.asciiname)}:
                if not key_name:
                    continue
                key = (key_name, entry.country)
                existing = index.get(key)
                # Deterministic duplicate handling: keep the most populous,
                # falling back to the lexicographically smaller asciiname.
                if (
                    existing is None
                    or entry.population > existing.population
                    or (entry.population == existing.population and entry.asciiname < existing.asciiname)
                ):
                    index[key] = entry
        self._index = index

    def __len__(self) -> int:
        return len(self._entries)

    @property
    def entries(self) -> tuple[GazetteerEntry, ...]:
        return self._entries

    def find(self, city: str, country_code: str) -> GazetteerEntry | None:
        return self._index.get((normalize_name(city), country_code.upper()))


def resolve_country(country: str) -> str:
    """Turn an ISO 3166 alpha-2 code or a French/English name into a code."""
    raw = country.strip()
    if len(raw) == 2 and raw.isalpha():
        return raw.upper()
    norm = normalize_name(raw)
    codes = _COUNTRY_NAMES.get(norm)
    if codes is None:
        raise UnknownPlace("", country, "unrecognized country name or code")
    if len(codes) > 1:
        raise AmbiguousCountry(country, set(codes))
    return codes[0]


def resolve_place(gazetteer: Gazetteer, city: str, country: str) -> GeoPoint:
    """City + country to coordinates; deterministic under name normalization."""
    code = resolve_country(country)
    entry = gazetteer.find(city, code)
    if entry is None:
        raise UnknownPlace(city, country)
    return entry.point


def load_gazetteer(document: bytes) -> Gazetteer:
    """Parse a gazetteer TSV (name, asciiname, country_code, lat, lon, population).

    A header line is tolerated (detected by an unparseable latitude).
    Malformed data lines raise, as the gazetteer ships with the artifact
    and is not user-recoverable input.
    """
    try:
        text = document.decode("utf-8")
    except UnicodeDecodeError as exc:
        raise GazetteerError(f"gazetteer file is not valid UTF-8: {exc}") from None
    entries: list[GazetteerEntry] = []
    for lineno, line in enumerate(text.splitlines(), start=1):
        if not line.strip():
            continue
        fields = line.split("\t")
        if len(fields) < 6:
            raise GazetteerError(f"line {lineno}: expected 6 tab-separated columns, got {len(fields)}")
        name, asciiname, country, lat_s, lon_s, pop_s = (f.strip() for f in fields[:6])
        try:
            lat, lon = float(lat_s), float(lon_s)
        except ValueError:
            if lineno == 1:
                continue  # header line
            raise GazetteerError(f"line {lineno}: bad coordinates {lat_s!r}, {lon_s!r}") from None
        try:
            population = int(pop_s) if pop_s else 0
        except ValueError:
            raise GazetteerError(f"line {lineno}: bad population {pop_s!r}") from None
        entries.append(
            GazetteerEntry(
                name=name,
                asciiname=asciiname or name,
                country=country.upper(),
                point=GeoPoint(lat, lon),
                population=population,
            )
        )
    return Gazetteer(entries)


def load_bundled_gazetteer() -> Gazetteer:
    return load_gazetteer(resources.files("labges.data").joinpath("cities.tsv").read_bytes())

"""Catalog ingestion, batch commuting-probability surveys, and interval scans.

Input catalogs are line-delimited JSON; each entry names a group either
by an explicit Cayley table, by permutation generators in cycle
notation, or by a family spec. Surveys compute (order, k, Pr) per entry
with an optional on-disk cache keyed by the canonical table bytes,
aggregate the observed value spectrum with witnesses, and scans ask
whether any observed value lies in a given interval.

Reports are deterministic: a survey run with N workers produces the
same serialized report as a serial run (timing and cache statistics are
excluded from the canonical serialization).
"""

from __future__ import annotations

import hashlib
import json
import logging
import os
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path

from .errors import CommprobError, ParseError, ValidationError
from .families import FamilySpec, make
from .groups import (
    GroupTable,
    build_from_cayley,
    build_from_permutations,
    conjugacy_classes,
    parse_cycles,
)
from .probability import PrReport
from .rationals import format_rational, parse_rational

log = logging.getLogger("commprob.catalog")

CACHE_ENV_VAR = "COMMPROB_CACHE_DIR"
_CACHE_MAGIC = b"CPRCACHE1\n"

_SOURCES = ("cayley", "permutations", "family")


# ---------------------------------------------------------------------------
# catalog entries
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class CatalogEntry:
    """One catalog line; the table itself is built lazily."""

    name: str
    source: str
    payload: dict
    expected_pr: Fraction | None = None
    tags: tuple[str, ...] = ()

    def build(self) -> GroupTable:
        """Construct and validate the group; wraps failures with the entry name."""
        try:
            if self.source == "cayley":
                return build_from_cayley(self.payload["table"], name=self.name)
            if self.source == "permutations":
                degree = int(self.payload["degree"])
                gens = [parse_cycles(s, degree) for s in self.payload["gens"]]
                table = build_from_permutations(degree, gens, name=self.name)
                return table
            if self.source == "family":
                spec = FamilySpec(
                    family=self.payload["family"],
                    params=tuple(int(p) for p in self.payload["params"]),
                )
                table, _ = make(spec)
                return GroupTable(
                    order=table.order,
                    op=table.op,
                    inv=table.inv,
                    name=self.name,
                    validation=table.validation,
                )
            raise ValidationError(f"unknown source {self.source!r}", entry=self.name)
        except ValidationError:
            raise
        except (CommprobError, KeyError, ValueError, TypeError) as exc:
            raise ValidationError(
                f"entry {self.name!r}: {type(exc).__name__}: {exc}", entry=self.name
            ) from exc


def entry_from_family(spec: FamilySpec, tags: tuple[str, ...] = ()) -> CatalogEntry:
    name = spec.name or f"{spec.family}{list(spec.params)}"
    return CatalogEntry(
        name=name,
        source="family",
        payload={"family": spec.family, "params": list(spec.params)},
        expected_pr=spec.expected_pr,
        tags=tags,
    )


def ingest(path) -> list[CatalogEntry]:
    """Parse a line-delimited JSON catalog. Blank lines are ignored."""
    entries: list[CatalogEntry] = []
    with open(path, "r", encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            if not line.strip():
                continue
            try:
                data = json.loads(line)
            except json.JSONDecodeError as exc:
                raise ParseError(f"line {lineno}: {exc}", line=lineno) from exc
            if not isinstance(data, dict) or "name" not in data or "source" not in data:
                raise ParseError(
                    f"line {lineno}: entry needs 'name' and 'source'", line=lineno
                )
            source = data["source"]
            if source not in _SOURCES:
                raise ParseError(
                    f"line {lineno}: unknown source {source!r}", line=lineno
                )
            expected = data.get("expected_pr")
            entries.append(
                CatalogEntry(
                    name=str(data["name"]),
                    source=source,
                    payload={
                        k: v
                        for k, v in data.items()
                        if k not in ("name", "source", "expected_pr", "tags")
                    },
                    expected_pr=None if expected is None else parse_rational(expected),
                    tags=tuple(data.get("tags", ())),
                )
            )
    return entries


# ---------------------------------------------------------------------------
# filters
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class EntryFilter:
    """Predicate over surveyed rows; unset fields do not constrain."""

    max_order: int | None = None
    min_order: int | None = None
    p_power: int | None = None
    odd_order: bool = False
    abelian_only: bool = False
    nonabelian_only: bool = False
    max_center_index: int | None = None
    tag: str | None = None

    def describe(self) -> str:
        parts = []
        if self.max_order is not None:
            parts.append(f"order<={self.max_order}")
        if self.min_order is not None:
            parts.append(f"order>={self.min_order}")
        if self.p_power is not None:
            parts.append(f"p-group:{self.p_power}")
        if self.odd_order:
            parts.append("odd-order")
        if self.abelian_only:
            parts.append("abelian")
        if self.nonabelian_only:
            parts.append("nonabelian")
        if self.max_center_index is not None:
            parts.append(f"center-index<={self.max_center_index}")
        if self.tag is not None:
            parts.append(f"tag:{self.tag}")
        return ", ".join(parts) if parts else "all"

    def matches(self, row: "SurveyRow") -> bool:
        if row.status != "ok":
            return False
        if self.max_order is not None and row.order > self.max_order:
            return False
        if self.min_order is not None and row.order < self.min_order:
            return False
        if self.p_power is not None and not _is_power_of(row.order, self.p_power):
            return False
        if self.odd_order and row.order % 2 == 0:
            return False
        if self.abelian_only and not row.is_abelian:
            return False
        if self.nonabelian_only and row.is_abelian:
            return False
        if (
            self.max_center_index is not None
            and row.center_index > self.max_center_index
        ):
            return False
        if self.tag is not None and self.tag not in row.tags:
            return False
        return True


def _is_power_of(n: int, p: int) -> bool:
    if n < 1 or p < 2:
        return False
    while n % p == 0:
        n //= p
    return n == 1


# ---------------------------------------------------------------------------
# survey
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class SurveyRow:
    name: str
    status: str  # "ok" or "failed"
    order: int | None = None
    k: int | None = None
    pr: Fraction | None = None
    center_index: int | None = None
    is_abelian: bool | None = None
    tags: tuple[str, ...] = ()
    error: str = ""

    def to_json_dict(self) -> dict:
        return {
            "name": self.name,
            "status": self.status,
            "order": self.order,
            "k": self.k,
            "pr": None if self.pr is None else format_rational(self.pr),
            "center_index": self.center_index,
            "abelian": self.is_abelian,
            "tags": list(self.tags),
            "error": self.error,
        }


@dataclass(frozen=True)
class SurveyReport:
    rows: tuple[SurveyRow, ...]
    spectrum: tuple[tuple[Fraction, tuple[str, ...]], ...]
    universe: str
    elapsed_s: float = 0.0
    cache_hits: int = 0
    cache_misses: int = 0

    def to_json(self, *, include_stats: bool = False) -> str:
        data = {
            "universe": self.universe,
            "rows": [r.to_json_dict() for r in self.rows],
            "spectrum": [
                {"pr": format_rational(v), "witnesses": list(names)}
                for v, names in self.spectrum
            ],
        }
        if include_stats:
            data["stats"] = {
                "elapsed_s": self.elapsed_s,
                "cache_hits": self.cache_hits,
                "cache_misses": self.cache_misses,
            }
        return json.dumps(data, indent=2)

    def to_csv(self) -> str:
        lines = ["name,order,k,pr"]
        for r in self.rows:
            if r.status == "ok":
                lines.append(
                    f"{r.name},{r.order},{r.k},{format_rational(r.pr)}"
                )
            else:
                lines.append(f"{r.name},,,FAILED")
        return "\n".join(lines) + "\n"


def _row_from_report(report: PrReport, entry: CatalogEntry) -> SurveyRow:
    return SurveyRow(
        name=entry.name,
        status="ok",
        order=report.order,
        k=report.k,
        pr=report.pr,
        center_index=report.center_index,
        is_abelian=report.center_index == 1,
        tags=entry.tags,
    )


def _compute_row(entry: CatalogEntry, cache_dir) -> tuple[SurveyRow, bool]:
    """Returns (row, cache_hit)."""
    try:
        table = entry.build()
    except (ValidationError, CommprobError) as exc:
        return SurveyRow(name=entry.name, status="failed", tags=entry.tags,
                         error=str(exc)), False
    hit = False
    report = None
    key = cache_key(table)
    if cache_dir is not None:
        report = cache_load(cache_dir, key)
        if report is not None and report.order == table.order:
            report = PrReport(
                name=entry.name,
                order=report.order,
                k=report.k,
                pr=report.pr,
                center_index=report.center_index,
            )
            hit = True
        else:
            report = None
    if report is None:
        k = conjugacy_classes(table).count
        center_size = int((table.op == table.op.T).all(axis=1).sum())
        report = PrReport(
            name=entry.name,
            order=table.order,
            k=k,
            pr=Fraction(k, table.order),
            center_index=table.order // center_size,
        )
        if cache_dir is not None:
            cache_store(cache_dir, key, report)
    row = _row_from_report(report, entry)
    if entry.expected_pr is not None and row.pr != entry.expected_pr:
        row = SurveyRow(
            name=entry.name,
            status="failed",
            order=row.order,
            k=row.k,
            pr=row.pr,
            center_index=row.center_index,
            is_abelian=row.is_abelian,
            tags=entry.tags,
            error=(
                f"expected pr {format_rational(entry.expected_pr)}, "
                f"computed {format_rational(row.pr)}"
            ),
        )
    return row, hit


def survey(
    entries,
    flt: EntryFilter | None = None,
    *,
    jobs: int = 1,
    cache_dir=None,
    universe: str | None = None,
) -> SurveyReport:
    """Compute Pr for every entry; aggregate the observed spectrum.

    Per-entry errors (and expected-value mismatches) become FAILED rows;
    the batch never aborts. Rows excluded by the filter are dropped from
    the report, FAILED rows are always kept. Results are independent of
    ``jobs``.
    """
    entries = list(entries)
    start = time.perf_counter()
    if jobs > 1:
        with ThreadPoolExecutor(max_workers=jobs) as pool:
            results = list(pool.map(lambda e: _compute_row(e, cache_dir), entries))
    else:
        results = [_compute_row(e, cache_dir) for e in entries]
    hits = sum(1 for _, h in results if h)

    rows: list[SurveyRow] = []
    for row, _ in results:
        if row.status != "ok":
            rows.append(row)
        elif flt is None or flt.matches(row):
            rows.append(row)

    witnesses: dict[Fraction, list[str]] = {}
    for row in rows:
        if row.status == "ok":
            witnesses.setdefault(row.pr, []).append(row.name)
    spectrum = tuple(
        (v, tuple(sorted(witnesses[v]))) for v in sorted(witnesses)
    )
    desc = universe or f"{len(entries)} catalog entries"
    if flt is not None:
        desc += f"; filter: {flt.describe()}"
    return SurveyReport(
        rows=tuple(rows),
        spectrum=spectrum,
        universe=desc,
        elapsed_s=time.perf_counter() - start,
        cache_hits=hits,
        cache_misses=len(entries) - hits,
    )


# ---------------------------------------------------------------------------
# interval scans
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class ConjectureFinding:
    """Outcome of an interval scan over a survey's spectrum."""

    lo: Fraction
    hi: Fraction
    closed_lo: bool
    closed_hi: bool
    filter_description: str
    universe_size: int
    universe: str
    violations: tuple[tuple[str, Fraction], ...]

    @property
    def verdict(self) -> str:
        return "EMPTY" if not self.violations else "VIOLATED"

    def interval_text(self) -> str:
        left = "[" if self.closed_lo else "("
        right = "]" if self.closed_hi else ")"
        return f"{left}{format_rational(self.lo)}, {format_rational(self.hi)}{right}"

    def summary(self) -> str:
        if self.violations:
            return (
                f"VIOLATED by {len(self.violations)} group(s) in "
                f"{self.interval_text()} (universe: {self.universe_size} groups)"
            )
        return f"EMPTY (universe: {self.universe_size} groups)"

    def to_json_dict(self) -> dict:
        return {
            "interval": self.interval_text(),
            "lo": format_rational(self.lo),
            "hi": format_rational(self.hi),
            "closed_lo": self.closed_lo,
            "closed_hi": self.closed_hi,
            "filter": self.filter_description,
            "universe_size": self.universe_size,
            "universe": self.universe,
            "verdict": self.verdict,
            "violations": [
                {"name": n, "pr": format_rational(v)} for n, v in self.violations
            ],
        }


def scan_interval(
    report: SurveyReport,
    lo,
    hi,
    *,
    closed_lo: bool = False,
    closed_hi: bool = False,
    flt: EntryFilter | None = None,
) -> ConjectureFinding:
    """List every surveyed value inside the interval that passes the filter.

    Endpoint membership follows the open/closed flags exactly; scans are
    relative to the surveyed universe, which the finding records.
    """
    lo, hi = Fraction(lo), Fraction(hi)
    if not lo < hi:
        raise ValueError("need lo < hi")
    inside_rows = []
    universe_size = 0
    for row in report.rows:
        if row.status != "ok":
            continue
        if flt is not None and not flt.matches(row):
            continue
        universe_size += 1
        above_lo = row.pr >= lo if closed_lo else row.pr > lo
        below_hi = row.pr <= hi if closed_hi else row.pr < hi
        if above_lo and below_hi:
            inside_rows.append((row.name, row.pr))
    return ConjectureFinding(
        lo=lo,
        hi=hi,
        closed_lo=closed_lo,
        closed_hi=closed_hi,
        filter_description=flt.describe() if flt is not None else "all",
        universe_size=universe_size,
        universe=report.universe,
        violations=tuple(sorted(inside_rows)),
    )


# ---------------------------------------------------------------------------
# cache
# ---------------------------------------------------------------------------


def cache_key(table: GroupTable) -> str:
    """Hash of the canonical (identity-first) row-major table bytes."""
    return hashlib.sha256(table.canonical_bytes()).hexdigest()


def resolve_cache_dir(flag_value=None):
    """Cache directory from the flag if given, else the environment."""
    if flag_value:
        return Path(flag_value)
    env = os.environ.get(CACHE_ENV_VAR)
    return Path(env) if env else None


def cache_store(cache_dir, key: str, report: PrReport) -> None:
    path = Path(cache_dir)
    path.mkdir(parents=True, exist_ok=True)
    body = json.dumps(report.to_json_dict()).encode("utf-8")
    target = path / f"{key}.cpr"
    tmp = target.with_suffix(".tmp")
    tmp.write_bytes(_CACHE_MAGIC + body)
    tmp.replace(target)


def cache_load(cache_dir, key: str) -> PrReport | None:
    """None on a cold cache; corrupted or mismatched entries are dropped
    with a logged warning so the caller recomputes."""
    target = Path(cache_dir) / f"{key}.cpr"
    if not target.exists():
        return None
    blob = target.read_bytes()
    if not blob.startswith(_CACHE_MAGIC):
        log.warning("cache entry %s has a bad header; recomputing", target.name)
        return None
    try:
        return PrReport.from_json_dict(json.loads(blob[len(_CACHE_MAGIC):]))
    except (json.JSONDecodeError, KeyError, ValueError) as exc:
        log.warning("cache entry %s is corrupted (%s); recomputing", target.name, exc)
        return None

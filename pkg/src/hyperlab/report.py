"""Range reports: accumulated counts and Weyl sums that merge across blocks."""
from __future__ import annotations

import csv
import io
import json
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field, replace
from typing import Callable, Iterable

MODES = ("elliptic", "elliptic_shifted", "hyperbolic", "titchmarsh")
_REFERENCES = ("linear", "li", "none")
_RATIO_OF = ("count", "weighted_sum", "magnitude")


@dataclass(frozen=True)
class StatReport:
    """Totals over the integer range ``x_range = (lo, hi)`` (both ends included).

    ``reference_constant`` multiplies the main term selected by
    ``metadata["reference"]``: ``linear`` (c*x) or ``li`` (c*li(x)).  The main
    term over a block is the difference of its values at the block ends, so
    block reports carry meaningful ratios and merge consistently.
    ``metadata["ratio_of"]`` picks which total the ratio is formed from;
    ``magnitude`` means |complex_sum| / count and ignores the reference.
    """

    x_range: tuple[int, int]
    mode: str
    count: int = 0
    weighted_sum: float = 0.0
    complex_sum: complex = 0j
    reference_constant: float = 0.0
    metadata: dict[str, str] = field(default_factory=dict)

    def __post_init__(self):
        if self.mode not in MODES:
            raise ValueError(f"unknown mode {self.mode!r}")
        lo, hi = self.x_range
        if lo > hi:
            raise ValueError(f"empty range {self.x_range}")
        if self.metadata.get("reference", "none") not in _REFERENCES:
            raise ValueError(f"unknown reference {self.metadata['reference']!r}")
        if self.metadata.get("ratio_of", "count") not in _RATIO_OF:
            raise ValueError(f"unknown ratio_of {self.metadata['ratio_of']!r}")

    def _main_term(self, x: float) -> float:
        kind = self.metadata.get("reference", "none")
        if kind == "linear":
            return self.reference_constant * x
        if kind == "li":
            from .analytics import li

            return self.reference_constant * li(x) if x > 2 else 0.0
        return math.nan

    @property
    def reference_value(self) -> float:
        lo, hi = self.x_range
        return self._main_term(hi) - (self._main_term(lo - 1) if lo > 1 else 0.0)

    @property
    def ratio(self) -> float:
        what = self.metadata.get("ratio_of", "count")
        if what == "magnitude":
            return abs(self.complex_sum) / self.count if self.count else math.nan
        ref = self.reference_value
        if not ref or math.isnan(ref):
            return math.nan
        num = self.count if what == "count" else self.weighted_sum
        return num / ref

    def merge(self, other: "StatReport") -> "StatReport":
        """Combine reports over adjacent ranges; the order of arguments does not matter."""
        a, b = sorted((self, other), key=lambda r: r.x_range)
        if a.mode != b.mode or a.reference_constant != b.reference_constant or a.metadata != b.metadata:
            raise ValueError("reports describe different experiments")
        if a.x_range[1] + 1 != b.x_range[0]:
            raise ValueError(f"ranges {a.x_range} and {b.x_range} are not adjacent")
        return replace(
            a,
            x_range=(a.x_range[0], b.x_range[1]),
            count=a.count + b.count,
            weighted_sum=a.weighted_sum + b.weighted_sum,
            complex_sum=a.complex_sum + b.complex_sum,
        )

    # ---- serialization

    def to_dict(self) -> dict:
        return {
            "x_lo": self.x_range[0],
            "x_hi": self.x_range[1],
            "mode": self.mode,
            "count": int(self.count),
            "weighted_sum": float(self.weighted_sum),
            "complex_sum": {"re": self.complex_sum.real, "im": self.complex_sum.imag},
            "reference_constant": float(self.reference_constant),
            "reference_value": _finite_or_none(self.reference_value),
            "ratio": _finite_or_none(self.ratio),
            "metadata": dict(self.metadata),
        }

    @classmethod
    def from_dict(cls, d: dict) -> "StatReport":
        cs = d["complex_sum"]
        return cls(
            x_range=(int(d["x_lo"]), int(d["x_hi"])),
            mode=d["mode"],
            count=int(d["count"]),
            weighted_sum=float(d["weighted_sum"]),
            complex_sum=complex(float(cs["re"]), float(cs["im"])),
            reference_constant=float(d["reference_constant"]),
            metadata={str(k): str(v) for k, v in d["metadata"].items()},
        )

    def to_json(self) -> str:
        return json.dumps(self.to_dict())

    @classmethod
    def from_json(cls, text: str) -> "StatReport":
        return cls.from_dict(json.loads(text))


CSV_FIELDS = (
    "x_lo",
    "x_hi",
    "mode",
    "count",
    "weighted_sum",
    "complex_re",
    "complex_im",
    "reference_constant",
    "reference_value",
    "ratio",
    "metadata",
)


def _finite_or_none(v: float):
    return None if v is None or math.isnan(v) else float(v)


def to_csv(reports: Iterable[StatReport]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(CSV_FIELDS)
    for r in reports:
        d = r.to_dict()
        w.writerow(
            [
                d["x_lo"],
                d["x_hi"],
                d["mode"],
                d["count"],
                repr(d["weighted_sum"]),
                repr(d["complex_sum"]["re"]),
                repr(d["complex_sum"]["im"]),
                repr(d["reference_constant"]),
                "" if d["reference_value"] is None else repr(d["reference_value"]),
                "" if d["ratio"] is None else repr(d["ratio"]),
                json.dumps(d["metadata"], sort_keys=True),
            ]
        )
    return buf.getvalue()


def from_csv(text: str) -> list[StatReport]:
    rows = csv.DictReader(io.StringIO(text))
    if tuple(rows.fieldnames or ()) != CSV_FIELDS:
        raise ValueError(f"unexpected CSV header {rows.fieldnames}")
    out = []
    for row in rows:
        out.append(
            StatReport.from_dict(
                {
                    "x_lo": row["x_lo"],
                    "x_hi": row["x_hi"],
                    "mode": row["mode"],
                    "count": row["count"],
                    "weighted_sum": row["weighted_sum"],
                    "complex_sum": {"re": row["complex_re"], "im": row["complex_im"]},
                    "reference_constant": row["reference_constant"],
                    "metadata": json.loads(row["metadata"]),
                }
            )
        )
    return out


def merge_all(reports: Iterable[StatReport]) -> StatReport:
    """Merge block reports in range order."""
    reports = sorted(reports, key=lambda r: r.x_range)
    if not reports:
        raise ValueError("nothing to merge")
    out = reports[0]
    for r in reports[1:]:
        out = out.merge(r)
    return out


def blocks(lo: int, hi: int, k: int) -> list[tuple[int, int]]:
    """Split lo..hi into at most k contiguous non-empty blocks."""
    k = max(1, min(k, hi - lo + 1))
    edges = [lo + (hi - lo + 1) * j // k for j in range(k + 1)]
    return [(edges[j], edges[j + 1] - 1) for j in range(k)]


def run_blocks(fn: Callable[[int, int], StatReport], lo: int, hi: int, threads: int = 1) -> StatReport:
    """Evaluate ``fn`` on contiguous blocks of lo..hi and merge in block order."""
    parts = blocks(lo, hi, threads)
    if len(parts) == 1:
        return fn(lo, hi)
    with ThreadPoolExecutor(max_workers=len(parts)) as pool:
        reports = list(pool.map(lambda b: fn(*b), parts))
    return merge_all(reports)

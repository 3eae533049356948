"""Plain-text factor cache with verified ingestion.

File layout: a '#' header line, then one ``VALUE=P^E,P^E,...`` line per
entry, sorted by VALUE; '^1' is omitted and the factor list of 1 is empty
("1=").  Every line read from disk or an ingest file is re-verified
(product and primality of each listed prime) before it is trusted, which
is why provenance is tracked in memory only: entries loaded from a file
count as "ingested" no matter how they were first obtained.

Writes go through a temp file and an atomic rename; all access to the
in-memory map is serialized behind one lock.
"""

from __future__ import annotations

import os
import threading
from dataclasses import dataclass

from . import __version__, numtheory

ENV_CACHE_PATH = "JACOBSTHAL_FACTOR_CACHE"
_HEADER = f"# jacobsthal factor cache v1 (tool {__version__})"


class CacheFormatError(ValueError):
    """Structurally malformed cache or ingest file (bad line syntax)."""


@dataclass(frozen=True)
class FactorCacheEntry:
    value: int
    factors: tuple[tuple[int, int], ...]
    complete: bool
    provenance: str  # "computed" | "ingested"


@dataclass(frozen=True)
class RejectedLine:
    line_no: int
    text: str
    reason: str


def _parse_entry_line(text: str, line_no: int) -> tuple[int, tuple[tuple[int, int], ...]]:
    value_part, sep, factors_part = text.partition("=")
    if not sep:
        raise CacheFormatError(f"line {line_no}: missing '='")
    try:
        value = int(value_part.strip())
    except ValueError:
        raise CacheFormatError(f"line {line_no}: bad value {value_part.strip()!r}") from None
    factors: list[tuple[int, int]] = []
    body = factors_part.strip()
    if body:
        for chunk in body.split(","):
            base, sep2, exp = chunk.partition("^")
            try:
                p = int(base.strip())
                e = int(exp.strip()) if sep2 else 1
            except ValueError:
                raise CacheFormatError(
                    f"line {line_no}: bad factor {chunk.strip()!r}"
                ) from None
            factors.append((p, e))
    return value, tuple(factors)


def _verify_entry(value: int, factors: tuple[tuple[int, int], ...]) -> str | None:
    """None when the entry checks out, else the reason it does not."""
    if value < 1:
        return f"value {value} must be >= 1"
    prev = 0
    acc = 1
    for p, e in factors:
        if p <= prev:
            return f"primes not strictly increasing at {p}"
        prev = p
        if e < 1:
            return f"bad exponent {e} for prime {p}"
        if not numtheory.is_probable_prime(p):
            return f"{p} is not prime"
        acc *= p**e
    if acc != value:
        return f"product {acc} != {value}"
    return None


def _format_entry(entry: FactorCacheEntry) -> str:
    body = ",".join(str(p) if e == 1 else f"{p}^{e}" for p, e in entry.factors)
    return f"{entry.value}={body}"


class FactorCache:
    """In-memory map of complete factorizations, optionally file-backed."""

    def __init__(self, path: str | os.PathLike | None = None):
        self._lock = threading.Lock()
        self._entries: dict[int, FactorCacheEntry] = {}
        self.path = os.fspath(path) if path is not None else None
        if self.path and os.path.exists(self.path):
            self.load(self.path)

    def __len__(self) -> int:
        with self._lock:
            return len(self._entries)

    def get(self, value: int) -> FactorCacheEntry | None:
        with self._lock:
            return self._entries.get(value)

    def record_computed(self, value: int, factors: tuple[tuple[int, int], ...]) -> None:
        """Store a factorization this process derived itself."""
        entry = FactorCacheEntry(value, tuple(factors), True, "computed")
        assert entry.value == numtheory.Factorization(value, entry.factors).reconstruct()
        with self._lock:
            self._entries[value] = entry

    def load(self, path: str | os.PathLike) -> int:
        """Read and verify a cache file; bad lines are a hard error.

        Loaded entries get provenance "ingested": they came from outside
        this process and were accepted only after re-verification.
        """
        with open(path, "r", encoding="utf-8") as f:
            lines = f.readlines()
        count = 0
        for line_no, raw in enumerate(lines, 1):
            text = raw.strip()
            if not text or text.startswith("#"):
                continue
            value, factors = _parse_entry_line(text, line_no)
            reason = _verify_entry(value, factors)
            if reason is not None:
                raise CacheFormatError(f"line {line_no}: {reason}")
            with self._lock:
                self._entries[value] = FactorCacheEntry(value, factors, True, "ingested")
            count += 1
        return count

    def ingest(self, path: str | os.PathLike) -> tuple[int, list[RejectedLine]]:
        """Merge ``VALUE=P^E,...`` lines after verification.

        Semantic failures (wrong product, composite listed as prime, bad
        ordering) reject the single line and are reported; structural
        failures (unparseable line) raise CacheFormatError.
        """
        with open(path, "r", encoding="utf-8") as f:
            lines = f.readlines()
        accepted = 0
        rejected: list[RejectedLine] = []
        for line_no, raw in enumerate(lines, 1):
            text = raw.strip()
            if not text or text.startswith("#"):
                continue
            value, factors = _parse_entry_line(text, line_no)
            reason = _verify_entry(value, factors)
            if reason is not None:
                rejected.append(RejectedLine(line_no, text, reason))
                continue
            with self._lock:
                self._entries[value] = FactorCacheEntry(value, factors, True, "ingested")
            accepted += 1
        return accepted, rejected

    def save(self, path: str | os.PathLike | None = None) -> int:
        """Write all entries sorted by value; temp file plus atomic rename."""
        target = os.fspath(path) if path is not None else self.path
        if target is None:
            raise ValueError("no cache path configured")
        with self._lock:
            entries = sorted(self._entries.values(), key=lambda e: e.value)
        tmp = target + ".tmp"
        with open(tmp, "w", encoding="utf-8", newline="\n") as f:
            f.write(_HEADER + "\n")
            for entry in entries:
                f.write(_format_entry(entry) + "\n")
        os.replace(tmp, target)
        return len(entries)

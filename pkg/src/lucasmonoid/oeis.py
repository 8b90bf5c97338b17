"""OEIS b-file parsing and prefix comparison.

A b-file is plain text with one "index value" pair per line; blank lines and
lines starting with '#' are ignored.
"""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path

from .errors import DomainError


class BFileParseError(DomainError):
    pass


def parse_bfile(source) -> list[tuple[int, int]]:
    """Read (index, value) pairs from a path, file object, or iterable of lines."""
    if isinstance(source, (str, Path)):
        lines = Path(source).read_text(encoding="utf-8").splitlines()
    elif hasattr(source, "read"):
        lines = source.read().splitlines()
    else:
        lines = list(source)
    entries: list[tuple[int, int]] = []
    for lineno, raw in enumerate(lines, 1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        parts = line.split()
        if len(parts) != 2:
            raise BFileParseError(f"line {lineno}: expected 'index value', got {raw!r}")
        try:
            entries.append((int(parts[0]), int(parts[1])))
        except ValueError:
            raise BFileParseError(f"line {lineno}: non-integer field in {raw!r}") from None
    return entries


@dataclass(frozen=True)
class ComparisonReport:
    agreement_length: int
    compared: int
    first_mismatch: tuple[int, int, int] | None  # (b-file index, ours, theirs)

    @property
    def agrees(self) -> bool:
        return self.first_mismatch is None


def compare_prefix(ours: list[int], bfile: list[tuple[int, int]]) -> ComparisonReport:
    """Positional comparison of our sequence prefix with the b-file prefix."""
    n = min(len(ours), len(bfile))
    for i in range(n):
        k, theirs = bfile[i]
        if ours[i] != theirs:
            return ComparisonReport(agreement_length=i, compared=n,
                                    first_mismatch=(k, ours[i], theirs))
    return ComparisonReport(agreement_length=n, compared=n, first_mismatch=None)


def compare_by_index(value_of_index, bfile: list[tuple[int, int]],
                     min_index: int = 1) -> ComparisonReport:
    """Compare b-file entries (k, a(k)) against value_of_index(k).

    Entries with k below min_index are skipped (term sequences start at 1).
    """
    checked = 0
    for k, theirs in bfile:
        if k < min_index:
            continue
        ours = value_of_index(k)
        if ours != theirs:
            return ComparisonReport(agreement_length=checked, compared=checked + 1,
                                    first_mismatch=(k, ours, theirs))
        checked += 1
    return ComparisonReport(agreement_length=checked, compared=checked, first_mismatch=None)

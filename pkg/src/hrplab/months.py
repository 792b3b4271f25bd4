"""Calendar-month labels (``YYYY-MM``) and integer month arithmetic.

All dates in the package are calendar months. Labels are converted to a
flat month index (``year * 12 + month - 1``) for window arithmetic and
back to strings at the boundaries.
"""

from __future__ import annotations

import re

_MONTH_RE = re.compile(r"^(\d{4})-(\d{2})$")


def month_index(label: str) -> int:
    """Convert a ``YYYY-MM`` label to a flat month count."""
    m = _MONTH_RE.match(label)
    if m is None:
        raise ValueError(f"invalid month label {label!r}, expected YYYY-MM")
    year, month = int(m.group(1)), int(m.group(2))
    if not 1 <= month <= 12:
        raise ValueError(f"invalid month label {label!r}: month out of range")
    return year * 12 + (month - 1)


def month_label(index: int) -> str:
    """Inverse of :func:`month_index`."""
    year, month = divmod(index, 12)
    return f"{year:04d}-{month + 1:02d}"


def add_months(label: str, k: int) -> str:
    return month_label(month_index(label) + k)


def month_range(start: str, n: int) -> list[str]:
    """``n`` consecutive month labels starting at ``start``."""
    if n < 0:
        raise ValueError("n must be non-negative")
    base = month_index(start)
    return [month_label(base + i) for i in range(n)]


def is_contiguous(labels: tuple[str, ...] | list[str]) -> bool:
    """True when labels are consecutive calendar months."""
    idx = [month_index(x) for x in labels]
    return all(b - a == 1 for a, b in zip(idx, idx[1:]))

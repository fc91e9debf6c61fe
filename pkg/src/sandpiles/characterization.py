"""Closed-form reachability tests and fixed-point-form enumeration."""
from __future__ import annotations

import re
from dataclasses import dataclass
from math import isqrt
from itertools import repeat
from operator import sub
from typing import Optional, Sequence

from .core import (
    NotAPartition,
    NotUnimodal,
    is_partition,
    is_unimodal,
    reverse,
)

_PATTERN = re.compile(rb"(?=\x00\x01*\x00)")


def _diff_string(p: Sequence[int]) -> bytes:
    """Consecutive differences of a partition, clipped to 0, 1 or 2."""
    return bytes(map(min, map(sub, p, p[1:]), repeat(2)))


def _pattern_starts(p: Sequence[int]) -> list:
    """Start indices of every window ``(x,x,x)`` or ``(x,x,x-1,...,q,q)`` in ``p``.

    Both shapes are "two equal parts, a descent by exactly one per step, then a
    repeated part", i.e. a run ``0 1* 0`` in the consecutive differences.
    """
    return [m.start() for m in _PATTERN.finditer(_diff_string(p))]


def is_spm_reachable(p: Sequence[int]) -> bool:
    """True iff the partition ``p`` is a configuration of the sequential right-only model."""
    p = tuple(p)
    if not is_partition(p):
        raise NotAPartition(f"not a partition: {p}")
    return not _pattern_starts(p)


def spm_fixed_point(n: int) -> tuple:
    """The unique stable partition reachable from ``(n)`` in SPM."""
    if n < 1:
        raise ValueError("n must be positive")
    p = (isqrt(8 * n + 1) - 1) // 2
    q = n - p * (p + 1) // 2
    stair = list(range(p, 0, -1))
    if q:
        stair.insert(p - q, q)
    return tuple(stair)


def _suffix_threshold(u: tuple) -> int:
    """Smallest ``i`` such that ``u[i:]`` is a reachable SPM partition (``u`` unimodal)."""
    if not u:
        return 0
    i = u.index(max(u))
    starts = _pattern_starts(u[i:])
    if starts:
        i += starts[-1] + 1
    return i


def sspm_split(u: Sequence[int]) -> Optional[int]:
    """Leftmost index ``i`` with ``u[i:]`` and ``reverse(u[:i])`` both SPM configurations."""
    u = tuple(u)
    if not is_unimodal(u):
        raise NotUnimodal(f"not unimodal: {u}")
    k = len(u)
    right = _suffix_threshold(u)
    # reverse(u[:i]) reachable  <=>  i <= k - threshold(reverse(u))
    left = k - _suffix_threshold(reverse(u))
    if right <= left:
        return right
    return None


def is_sspm_form(u: Sequence[int]) -> bool:
    """True iff ``u`` is the form of a configuration reachable in SSPM."""
    return sspm_split(u) is not None


def is_stable_form(u: Sequence[int]) -> bool:
    u = tuple(u)
    if not u:
        return False
    padded = (0,) + u + (0,)
    diffs = list(map(sub, padded, padded[1:]))
    return min(diffs) >= -1 and max(diffs) <= 1


def _fixed_form_candidates(n: int):
    """Stable shapes rising to ``h`` and falling back, each flank doubling at most one step."""
    h = isqrt(n)
    while h >= 1 and h * h + 3 * h >= n:
        right_base = h * (h + 1) // 2
        for top in (h - 1, h):
            left_base = top * (top + 1) // 2
            for alpha in range(0, top + 1):
                beta = n - left_base - right_base - alpha
                if beta < 0 or beta > h:
                    continue
                left = list(range(1, top + 1))
                if alpha:
                    left.insert(alpha, alpha)
                right = list(range(h, 0, -1))
                if beta:
                    right.insert(h - beta, beta)
                yield tuple(left + right)
        h -= 1


def enumerate_fixed_point_forms(n: int) -> list:
    """Every fixed-point form of SSPM(n), sorted lexicographically."""
    if n < 1:
        raise ValueError("n must be positive")
    forms = {f for f in set(_fixed_form_candidates(n)) if is_stable_form(f) and is_sspm_form(f)}
    return sorted(forms)


@dataclass(frozen=True)
class SeparatorReport:
    div_values: tuple
    div_value: int
    separators: tuple
    center: Optional[int]


def div_profile(form: Sequence[int]) -> SeparatorReport:
    """Flank weight imbalance at every column (0-based indices).

    ``center`` is the leftmost column of maximal height whose imbalance equals
    the minimum, or ``None`` when no such column exists.
    """
    p = tuple(form)
    if not p:
        raise ValueError("empty form")
    total = sum(p)
    divs, left = [], 0
    for x in p:
        divs.append(abs(total - left - x - left))
        left += x
    best = min(divs)
    h = max(p)
    separators = tuple(i for i, v in enumerate(divs) if v == best)
    center = next((i for i in separators if p[i] == h), None)
    return SeparatorReport(tuple(divs), best, separators, center)

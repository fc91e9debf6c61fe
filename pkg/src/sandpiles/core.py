"""Configurations, evolution rules and basic sequence predicates.

A configuration is a finite window of positive column heights anchored on an
integer line.  ``offset`` is the position of the leftmost column; the initial
single column always sits at position 0.  Outside the window every column has
height 0.
"""
from __future__ import annotations

import enum
import itertools
import operator
from dataclasses import dataclass
from typing import Iterable, Mapping, Sequence, Union

Form = tuple  # bare height sequence, positions dropped


class SandpileError(Exception):
    """Base class for every error raised by this package."""


class NotUnimodal(SandpileError, ValueError):
    pass


class NotAPartition(SandpileError, ValueError):
    pass


class MissingDirection(SandpileError, ValueError):
    """A direction map does not resolve an ambivalent column."""

    def __init__(self, position: int):
        super().__init__(f"no direction given for ambivalent column {position}")
        self.position = position


class Model(enum.Enum):
    SPM = "spm"
    PSPM = "pspm"
    SSPM = "sspm"
    PSSPM = "psspm"

    @property
    def symmetric(self) -> bool:
        return self in (Model.SSPM, Model.PSSPM)

    @property
    def parallel(self) -> bool:
        return self in (Model.PSPM, Model.PSSPM)


class Direction(enum.IntEnum):
    LEFT = -1
    RIGHT = 1

    @property
    def label(self) -> str:
        return "L" if self is Direction.LEFT else "R"


class Greedy(enum.Enum):
    """Resolution of ambivalent columns in a parallel symmetric step."""

    RIGHT = "right"
    LEFT = "left"


Policy = Union[Greedy, Mapping[int, Direction]]


@dataclass(frozen=True, order=True)
class CollapseEvent:
    position: int
    direction: Direction

    @property
    def target(self) -> int:
        return self.position + int(self.direction)


@dataclass(frozen=True)
class Configuration:
    heights: tuple
    offset: int = 0

    def __post_init__(self):
        heights = tuple(int(h) for h in self.heights)
        if any(h < 1 for h in heights):
            raise ValueError(f"column heights must be positive: {heights}")
        object.__setattr__(self, "heights", heights)
        if not heights:
            object.__setattr__(self, "offset", 0)

    @classmethod
    def single(cls, n: int) -> "Configuration":
        """The initial configuration ``(n)`` at position 0."""
        if n < 1:
            raise ValueError("n must be positive")
        return cls((n,), 0)

    @classmethod
    def from_dense(cls, values: Sequence[int], start: int) -> "Configuration":
        """Build from heights at positions ``start, start+1, ...``, trimming zero ends."""
        lo, hi = 0, len(values)
        while lo < hi and values[lo] == 0:
            lo += 1
        while hi > lo and values[hi - 1] == 0:
            hi -= 1
        return cls(tuple(values[lo:hi]), start + lo)

    @property
    def last(self) -> int:
        """Position of the rightmost column."""
        return self.offset + len(self.heights) - 1

    @property
    def positions(self) -> range:
        return range(self.offset, self.offset + len(self.heights))

    def at(self, position: int) -> int:
        i = position - self.offset
        if 0 <= i < len(self.heights):
            return self.heights[i]
        return 0

    def sort_key(self):
        return (self.offset, self.heights)

    def __len__(self):
        return len(self.heights)

    def __str__(self):
        return format_config(self)


def parse_config(text: str) -> Configuration:
    """Parse ``"1,2,4,3,2,1@-2"``; the ``@offset`` suffix is optional."""
    body, sep, off = text.strip().partition("@")
    try:
        heights = tuple(int(x) for x in body.split(",")) if body.strip() else ()
        offset = int(off) if sep else 0
    except ValueError as exc:
        raise ValueError(f"bad configuration literal: {text!r}") from exc
    return Configuration(heights, offset)


def format_config(c: Configuration) -> str:
    body = ",".join(str(h) for h in c.heights)
    return f"{body}@{c.offset}" if c.offset else body


def parse_form(text: str) -> Form:
    try:
        form = tuple(int(x) for x in text.replace(" ", "").split(","))
    except ValueError as exc:
        raise ValueError(f"bad form literal: {text!r}") from exc
    if any(h < 1 for h in form):
        raise ValueError(f"form heights must be positive: {text!r}")
    return form


def format_form(form: Sequence[int]) -> str:
    return ",".join(str(h) for h in form)


# -- sequence predicates ---------------------------------------------------

def _heights(s) -> tuple:
    return s.heights if isinstance(s, Configuration) else tuple(s)


def weight(c) -> int:
    return sum(_heights(c))


def height(c) -> int:
    hs = _heights(c)
    if not hs:
        raise ValueError("height of an empty configuration is undefined")
    return max(hs)


def reverse(s: Sequence[int]) -> tuple:
    return tuple(reversed(tuple(s)))


def is_partition(s) -> bool:
    hs = _heights(s)
    if not hs:
        return True
    return min(hs) >= 1 and (len(hs) == 1 or min(map(operator.sub, hs, hs[1:])) >= 0)


def is_unimodal(s) -> bool:
    hs = _heights(s)
    if hs and min(hs) < 1:
        return False
    # once a strict descent appears, no ascent may follow
    diffs = list(map(operator.sub, hs[1:], hs))
    down = next((i for i, x in enumerate(diffs) if x < 0), len(diffs))
    return not diffs[down:] or max(diffs[down:]) <= 0


def difference_coding(p: Sequence[int]) -> tuple:
    """``d_i = a_i - a_{i+1}`` with ``a_{k+1} = 0``."""
    p = tuple(p)
    if not is_partition(p):
        raise NotAPartition(f"not a partition: {p}")
    return tuple(a - b for a, b in zip(p, p[1:] + (0,)))


def from_difference_coding(d: Sequence[int]) -> tuple:
    """Inverse of :func:`difference_coding` (suffix sums)."""
    d = tuple(d)
    if any(x < 0 for x in d):
        raise ValueError(f"differences must be non-negative: {d}")
    out = list(itertools.accumulate(reversed(d)))
    out.reverse()
    if out and out[-1] < 1:
        raise ValueError(f"last difference must be positive: {d}")
    return tuple(out)


def normalize(c: Configuration) -> Form:
    return c.heights


def translate(c: Configuration, k: int) -> Configuration:
    return Configuration(c.heights, c.offset + k)


def mirror(c: Configuration) -> Configuration:
    """Reflect through position 0."""
    if not c.heights:
        return c
    return Configuration(reverse(c.heights), -c.last)


# -- rules -----------------------------------------------------------------

def collapsible(c: Configuration, model: Model) -> list:
    """All legal single-grain moves under ``model``, ordered by (position, direction)."""
    hs = (0,) + c.heights + (0,)
    events = []
    for i, pos in enumerate(c.positions, start=1):
        if model.symmetric and hs[i] - hs[i - 1] >= 2:
            events.append(CollapseEvent(pos, Direction.LEFT))
        if hs[i] - hs[i + 1] >= 2:
            events.append(CollapseEvent(pos, Direction.RIGHT))
    return events


def is_fixed_point(c: Configuration, model: Model) -> bool:
    return not collapsible(c, model)


def apply_moves(c: Configuration, moves: Iterable[CollapseEvent]) -> Configuration:
    """Apply moves simultaneously; each is decided on the heights of ``c``."""
    start = c.offset - 1
    dense = [0, *c.heights, 0]
    for ev in moves:
        dense[ev.position - start] -= 1
        dense[ev.target - start] += 1
    if any(h < 0 for h in dense):
        raise ValueError(f"illegal move set on {c}")
    out = Configuration.from_dense(dense, start)
    if weight(out) != weight(c):
        raise ValueError(f"move set on {c} leaves an interior gap")
    return out


def _split(events):
    """Group events by column into forced moves and ambivalent positions."""
    by_pos: dict = {}
    for ev in events:
        by_pos.setdefault(ev.position, []).append(ev)
    forced, ambivalent = [], []
    for pos in sorted(by_pos):
        evs = by_pos[pos]
        if len(evs) == 1:
            forced.append(evs[0])
        else:
            ambivalent.append(pos)
    return forced, ambivalent


def _dedup(configs):
    seen, out = set(), []
    for x in configs:
        if x not in seen:
            seen.add(x)
            out.append(x)
    return out


def spm_successors(c: Configuration) -> list:
    return _dedup(apply_moves(c, [ev]) for ev in collapsible(c, Model.SPM))


def sspm_successors(c: Configuration) -> list:
    if not is_unimodal(c):
        raise NotUnimodal(f"not unimodal: {c}")
    return _dedup(apply_moves(c, [ev]) for ev in collapsible(c, Model.SSPM))


def pspm_step(c: Configuration) -> Configuration:
    events = collapsible(c, Model.PSPM)
    return apply_moves(c, events) if events else c


def psspm_move_sets(c: Configuration) -> list:
    """Every legal simultaneous move set, ambivalent columns by position with Left first."""
    forced, ambivalent = _split(collapsible(c, Model.PSSPM))
    if not forced and not ambivalent:
        return []
    sets = []
    for choice in itertools.product((Direction.LEFT, Direction.RIGHT), repeat=len(ambivalent)):
        sets.append(forced + [CollapseEvent(p, d) for p, d in zip(ambivalent, choice)])
    return sets


def psspm_successors(c: Configuration) -> list:
    if not is_unimodal(c):
        raise NotUnimodal(f"not unimodal: {c}")
    return _dedup(apply_moves(c, moves) for moves in psspm_move_sets(c))


def psspm_policy_moves(c: Configuration, policy: Policy) -> list:
    """The move set that ``policy`` selects; empty when ``c`` is stable."""
    forced, ambivalent = _split(collapsible(c, Model.PSSPM))
    moves = list(forced)
    if not isinstance(policy, Greedy):
        for ev in forced:
            want = policy.get(ev.position)
            if want is not None and want != ev.direction:
                raise ValueError(
                    f"column {ev.position} can only collapse {ev.direction.name}, not {want.name}"
                )
    for pos in ambivalent:
        if policy is Greedy.RIGHT:
            d = Direction.RIGHT
        elif policy is Greedy.LEFT:
            d = Direction.LEFT
        else:
            if pos not in policy:
                raise MissingDirection(pos)
            d = Direction(policy[pos])
        moves.append(CollapseEvent(pos, d))
    moves.sort()
    return moves


def psspm_step_policy(c: Configuration, policy: Policy) -> Configuration:
    moves = psspm_policy_moves(c, policy)
    return apply_moves(c, moves) if moves else c


def successors(c: Configuration, model: Model) -> list:
    """Distinct one-step successors of ``c``; empty for a fixed point."""
    if model is Model.SPM:
        return spm_successors(c)
    if model is Model.PSPM:
        return [pspm_step(c)] if collapsible(c, model) else []
    if model is Model.SSPM:
        return sspm_successors(c)
    return psspm_successors(c)

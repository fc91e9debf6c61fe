"""Atom, Alternating and Pseudo-Alternating procedures, and the constructive path.

Step indices are 1-based throughout: step 1 is odd.
"""
from __future__ import annotations

import enum
from dataclasses import dataclass, field
from math import isqrt
from typing import Optional, Sequence, Union

from .characterization import div_profile, enumerate_fixed_point_forms
from .core import (
    CollapseEvent,
    Configuration,
    Direction,
    Model,
    SandpileError,
    apply_moves,
    collapsible,
    difference_coding,
    height,
    is_partition,
    mirror,
    NotAPartition,
    reverse,
    psspm_policy_moves,
)


class AlternationStalled(SandpileError):
    def __init__(self, step: int, config: Configuration):
        super().__init__(f"column 0 cannot collapse at alternating step {step} on {config}")
        self.step = step
        self.config = config


class PseudoStalled(SandpileError):
    def __init__(self, step: int, config: Configuration):
        super().__init__(f"column 0 cannot collapse at pseudo-alternating step {step} on {config}")
        self.step = step
        self.config = config


class AmbivalentColumn(SandpileError):
    def __init__(self, position: int, step: int):
        super().__init__(f"column {position} is collapsible on both sides at finishing step {step}")
        self.position = position
        self.step = step


class NotAFixedPointForm(SandpileError, ValueError):
    pass


class ConstructionError(SandpileError):
    """A precondition of the three-phase construction failed."""


class Phase(enum.Enum):
    PSEUDO_ALTERNATING = "PseudoAlternating"
    ALTERNATING = "Alternating"
    DETERMINISTIC = "Deterministic"


# -- Atom Procedure ----------------------------------------------------------

def _atom_step(a: list, add: bool) -> list:
    x = a + [0]
    new = x[:]
    for i in range(len(a)):
        if x[i] - x[i + 1] >= 2:
            new[i] -= 1
            new[i + 1] += 1
    if add:
        new[0] += 1
    while new and new[-1] == 0:
        new.pop()
    return new


def atom_procedure(a: Sequence[int], t: int) -> tuple:
    """Parallel right rule for ``t`` steps, plus one grain on the first column at odd steps.

    The injected grain is not visible to the collapses of its own step.
    """
    a = list(a)
    if a and not is_partition(a):
        raise NotAPartition(f"not a partition: {tuple(a)}")
    if t < 0:
        raise ValueError("t must be non-negative")
    for step in range(1, t + 1):
        a = _atom_step(a, add=step % 2 == 1)
    return tuple(a)


def stair(k: int) -> tuple:
    return tuple(range(k, 0, -1))


def atom_closed_form_literal(k: int, t: int) -> Optional[tuple]:
    """The d-coding of ``atom^t(stair(k))`` taken literally from the published closed form.

    Returns ``None`` when an exponent is negative or fractional, i.e. the
    literal expression does not denote a sequence.
    """
    def rep(block, e):
        if e < 0 or e != int(e):
            raise ValueError
        return tuple(block) * int(e)

    try:
        if t <= k:
            if t % 2 == 0:
                return rep((0, 2), t / 2) + rep((1,), k - t)
            return (2,) + rep((0, 2), (t - 1) / 2) + rep((1,), k - t)
        if t % 2 == 1:
            return (0,) + rep((2, 0), k + 1 - (t - 1) / 2) + rep((1,), t - k)
        return rep((2, 0), k + 1 - t / 2) + rep((1,), t - k)
    except ValueError:
        return None


def atom_closed_form_coding(k: int, t: int) -> tuple:
    """The d-coding of ``atom^t(stair(k))`` in closed form.

    Agrees with :func:`atom_closed_form_literal` for ``t <= k``.  For ``t > k`` the
    literal form swaps the parities and is one ``(2,0)`` block too long; this
    is the corrected form, which has length ``k+1``.
    """
    if not 0 <= t <= 2 * k + 1:
        raise ValueError(f"t must lie in [0, {2 * k + 1}]")
    if t <= k:
        return atom_closed_form_literal(k, t)
    if t % 2 == 1:
        return (2, 0) * (k - (t - 1) // 2) + (1,) * (t - k)
    return (0,) + (2, 0) * (k - t // 2) + (1,) * (t - k)


def atom_form_check(k: int, t: int) -> bool:
    """Simulated ``atom^t(stair(k))`` matches the closed-form coding and height."""
    if k < 1:
        raise ValueError("k must be positive")
    if not 0 <= t <= 2 * k + 1:
        raise ValueError(f"t must lie in [0, {2 * k + 1}]")
    a = atom_procedure(stair(k), t)
    want_height = k + 1 if t % 2 else k
    return height(a) == want_height and difference_coding(a) == atom_closed_form_coding(k, t)


# -- Alternating and Pseudo-Alternating --------------------------------------

def _alternating_direction(local_step: int) -> Direction:
    return Direction.RIGHT if local_step % 2 == 1 else Direction.LEFT


def _center_step(c: Configuration, direction: Direction):
    """One PSSPM step with column 0 collapsing towards ``direction``; ``None`` if it cannot."""
    if c.at(0) - c.at(int(direction)) < 2:
        return None
    moves = psspm_policy_moves(c, {0: direction})
    return apply_moves(c, moves)


def _as_config(c: Union[int, Configuration]) -> Configuration:
    return Configuration.single(c) if isinstance(c, int) else c


def alternating_run(c: Configuration, t: int) -> list:
    """Configurations after each of ``t`` Alternating steps (initial excluded)."""
    out = []
    for step in range(1, t + 1):
        nxt = _center_step(c, _alternating_direction(step))
        if nxt is None:
            raise AlternationStalled(step, c)
        out.append(nxt)
        c = nxt
    return out


def alternating_procedure(c: Union[int, Configuration], t: int) -> Configuration:
    """``t`` steps where column 0 collapses right at odd steps and left at even steps."""
    c = _as_config(c)
    run = alternating_run(c, t)
    return run[-1] if run else c


def max_alternating_steps(c: Union[int, Configuration]) -> int:
    c = _as_config(c)
    step = 0
    while True:
        nxt = _center_step(c, _alternating_direction(step + 1))
        if nxt is None:
            return step
        c, step = nxt, step + 1


def pseudo_direction(step: int) -> Direction:
    """Column-0 direction at global step ``step``: Alternating restarts after each square."""
    i = isqrt(step - 1)
    return _alternating_direction(step - i * i)


def pseudo_alternating_run(c: Union[int, Configuration], t: int) -> list:
    c = _as_config(c)
    out = []
    for step in range(1, t + 1):
        nxt = _center_step(c, pseudo_direction(step))
        if nxt is None:
            raise PseudoStalled(step, c)
        out.append(nxt)
        c = nxt
    return out


def pseudo_alternating(c: Union[int, Configuration], t: int) -> Configuration:
    """``t`` Pseudo-Alternating steps, from ``(c)`` when given an integer."""
    c = _as_config(c)
    run = pseudo_alternating_run(c, t)
    return run[-1] if run else c


def max_pseudo_alternating_steps(c: Union[int, Configuration]) -> int:
    c = _as_config(c)
    step = 0
    while True:
        nxt = _center_step(c, pseudo_direction(step + 1))
        if nxt is None:
            return step
        c, step = nxt, step + 1


def centered_stair(n: int, k: int) -> Configuration:
    """``(1,...,k-1, n-k^2, k,...,1)`` with the tall column at position 0."""
    left = tuple(range(1, k))
    return Configuration(left + (n - k * k,) + stair(k), -len(left))


# -- deterministic finish ----------------------------------------------------

def _finish_moves(c: Configuration, step: int) -> list:
    events = collapsible(c, Model.PSSPM)
    seen = set()
    for ev in events:
        if ev.position in seen:
            raise AmbivalentColumn(ev.position, step)
        seen.add(ev.position)
    return events


def deterministic_run(c: Configuration) -> list:
    out = []
    step = 1
    while True:
        moves = _finish_moves(c, step)
        if not moves:
            return out
        c = apply_moves(c, moves)
        out.append(c)
        step += 1


def deterministic_finish(c: Configuration):
    """Iterate forced parallel steps to a fixed point; returns ``(config, steps)``."""
    run = deterministic_run(c)
    return (run[-1] if run else c), len(run)


# -- three-phase construction ------------------------------------------------

@dataclass(frozen=True)
class TraceStep:
    config: Configuration
    phase: Optional[Phase] = None
    direction: Optional[Direction] = None


@dataclass
class ProcedureTrace:
    n: int
    target: tuple
    steps: list = field(default_factory=list)
    mirrored: bool = False

    @property
    def length(self) -> int:
        return len(self.steps) - 1

    @property
    def final(self) -> Configuration:
        return self.steps[-1].config

    def phase_lengths(self) -> dict:
        counts = {p: 0 for p in Phase}
        for s in self.steps[1:]:
            counts[s.phase] += 1
        return counts


def _center_direction(before: Configuration, after: Configuration) -> Optional[Direction]:
    """Direction in which column 0 collapsed between two consecutive configurations."""
    if before.at(0) - after.at(0) != 1:
        return None
    for d in (Direction.LEFT, Direction.RIGHT):
        if after.at(int(d)) > before.at(int(d)) and before.at(0) - before.at(int(d)) >= 2:
            return d
    return None


def _annotate(configs: list, phase: Phase, prev: Configuration) -> list:
    out = []
    for c in configs:
        out.append(TraceStep(c, phase, _center_direction(prev, c)))
        prev = c
    return out


def _mirror_step(s: TraceStep) -> TraceStep:
    d = None if s.direction is None else Direction(-int(s.direction))
    return TraceStep(mirror(s.config), s.phase, d)


def construct_path(n: int, target: Sequence[int]) -> ProcedureTrace:
    """A PSSPM evolution from ``(n)`` to a fixed point of form ``target``.

    Pseudo-Alternating for ``d^2`` steps, Alternating for ``n - h - d^2``
    steps, then forced parallel steps to the fixed point, where ``h`` is the
    height of the target and ``d`` its minimal flank imbalance.
    """
    target = tuple(target)
    if n < 1 or target not in enumerate_fixed_point_forms(n):
        raise NotAFixedPointForm(f"{target} is not a fixed-point form of weight {n}")
    report = div_profile(target)
    c = report.center
    heavier_left = sum(target[:c]) > sum(target[c + 1:])
    oriented = reverse(target) if heavier_left else target
    if heavier_left:
        report = div_profile(oriented)
    d, h = report.div_value, max(target)
    alt_steps = n - h - d * d
    if alt_steps < 0:
        raise ConstructionError(f"negative alternating phase length for {target}")

    start = Configuration.single(n)
    steps = [TraceStep(start)]
    phase1 = pseudo_alternating_run(start, d * d)
    steps += _annotate(phase1, Phase.PSEUDO_ALTERNATING, start)
    q = steps[-1].config
    phase2 = alternating_run(q, alt_steps)
    steps += _annotate(phase2, Phase.ALTERNATING, q)
    r = steps[-1].config
    steps += _annotate(deterministic_run(r), Phase.DETERMINISTIC, r)

    if heavier_left:
        steps = [_mirror_step(s) for s in steps]
    trace = ProcedureTrace(n, target, steps, mirrored=heavier_left)
    if trace.final.heights != target:
        raise ConstructionError(f"construction reached {trace.final.heights}, not {target}")
    return trace


def swapped_phase_form(n: int, target: Sequence[int]) -> tuple:
    """Run the Alternating phase before the Pseudo-Alternating one, then finish.

    The Pseudo-Alternating phase runs as far as it can (at most ``d^2``
    steps).  Returns the form reached.
    """
    target = tuple(target)
    report = div_profile(target)
    d, h = report.div_value, max(target)
    c = alternating_procedure(Configuration.single(n), n - h - d * d)
    k = min(d * d, max_pseudo_alternating_steps(c))
    c = pseudo_alternating(c, k)
    final, _ = deterministic_finish(c)
    return final.heights

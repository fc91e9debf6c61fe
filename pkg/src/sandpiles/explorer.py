"""Exhaustive configuration-space exploration and large-n experiments."""
from __future__ import annotations

import logging
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from math import isqrt
from typing import Iterable, Optional

import numpy as np

from .characterization import enumerate_fixed_point_forms
from .core import (
    Configuration,
    Greedy,
    Model,
    SandpileError,
    is_fixed_point,
    pspm_step,
    psspm_step_policy,
    successors,
)

log = logging.getLogger(__name__)

DEFAULT_BUDGET = 5_000_000


class BudgetExceeded(SandpileError):
    def __init__(self, nodes: int):
        super().__init__(f"exploration exceeded the node budget ({nodes} nodes)")
        self.nodes = nodes


@dataclass
class SpaceGraph:
    model: Model
    n: int
    forms: bool
    edges: dict = field(default_factory=dict)

    @property
    def nodes(self) -> list:
        return sorted(self.edges, key=Configuration.sort_key)

    @property
    def fixed(self) -> list:
        return [c for c in self.nodes if not self.edges[c]]

    @property
    def node_count(self) -> int:
        return len(self.edges)

    @property
    def edge_count(self) -> int:
        return sum(len(v) for v in self.edges.values())

    @property
    def mode(self) -> str:
        return "forms" if self.forms else "positional"


def _expand(args):
    c, model, forms = args
    succ = successors(c, model)
    if forms:
        succ = {Configuration(s.heights) for s in succ}
    return tuple(sorted(set(succ), key=Configuration.sort_key))


def explore(
    n: int,
    model: Model,
    forms: bool = False,
    budget: int = DEFAULT_BUDGET,
    workers: int = 1,
) -> SpaceGraph:
    """Level-synchronous BFS closure of ``(n)`` under ``model``.

    With ``forms`` set, nodes are translation classes stored at offset 0.
    Frontier expansion is farmed out to ``workers`` processes; merging is
    sequential in canonical order, so the graph does not depend on scheduling.
    """
    if n < 1:
        raise ValueError("n must be positive")
    root = Configuration.single(n)
    graph = SpaceGraph(model, n, forms)
    frontier = [root]
    seen = {root}
    pool = ProcessPoolExecutor(workers) if workers > 1 else None
    try:
        while frontier:
            jobs = [(c, model, forms) for c in frontier]
            if pool is None:
                results = map(_expand, jobs)
            else:
                results = pool.map(_expand, jobs, chunksize=max(1, len(jobs) // (4 * workers)))
            nxt = []
            for c, succ in zip(frontier, results):
                graph.edges[c] = succ
                for s in succ:
                    if s not in seen:
                        seen.add(s)
                        nxt.append(s)
                if len(seen) > budget:
                    raise BudgetExceeded(len(seen))
            frontier = sorted(nxt, key=Configuration.sort_key)
    finally:
        if pool is not None:
            pool.shutdown()
    return graph


def fixed_point_forms(g: SpaceGraph) -> list:
    return sorted({c.heights for c in g.fixed})


@dataclass
class TheoremReport:
    n: int
    sspm_forms: list
    psspm_forms: list
    closed_forms: list
    sspm_fixed: int
    psspm_fixed: int

    @property
    def forms_equal(self) -> bool:
        return self.sspm_forms == self.psspm_forms == self.closed_forms

    @property
    def count_ok(self) -> bool:
        return len(self.closed_forms) == isqrt(self.n)

    @property
    def containment_ok(self) -> bool:
        return self.psspm_fixed <= self.sspm_fixed

    @property
    def ok(self) -> bool:
        return self.forms_equal and self.count_ok and self.containment_ok


def verify_main_theorem(n: int, budget: int = DEFAULT_BUDGET, workers: int = 1) -> TheoremReport:
    """Compare fixed-point forms of SSPM(n), PSSPM(n) and the closed-form enumeration."""
    sspm = explore(n, Model.SSPM, budget=budget, workers=workers)
    psspm = explore(n, Model.PSSPM, budget=budget, workers=workers)
    return TheoremReport(
        n,
        fixed_point_forms(sspm),
        fixed_point_forms(psspm),
        enumerate_fixed_point_forms(n),
        len(sspm.fixed),
        len(psspm.fixed),
    )


# -- deterministic runs --------------------------------------------------------

def iterate_to_fixation(c: Configuration, model: Model, policy: Greedy = Greedy.RIGHT):
    """Run a deterministic model to its fixed point; returns ``(config, steps)``."""
    steps = 0
    while not is_fixed_point(c, model):
        if model is Model.PSPM:
            c = pspm_step(c)
        elif model is Model.PSSPM:
            c = psspm_step_policy(c, policy)
        else:
            raise ValueError(f"{model.name} is not deterministic")
        steps += 1
    return c, steps


def _dense_buffer(n: int):
    # a parallel step widens the window by at most one column per side, and
    # stable shapes of weight n are far narrower than 4*sqrt(n)
    margin = 4 * isqrt(n) + 8
    buf = np.zeros(2 * margin + 1, dtype=np.int64)
    buf[margin] = n
    return buf, margin


def _to_config(buf: np.ndarray, origin: int) -> Configuration:
    return Configuration.from_dense(buf.tolist(), -origin)


def fast_fixation(n: int, model: Model, policy: Greedy = Greedy.RIGHT):
    """Vectorised :func:`iterate_to_fixation` from ``(n)``; returns ``(config, steps)``."""
    if model not in (Model.PSPM, Model.PSSPM):
        raise ValueError(f"{model.name} is not deterministic")
    a, origin = _dense_buffer(n)
    steps = 0
    while True:
        # drop_right[i] belongs to column i, drop_left[i] to column i+1
        drop_right = a[:-1] - a[1:] >= 2
        drop_left = None
        if model is Model.PSSPM:
            drop_left = a[1:] - a[:-1] >= 2
            if policy is Greedy.RIGHT:
                drop_left[:-1] &= ~drop_right[1:]
            else:
                drop_right[1:] &= ~drop_left[:-1]
        if not drop_right.any() and (drop_left is None or not drop_left.any()):
            return _to_config(a, origin), steps
        r = drop_right.astype(np.int64)
        a[:-1] -= r
        a[1:] += r
        if drop_left is not None:
            lft = drop_left.astype(np.int64)
            a[1:] -= lft
            a[:-1] += lft
        if a[0] or a[-1]:
            raise RuntimeError("dense buffer too small")
        steps += 1


@dataclass(frozen=True)
class TransientRow:
    n: int
    steps: int

    @property
    def per_n(self) -> float:
        return self.steps / self.n


def transient_stats(n_list: Iterable[int], model: Model = Model.PSPM, policy: Greedy = Greedy.RIGHT) -> list:
    rows = []
    for n in n_list:
        _, steps = fast_fixation(n, model, policy)
        log.info("%s n=%d steps=%d", model.name, n, steps)
        rows.append(TransientRow(n, steps))
    return rows


@dataclass(frozen=True)
class ConjectureRow:
    k: int
    n: int
    d_n: int
    plateau_free: bool
    heights: tuple

    @property
    def ratio(self) -> float:
        return self.d_n / isqrt(self.n)

    @property
    def predicted(self) -> int:
        return 11 * self.k + 4


def right_furthest_fixed_point(n: int) -> Configuration:
    c, _ = fast_fixation(n, Model.PSSPM, Greedy.RIGHT)
    return c


def conjecture_row(k: int, n: Optional[int] = None) -> ConjectureRow:
    n = (8 * k + 4) ** 2 if n is None else n
    c = right_furthest_fixed_point(n)
    hs = c.heights
    plateau_free = all(a != b for a, b in zip(hs, hs[1:]))
    return ConjectureRow(k, n, c.last, plateau_free, hs)


def conjecture_scan(k_max: int) -> list:
    if k_max < 1:
        raise ValueError("k_max must be positive")
    return [conjecture_row(k) for k in range(1, k_max + 1)]

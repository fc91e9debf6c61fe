"""Independent brute-force oracles shared by the test modules.

Nothing here imports the rule implementations under test: configurations are
plain ``{position: height}`` dicts and moves are applied one grain at a time.
"""
from collections import deque

import pytest

from sandpiles import Configuration


def partitions(n, largest=None):
    largest = n if largest is None else largest
    if n == 0:
        yield ()
        return
    for first in range(min(n, largest), 0, -1):
        for rest in partitions(n - first, first):
            yield (first,) + rest


def compositions(n):
    if n == 0:
        yield ()
        return
    for first in range(1, n + 1):
        for rest in compositions(n - first):
            yield (first,) + rest


def naive_unimodal(s):
    peak = s.index(max(s)) if s else 0
    return all(a <= b for a, b in zip(s[:peak], s[1:peak + 1])) and all(
        a >= b for a, b in zip(s[peak:], s[peak + 1:])
    )


def to_dict(c):
    return {p: h for p, h in zip(c.positions, c.heights)}


def from_dict(d):
    cols = sorted(p for p, h in d.items() if h)
    if not cols:
        return Configuration(())
    lo, hi = cols[0], cols[-1]
    return Configuration(tuple(d.get(p, 0) for p in range(lo, hi + 1)), lo)


def naive_moves(d, symmetric):
    out = []
    for p in sorted(d):
        if symmetric and d[p] - d.get(p - 1, 0) >= 2:
            out.append((p, -1))
        if d[p] - d.get(p + 1, 0) >= 2:
            out.append((p, 1))
    return out


def naive_apply(d, moves):
    new = dict(d)
    for p, step in moves:
        new[p] -= 1
        new[p + step] = new.get(p + step, 0) + 1
    return new


def naive_sequential_space(n, symmetric):
    """BFS over single-move transitions; returns (nodes, sinks) as (offset, heights)."""
    root = ((0, (n,)))
    seen, sinks, queue = {root}, set(), deque([root])
    while queue:
        off, hs = queue.popleft()
        d = {off + i: h for i, h in enumerate(hs)}
        moves = naive_moves(d, symmetric)
        if not moves:
            sinks.add((off, hs))
        for mv in moves:
            c = from_dict(naive_apply(d, [mv]))
            key = (c.offset, c.heights)
            if key not in seen:
                seen.add(key)
                queue.append(key)
    return seen, sinks


@pytest.fixture(scope="session")
def sequential_spaces():
    """Cache of naive SPM/SSPM spaces keyed by (n, symmetric)."""
    cache = {}

    def get(n, symmetric):
        if (n, symmetric) not in cache:
            cache[n, symmetric] = naive_sequential_space(n, symmetric)
        return cache[n, symmetric]

    return get

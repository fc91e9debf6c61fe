"""Deterministic serialisation of space graphs, traces and tables."""
from __future__ import annotations

import csv
import io
import json

from .core import SandpileError, format_config, format_form
from .explorer import SpaceGraph
from .procedures import ProcedureTrace

GRAPH_FORMATS = ("dot", "json", "csv", "text")
TRACE_FORMATS = ("json", "text")


class UnknownFormat(SandpileError, ValueError):
    def __init__(self, fmt: str):
        super().__init__(f"unknown format: {fmt!r}")
        self.fmt = fmt


def _label(c, forms: bool) -> str:
    return format_form(c.heights) if forms else format_config(c)


def export_graph(g: SpaceGraph, fmt: str) -> str:
    if fmt not in GRAPH_FORMATS:
        raise UnknownFormat(fmt)
    nodes = g.nodes
    index = {c: i for i, c in enumerate(nodes)}
    fixed = set(g.fixed)
    labels = [_label(c, g.forms) for c in nodes]

    if fmt == "dot":
        lines = [f'digraph "{g.model.name}({g.n})" {{']
        for i, c in enumerate(nodes):
            shape = "doublecircle" if c in fixed else "ellipse"
            lines.append(f'  n{i} [label="{labels[i]}", shape={shape}];')
        for c in nodes:
            for s in g.edges[c]:
                lines.append(f"  n{index[c]} -> n{index[s]};")
        lines.append("}")
        return "\n".join(lines) + "\n"

    if fmt == "json":
        doc = {
            "model": g.model.name,
            "n": g.n,
            "mode": g.mode,
            "nodes": labels,
            "edges": [[index[c], index[s]] for c in nodes for s in g.edges[c]],
            "fixed": [index[c] for c in nodes if c in fixed],
            "node_count": g.node_count,
            "edge_count": g.edge_count,
        }
        return json.dumps(doc, sort_keys=True) + "\n"

    if fmt == "csv":
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["id", "config", "offset", "weight", "out_degree", "fixed"])
        for i, c in enumerate(nodes):
            w.writerow([i, labels[i], c.offset, sum(c.heights), len(g.edges[c]), int(c in fixed)])
        return buf.getvalue()

    return "".join(f"{'*' if c in fixed else ' '} {labels[i]}\n" for i, c in enumerate(nodes))


def trace_records(trace: ProcedureTrace) -> list:
    return [
        {
            "index": i,
            "phase": s.phase.value if s.phase else None,
            "direction": s.direction.label if s.direction else None,
            "heights": list(s.config.heights),
            "offset": s.config.offset,
        }
        for i, s in enumerate(trace.steps)
    ]


def export_trace(trace: ProcedureTrace, fmt: str) -> str:
    if fmt not in TRACE_FORMATS:
        raise UnknownFormat(fmt)
    records = trace_records(trace)
    if fmt == "json":
        return "".join(json.dumps(r, sort_keys=True) + "\n" for r in records)
    out = []
    for r, s in zip(records, trace.steps):
        out.append(f"{r['index']:>4} {r['phase'] or '-':<17} {r['direction'] or '-'} {format_config(s.config)}\n")
    return "".join(out)


def rows_to_csv(header, rows) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    w.writerows(rows)
    return buf.getvalue()

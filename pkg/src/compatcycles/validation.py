"""Input coercion shared by the estimator and the command line."""

from __future__ import annotations

import json
from pathlib import Path
from typing import Iterable, Sequence

from .graphs import CycleOrder, GraphError, TwoRegularGraph, canonical_cycle, parse_cycle, parse_graph
from .kinematics import KinematicPoint, as_kinematics


def check_cycle(obj, n: int | None = None) -> CycleOrder:
    """A ``CycleOrder`` from a ``CycleOrder``, a label string or a label sequence."""
    if isinstance(obj, CycleOrder):
        c = obj
    elif isinstance(obj, str):
        c = parse_cycle(obj)
    elif isinstance(obj, Sequence):
        c = canonical_cycle(tuple(int(x) for x in obj))
    else:
        raise TypeError(f"cannot interpret {type(obj).__name__} as a cycle")
    if n is not None and c.n != n:
        raise GraphError(f"cycle has {c.n} labels, expected {n}")
    return c


def check_graph(obj, n: int | None = None) -> TwoRegularGraph:
    """A ``TwoRegularGraph`` from a graph, a cycle, cycle notation or a bare label sequence."""
    if isinstance(obj, TwoRegularGraph):
        G = obj
    elif isinstance(obj, CycleOrder):
        G = obj.as_graph()
    elif isinstance(obj, str):
        G = parse_graph(obj, n) if "(" in obj else parse_cycle(obj).as_graph()
    elif isinstance(obj, Sequence):
        G = check_cycle(obj).as_graph()
    else:
        raise TypeError(f"cannot interpret {type(obj).__name__} as a 2-regular graph")
    if n is not None and G.n != n:
        raise GraphError(f"graph has {G.n} labels, expected {n}")
    return G


def check_graphs(items: Iterable, n: int | None = None) -> list[TwoRegularGraph]:
    out = [check_graph(it, n) for it in items]
    if not out:
        raise ValueError("expected at least one graph")
    return out


def check_kinematics(obj) -> KinematicPoint:
    """A ``KinematicPoint`` from a point, its JSON dict, a matrix, or a JSON file path."""
    if isinstance(obj, (str, Path)):
        with open(obj) as fh:
            obj = json.load(fh)
    return as_kinematics(obj)

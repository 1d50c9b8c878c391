"""Small directed-graph helpers shared by the network and logic-model modules."""

from __future__ import annotations

from typing import Sequence, Tuple


class CycleError(ValueError):
    """The graph contains a directed cycle."""


def topological_order(names: Sequence[str], edges: Sequence[Tuple[str, str]]) -> list[str]:
    """Kahn's algorithm; ties broken by declaration order so results are stable.

    Raises CycleError naming the nodes left on a cycle.
    """
    index = {n: i for i, n in enumerate(names)}
    indegree = {n: 0 for n in names}
    outgoing: dict[str, list[str]] = {n: [] for n in names}
    for src, dst in edges:
        outgoing[src].append(dst)
        indegree[dst] += 1

    ready = sorted((n for n in names if indegree[n] == 0), key=index.__getitem__)
    order: list[str] = []
    while ready:
        node = ready.pop(0)
        order.append(node)
        inserted = False
        for dst in outgoing[node]:
            indegree[dst] -= 1
            if indegree[dst] == 0:
                ready.append(dst)
                inserted = True
        if inserted:
            ready.sort(key=index.__getitem__)
    if len(order) != len(names):
        stuck = sorted(set(names) - set(order), key=index.__getitem__)
        raise CycleError(f"cycle involving nodes: {', '.join(stuck)}")
    return order

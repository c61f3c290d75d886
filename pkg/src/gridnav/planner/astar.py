"""4-connected A* with lexicographic (length, turns) cost.

Among all minimum-length paths the search returns one with the fewest
heading changes, exactly (not heuristically): the search state carries the
arrival heading and costs compare as (cells, turns) tuples with the
admissible Manhattan heuristic on the length component only.
"""
from __future__ import annotations

import heapq
from typing import Optional

from ..geometry import GridIndex
from .grid import Direction, PlanningMap


def a_star(pmap: PlanningMap, start: GridIndex, goal: GridIndex) -> Optional[list[GridIndex]]:
    """Shortest 4-connected path honoring walls and directed walls.

    Returns the cell list from start to goal, or None when the goal is
    unreachable. Tie order is deterministic (fixed N/E/S/W expansion).
    """
    if not pmap.is_free(start) or not pmap.is_free(goal):
        return None
    if start == goal:
        return [start]

    def h(cell: GridIndex) -> int:
        return abs(cell.row - goal.row) + abs(cell.col - goal.col)

    counter = 0
    open_heap: list[tuple[int, int, int, int, GridIndex, Optional[Direction]]] = []
    heapq.heappush(open_heap, (h(start), 0, 0, counter, start, None))
    best: dict[tuple[GridIndex, Optional[Direction]], tuple[int, int]] = {(start, None): (0, 0)}
    parent: dict[tuple[GridIndex, Optional[Direction]],
                 tuple[GridIndex, Optional[Direction]]] = {}

    while open_heap:
        f_len, f_turns, g_len, _, cell, heading = heapq.heappop(open_heap)
        g = best.get((cell, heading))
        if g is None or (g_len, f_turns) != g:
            continue
        if cell == goal:
            path = [cell]
            key = (cell, heading)
            while key in parent:
                key = parent[key]
                path.append(key[0])
            path.reverse()
            return path
        g_turns = f_turns
        for d in Direction:
            nxt = GridIndex(cell.row + d.step[0], cell.col + d.step[1])
            if not pmap.can_enter(nxt, d):
                continue
            n_len = g_len + 1
            n_turns = g_turns + (0 if heading is None or d == heading else 1)
            key = (nxt, d)
            prev = best.get(key)
            if prev is not None and prev <= (n_len, n_turns):
                continue
            best[key] = (n_len, n_turns)
            parent[key] = (cell, heading)
            counter += 1
            heapq.heappush(open_heap, (n_len + h(nxt), n_turns, n_len, counter, nxt, d))
    return None

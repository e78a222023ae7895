"""Hexagonal cells, columns, and the level-m classification predicates.

Coordinates: a cell is ``(col, row)``; a column is vertical and ``row``
increases upward.  The right neighbours of ``(x, y)`` are ``(x+1, y)`` (upper
right) and ``(x+1, y-1)`` (lower right).  Geometrically the centre of
``(x, y)`` sits at ``(x * sqrt(3)/2, y + x/2)``.
"""

from __future__ import annotations

import enum
import json
from collections import deque
from dataclasses import dataclass
from typing import Iterable, NamedTuple


class Cell(NamedTuple):
    col: int
    row: int


_OFFSETS = ((0, 1), (0, -1), (1, 0), (1, -1), (-1, 0), (-1, 1))


def neighbors(c) -> set[Cell]:
    x, y = c
    return {Cell(x + dx, y + dy) for dx, dy in _OFFSETS}


def adjacent(a, b) -> bool:
    return (b[0] - a[0], b[1] - a[1]) in _OFFSETS


class EmptyFigureError(ValueError):
    pass


class NotAPolyominoError(ValueError):
    pass


class UnclassifiableError(ValueError):
    pass


class Run(NamedTuple):
    bottom: int
    length: int

    @property
    def top(self) -> int:
        return self.bottom + self.length - 1


@dataclass(frozen=True)
class Column:
    col: int
    runs: tuple[Run, ...]

    @property
    def gaps(self) -> tuple[Run, ...]:
        return tuple(
            Run(lo.top + 1, hi.bottom - lo.top - 1) for lo, hi in zip(self.runs, self.runs[1:])
        )

    @property
    def bottom(self) -> int:
        return self.runs[0].bottom

    @property
    def top(self) -> int:
        return self.runs[-1].top

    @property
    def height(self) -> int:
        return self.top - self.bottom + 1

    @property
    def cell_count(self) -> int:
        return sum(r.length for r in self.runs)


class Figure:
    """A finite set of cells, immutable and hashable."""

    __slots__ = ("cells", "_columns")

    def __init__(self, cells: Iterable):
        self.cells: frozenset[Cell] = frozenset(Cell(int(x), int(y)) for x, y in cells)
        self._columns = None

    def __len__(self) -> int:
        return len(self.cells)

    @property
    def area(self) -> int:
        return len(self.cells)

    def __contains__(self, c) -> bool:
        return (c[0], c[1]) in self.cells

    def __iter__(self):
        return iter(sorted(self.cells))

    def __eq__(self, other):
        return isinstance(other, Figure) and self.cells == other.cells

    def __hash__(self):
        return hash(self.cells)

    def __repr__(self):
        return f"Figure({sorted(tuple(c) for c in self.cells)})"

    def _require_nonempty(self):
        if not self.cells:
            raise EmptyFigureError("empty figure")

    def translate(self, dx: int, dy: int) -> "Figure":
        return Figure((x + dx, y + dy) for x, y in self.cells)

    def canonical(self) -> "Figure":
        """Translate so that the lowest cell of the leftmost column is ``(0, 0)``."""
        self._require_nonempty()
        x0, y0 = min(self.cells)
        return self.translate(-x0, -y0)

    def is_canonical(self) -> bool:
        return bool(self.cells) and min(self.cells) == (0, 0)

    def reflect_vertical_axis(self) -> "Figure":
        """Mirror left to right (canonicalised)."""
        return Figure((-x, y + x) for x, y in self.cells).canonical()

    def reflect_horizontal_axis(self) -> "Figure":
        """Mirror top to bottom (canonicalised)."""
        return Figure((x, -y - x) for x, y in self.cells).canonical()

    def union(self, cells: Iterable) -> "Figure":
        return Figure(self.cells | {(x, y) for x, y in cells})

    def columns(self) -> tuple[Column, ...]:
        if self._columns is None:
            self._columns = _decompose(self.cells)
        return self._columns

    def body(self) -> "Figure":
        """All cells except the rightmost column."""
        self._require_nonempty()
        last = max(x for x, _ in self.cells)
        return Figure(c for c in self.cells if c[0] != last)

    def to_json(self) -> str:
        return json.dumps([list(c) for c in sorted(self.cells)])

    @classmethod
    def from_json(cls, text: str) -> "Figure":
        data = json.loads(text)
        if not isinstance(data, list) or not all(
            isinstance(p, list) and len(p) == 2 and all(isinstance(v, int) for v in p) for p in data
        ):
            raise ValueError("figure JSON must be a list of [col, row] integer pairs")
        return cls(data).canonical()


def _decompose(cells) -> tuple[Column, ...]:
    by_col: dict[int, list[int]] = {}
    for x, y in cells:
        by_col.setdefault(x, []).append(y)
    out = []
    for x in sorted(by_col):
        rows = sorted(by_col[x])
        runs = []
        start = prev = rows[0]
        for y in rows[1:]:
            if y != prev + 1:
                runs.append(Run(start, prev - start + 1))
                start = y
            prev = y
        runs.append(Run(start, prev - start + 1))
        out.append(Column(x, tuple(runs)))
    return tuple(out)


def columns(f: Figure) -> tuple[Column, ...]:
    f._require_nonempty()
    return f.columns()


def column_height(column: Column) -> int:
    return column.height


def is_polyomino(f: Figure) -> bool:
    """True iff the cells are connected through edge adjacency."""
    f._require_nonempty()
    return _connected(f.cells)


def _connected(cells) -> bool:
    cells = set(cells)
    start = next(iter(cells))
    seen = {start}
    todo = deque([start])
    while todo:
        x, y = todo.popleft()
        for dx, dy in _OFFSETS:
            n = (x + dx, y + dy)
            if n in cells and n not in seen:
                seen.add(n)
                todo.append(n)
    return len(seen) == len(cells)


def components(cells) -> list[set]:
    cells = {(x, y) for x, y in cells}
    out = []
    while cells:
        start = cells.pop()
        comp = {start}
        todo = [start]
        while todo:
            x, y = todo.pop()
            for dx, dy in _OFFSETS:
                n = (x + dx, y + dy)
                if n in cells:
                    cells.discard(n)
                    comp.add(n)
                    todo.append(n)
        out.append(comp)
    return out


def satisfies_column_constraints(f: Figure, m: int) -> bool:
    """Every column has at most two runs separated by at most ``m`` cells."""
    for c in f.columns():
        if len(c.runs) > 2:
            return False
        if len(c.runs) == 2 and c.gaps[0].length > m:
            return False
    return True


def is_level_m_subconvex(f: Figure, m: int) -> bool:
    if m < 0:
        raise ValueError("m must be >= 0")
    if not is_polyomino(f):
        raise NotAPolyominoError("level-m test needs a polyomino")
    return satisfies_column_constraints(f, m)


def is_column_convex(f: Figure) -> bool:
    if not is_polyomino(f):
        raise NotAPolyominoError("column-convexity test needs a polyomino")
    return all(len(c.runs) == 1 for c in f.columns())


def cork(f: Figure) -> set[Cell]:
    """Right neighbours of the gap cells of the last column (empty if no gap)."""
    last = f.columns()[-1]
    out: set[Cell] = set()
    for g in last.gaps:
        for y in range(g.bottom, g.bottom + g.length):
            out.add(Cell(last.col + 1, y))
            out.add(Cell(last.col + 1, y - 1))
    return out


def is_incomplete_level_m(f: Figure, m: int) -> bool:
    """True iff ``f`` is disconnected but a left factor of a level-m polyomino.

    Adding the cork column is a witness: it is a single run, so it keeps the
    column constraints, and it touches both runs of the last column.
    """
    f._require_nonempty()
    if not satisfies_column_constraints(f, m):
        return False
    if _connected(f.cells):
        return False
    plug = cork(f)
    if not plug:
        return False
    return _connected(f.cells | plug)


def in_S(f: Figure, m: int = 1) -> bool:
    return is_polyomino(f) and satisfies_column_constraints(f, m)


def pivot_cell(f: Figure) -> Cell:
    """Lower right neighbour of the lowest cell of the second-last column."""
    cols = f.columns()
    if len(cols) < 2:
        raise ValueError("pivot cell needs at least two columns")
    prev = cols[-2]
    return Cell(prev.col + 1, prev.bottom - 1)


lower_pivot_cell = pivot_cell


def upper_pivot_cell(f: Figure) -> Cell:
    """Upper right neighbour of the highest cell of the second-last column."""
    cols = f.columns()
    if len(cols) < 2:
        raise ValueError("pivot cell needs at least two columns")
    prev = cols[-2]
    return Cell(prev.col + 1, prev.top)


class ClassLabel(enum.Enum):
    S_alpha = "S_alpha"
    S_beta = "S_beta"
    S_gamma = "S_gamma"
    S_delta = "S_delta"
    S_epsilon = "S_epsilon"
    S_zeta = "S_zeta"
    T_alpha = "T_alpha"
    T_beta = "T_beta"
    T_gamma = "T_gamma"
    T_delta = "T_delta"
    T_epsilon = "T_epsilon"

    @property
    def in_S(self) -> bool:
        return self.value.startswith("S")


S_LABELS = tuple(l for l in ClassLabel if l.in_S)
T_LABELS = tuple(l for l in ClassLabel if not l.in_S)


def classify(f: Figure, m: int = 1) -> ClassLabel:
    """Assign a level-one figure of ``S`` or ``T`` to its part of the partition."""
    if m != 1:
        raise ValueError("the partition into eleven classes is defined for level one only")
    f._require_nonempty()
    cols = f.columns()
    last = cols[-1]
    holed = len(last.runs) == 2
    if in_S(f, 1):
        complete = True
    elif is_incomplete_level_m(f, 1):
        complete = False
    else:
        raise UnclassifiableError(f"{f!r} is neither level-one nor incomplete level-one")
    if len(cols) == 1:
        return ClassLabel.S_alpha if complete else ClassLabel.T_alpha
    body = f.body()
    body_complete = _connected(body.cells)
    prev = cols[-2]
    if complete:
        if body_complete:
            if holed:
                return ClassLabel.S_delta
            return ClassLabel.S_beta if pivot_cell(f) in f else ClassLabel.S_gamma
        return ClassLabel.S_zeta if holed else ClassLabel.S_epsilon
    hole = last.gaps[0].bottom
    if body_complete:
        lower = pivot_cell(f).row
        upper = upper_pivot_cell(f).row
        if hole in (lower, upper):
            return ClassLabel.T_beta
        if hole < lower or hole > upper:
            return ClassLabel.T_gamma
        raise UnclassifiableError("hole between the pivot cells leaves the figure connected")
    prev_hole = prev.gaps[0].bottom
    if hole in (prev_hole, prev_hole - 1):
        return ClassLabel.T_delta
    return ClassLabel.T_epsilon

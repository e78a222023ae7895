import functools

import pytest

from subconvex.enumeration import iter_incomplete, iter_polyhex_cells
from subconvex.lattice import (
    ClassLabel,
    Figure,
    EmptyFigureError,
    NotAPolyominoError,
    UnclassifiableError,
    adjacent,
    classify,
    cork,
    in_S,
    is_column_convex,
    is_incomplete_level_m,
    is_level_m_subconvex,
    is_polyomino,
    neighbors,
    pivot_cell,
    satisfies_column_constraints,
    upper_pivot_cell,
)

from _oracles import ALL_HEAD


@functools.lru_cache(maxsize=None)
def figures(max_area):
    return tuple(Figure(c) for c in iter_polyhex_cells(max_area))


def level(f):
    """Largest gap in any column; ``None`` when some column has three runs."""
    worst = 0
    for c in f.columns():
        if len(c.runs) > 2:
            return None
        if len(c.runs) == 2:
            worst = max(worst, c.gaps[0].length)
    return worst


# ---------------------------------------------------------------- geometry


def test_each_cell_has_six_mutual_neighbours():
    c = (3, -2)
    ns = neighbors(c)
    assert len(ns) == 6
    assert all(adjacent(c, n) and adjacent(n, c) for n in ns)
    assert not adjacent(c, (4, -3 + 2))  # (x+1, y+1) is not a neighbour


def test_reflections_are_involutions_on_a_sample():
    f = Figure([(0, 0), (0, 1), (1, 0), (2, -1), (2, 1)])
    assert f.reflect_vertical_axis().reflect_vertical_axis() == f.canonical()
    assert f.reflect_horizontal_axis().reflect_horizontal_axis() == f.canonical()


def test_canonical_puts_lowest_cell_of_first_column_at_origin():
    f = Figure([(5, 9), (5, 10), (6, 3)])
    g = f.canonical()
    assert g.is_canonical() and (0, 0) in g and (1, -6) in g


def test_json_round_trip_and_validation():
    f = Figure([(0, 0), (1, 0), (1, 2)])
    assert Figure.from_json(f.to_json()) == f
    with pytest.raises(ValueError):
        Figure.from_json('[[0, "a"]]')


def test_columns_runs_and_heights():
    f = Figure([(0, 0), (0, 1), (0, 3), (1, 0)])
    first, second = f.columns()
    assert [r.length for r in first.runs] == [2, 1]
    assert first.gaps[0].bottom == 2 and first.gaps[0].length == 1
    assert first.height == 4 and second.height == 1


def test_empty_and_disconnected_inputs_are_rejected():
    with pytest.raises(EmptyFigureError):
        is_polyomino(Figure([]))
    with pytest.raises(NotAPolyominoError):
        is_level_m_subconvex(Figure([(0, 0), (0, 2)]), 1)
    with pytest.raises(ValueError):
        is_level_m_subconvex(Figure([(0, 0)]), -1)


def test_level_examples():
    ring = Figure([(0, 0), (0, 2), (1, 0), (1, 1), (-1, 1), (-1, 2)])
    # a hexagonal ring around (0, 1) has one column with a single-cell gap
    assert is_polyomino(ring)
    assert not is_column_convex(ring)
    assert is_level_m_subconvex(ring, 1)
    assert not is_level_m_subconvex(ring, 0)


def test_cork_reconnects_a_single_hole():
    f = Figure([(0, 0), (0, 2)])
    assert cork(f) == {(1, 1), (1, 0)}
    assert is_incomplete_level_m(f, 1)
    assert not is_incomplete_level_m(f, 0)
    assert not is_incomplete_level_m(Figure([(0, 0), (0, 3)]), 1)
    assert is_incomplete_level_m(Figure([(0, 0), (0, 3)]), 2)


def test_pivot_cells():
    f = Figure([(0, 0), (0, 1), (0, 2), (1, 0)])
    assert pivot_cell(f) == (1, -1)
    assert upper_pivot_cell(f) == (1, 2)


# ------------------------------------------------------------- enumeration


def test_enumeration_yields_distinct_canonical_figures():
    figs = figures(7)
    assert len(set(figs)) == len(figs)
    assert all(f.is_canonical() and is_polyomino(f) for f in figs)
    by_area = [0] * 7
    for f in figs:
        by_area[f.area - 1] += 1
    assert by_area == ALL_HEAD[:7]


def test_reflections_preserve_level_over_full_enumeration():
    figs = set(figures(8))
    for f in figs:
        for g in (f.reflect_vertical_axis(), f.reflect_horizontal_axis()):
            assert g in figs
            assert level(g) == level(f)
        assert f.reflect_vertical_axis().reflect_vertical_axis() == f
        assert f.reflect_horizontal_axis().reflect_horizontal_axis() == f


def test_level_classes_are_nested():
    for f in figures(8):
        flags = [is_level_m_subconvex(f, m) for m in range(4)]
        # once a figure is level m it stays level m' for m' > m
        assert flags == sorted(flags)
        assert is_column_convex(f) == flags[0]


def test_level_one_figures_fall_into_exactly_one_S_class():
    seen = set()
    for f in figures(8):
        if in_S(f, 1):
            label = classify(f)
            assert label.in_S
            seen.add(label)
        else:
            with pytest.raises(UnclassifiableError):
                classify(f)
    assert seen == {l for l in ClassLabel if l.in_S}


def test_incomplete_figures_match_prefix_definition():
    """An incomplete figure of area n is a disconnected column prefix of a
    level-one polyomino; one extra bridging column of two cells always
    suffices, so prefixes of figures up to area n + 2 cover them all."""
    N = 7
    prefixes = set()
    for f in figures(N + 2):
        if not in_S(f, 1):
            continue
        cols = f.columns()
        for k in range(1, len(cols)):
            keep = {c.col for c in cols[:k]}
            p = Figure(c for c in f.cells if c[0] in keep)
            if p.area <= N and not is_polyomino(p):
                prefixes.add(p.canonical())
    generated = list(iter_incomplete(N, 1))
    assert len(generated) == len(set(generated))
    assert set(generated) == prefixes
    assert all(is_incomplete_level_m(p, 1) for p in prefixes)
    # every incomplete figure carries a T label
    assert all(not classify(p).in_S for p in generated)


def test_column_constraints_reject_three_runs():
    f = Figure([(0, 0), (0, 2), (0, 4)])
    assert not satisfies_column_constraints(f, 5)
    assert not is_incomplete_level_m(f, 5)


def test_classify_is_defined_for_level_one_only():
    with pytest.raises(ValueError):
        classify(Figure([(0, 0)]), m=2)

"""Ground-truth counts: brute-force polyhex enumeration and a column DP.

Three independent counting routes live here:

* :func:`enumerate_polyhexes` -- Redelmeier's subgraph growth in plain Python,
  one :class:`~subconvex.lattice.Figure` per visit.  Slow but transparent; it
  drives every per-figure oracle (classification tallies, invariants).
* :func:`count_polyhexes` -- the same growth compiled with numba, tallying
  figures by area, by the largest gap found in any column, and by the height
  of the last column.  This is what reaches area 12 and beyond.
* :func:`dp_count_subconvex` -- a column-by-column transfer computation for
  level-m figures (m in 0, 1, 2), exact via several word-size primes and CRT.
"""

from __future__ import annotations

import json
import math
import warnings
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Callable, Iterator

import numba
import numpy as np
from numba import njit, prange
from numba.core.errors import NumbaWarning

# numba complains about the installed TBB version and falls back to another
# threading layer; the fallback is fine here.
warnings.filterwarnings("ignore", message=".*TBB.*", category=NumbaWarning)

from .lattice import (
    ClassLabel,
    Figure,
    S_LABELS,
    T_LABELS,
    _OFFSETS,
    classify,
    is_incomplete_level_m,
)

MODELS = ("all", "column_convex", "level1", "level2", "incomplete_level1")
MAX_ENUMERATION_AREA = 16


@dataclass
class CoefficientTable:
    """Counts ``a_1 .. a_N`` of one model, plus optional refinements.

    ``heights[n][h]`` counts figures of area ``n`` whose last column has height
    ``h``; ``classes[label][n]`` holds level-one partition tallies.
    """

    model: str
    counts: list[int]
    heights: dict[int, dict[int, int]] | None = None
    classes: dict[ClassLabel, list[int]] | None = None
    source: str = ""

    @property
    def max_area(self) -> int:
        return len(self.counts)

    def __getitem__(self, n: int) -> int:
        if not 1 <= n <= len(self.counts):
            raise IndexError(f"area {n} outside 1..{len(self.counts)}")
        return self.counts[n - 1]

    def height_totals(self) -> list[int]:
        """``sum(height * count)`` per area; the coefficients of ``dA/dt`` at ``t = 1``."""
        if self.heights is None:
            raise ValueError("table carries no height refinement")
        return [sum(h * c for h, c in self.heights.get(n, {}).items()) for n in range(1, self.max_area + 1)]

    def to_json(self) -> str:
        return json.dumps(
            {"model": self.model, "max_area": self.max_area, "counts": [str(c) for c in self.counts]}
        )

    @classmethod
    def from_json(cls, text: str) -> "CoefficientTable":
        data = json.loads(text)
        counts = [int(s) for s in data["counts"]]
        if data.get("max_area", len(counts)) != len(counts):
            raise ValueError("max_area does not match the number of counts")
        return cls(data["model"], counts)


def model_for_level(m: int) -> str:
    return {0: "column_convex", 1: "level1", 2: "level2"}.get(m, f"level{m}")


# ----------------------------------------------------------------------
# plain Python enumeration


def _allowed(c) -> bool:
    return c[0] > 0 or (c[0] == 0 and c[1] >= 0)


def iter_polyhex_cells(max_area: int) -> Iterator[tuple]:
    """Yield the cell tuple of every canonical fixed polyhex of area <= ``max_area``.

    The lowest cell of the leftmost column is the origin; Redelmeier's rule
    (an untried cell, once skipped, stays forbidden in that branch) makes
    every figure appear exactly once.
    """
    if max_area < 1:
        raise ValueError("max_area must be >= 1")
    origin = (0, 0)
    seen = {origin}
    poly: list = []

    def grow(untried: list):
        untried = list(untried)
        while untried:
            c = untried.pop()
            poly.append(c)
            yield tuple(poly)
            if len(poly) < max_area:
                x, y = c
                new = []
                for dx, dy in _OFFSETS:
                    n = (x + dx, y + dy)
                    if n not in seen and _allowed(n):
                        new.append(n)
                seen.update(new)
                yield from grow(untried + new)
                seen.difference_update(new)
            poly.pop()

    yield from grow([origin])


def enumerate_polyhexes(max_area: int, visitor: Callable[[Figure], object]) -> None:
    """Call ``visitor`` once per canonical fixed polyhex of area <= ``max_area``.

    Sequential; the visitor never runs concurrently with itself.
    """
    for cells in iter_polyhex_cells(max_area):
        visitor(Figure(cells))


def iter_incomplete(max_area: int, m: int = 1) -> Iterator[Figure]:
    """Every incomplete level-m figure of area <= ``max_area`` exactly once.

    Filling the gap of an incomplete figure gives a polyhex whose last column
    is one run; conversely, carving ``g <= m`` interior cells out of such a
    last column and keeping the result when it is incomplete recovers each
    figure once (the filled figure is determined by the carved one).
    """
    for cells in iter_polyhex_cells(max_area + m):
        area = len(cells)
        last = max(x for x, _ in cells)
        rows = sorted(y for x, y in cells if x == last)
        if len(rows) < 3 or rows[-1] - rows[0] + 1 != len(rows):
            continue
        for g in range(1, m + 1):
            if area - g > max_area or area - g < 2:
                continue
            for lo in range(rows[0] + 1, rows[-1] - g + 1):
                hole = {(last, y) for y in range(lo, lo + g)}
                f = Figure(c for c in cells if c not in hole)
                if is_incomplete_level_m(f, m):
                    yield f


def classification_tally(max_area: int) -> dict[ClassLabel, list[int]]:
    """Per-area counts of the eleven level-one classes over full enumeration."""
    tallies = {label: [0] * max_area for label in ClassLabel}

    def visit(f: Figure):
        cols = f.columns()
        if all(len(c.runs) == 1 or (len(c.runs) == 2 and c.gaps[0].length == 1) for c in cols):
            tallies[classify(f)][f.area - 1] += 1

    enumerate_polyhexes(max_area, visit)
    for f in iter_incomplete(max_area, 1):
        tallies[classify(f)][f.area - 1] += 1
    return tallies


# ----------------------------------------------------------------------
# compiled enumeration


@njit(cache=True)
def _popcount(v):
    c = 0
    while v:
        v &= v - 1
        c += 1
    return c


@njit(cache=True)
def _bit_length(v):
    c = 0
    while v:
        v >>= 1
        c += 1
    return c


@njit(cache=True, nogil=True)
def _count_kernel(N, split_depth, worker, nworkers):
    """Redelmeier growth over the half-plane ``x > 0 or (x == 0 and y >= 0)``.

    Tallies ``hist[level, n, h]``: figures of area ``n`` whose largest column
    gap is ``level`` (0 when column-convex; ``N + 1`` when some column has
    three or more runs) and whose last column has height ``h``.
    """
    H = 2 * N + 1
    W = N + 1
    OFF = N
    seen = np.zeros(W * H, dtype=np.uint8)
    colmask = np.zeros(W, dtype=np.int64)
    untried = np.zeros((N + 1, 6 * N + 6), dtype=np.int64)
    nuntried = np.zeros(N + 1, dtype=np.int64)
    newc = np.zeros((N + 1, 6), dtype=np.int64)
    nnew = np.zeros(N + 1, dtype=np.int64)
    cur = np.zeros(N + 1, dtype=np.int64)
    hist = np.zeros((N + 2, N + 1, N + 1), dtype=np.int64)
    dxs = np.array([0, 0, 1, 1, -1, -1])
    dys = np.array([1, -1, 0, -1, 0, 1])

    origin = 0 * H + OFF
    seen[origin] = 1
    untried[0, 0] = origin
    nuntried[0] = 1
    split_counter = 0
    d = 0
    while True:
        if nuntried[d] == 0:
            if d == 0:
                break
            d -= 1
            for k in range(nnew[d]):
                seen[newc[d, k]] = 0
            c = cur[d]
            colmask[c // H] &= ~(np.int64(1) << (c % H))
            continue
        nuntried[d] -= 1
        c = untried[d, nuntried[d]]
        if d == split_depth:
            mine = split_counter % nworkers == worker
            split_counter += 1
            if not mine:
                continue
        cur[d] = c
        cx = c // H
        cy = c % H
        colmask[cx] |= np.int64(1) << cy
        if d >= split_depth or worker == 0:
            # tally the figure of area d + 1
            level = 0
            x = 0
            last = 0
            while x < W and colmask[x] != 0:
                mk = colmask[x]
                runs = _popcount(mk & ~(mk << 1))
                span = _bit_length(mk) - _bit_length(mk & -mk) + 1
                if runs > 2:
                    level = N + 1
                elif runs == 2 and level <= N:
                    gap = span - _popcount(mk)
                    if gap > level:
                        level = gap
                last = span
                x += 1
            hist[level, d + 1, last] += 1
        if d + 1 < N:
            cnt = 0
            for k in range(6):
                nx = cx + dxs[k]
                ny = cy + dys[k]
                if nx < 0 or (nx == 0 and ny < OFF) or nx >= W or ny < 0 or ny >= H:
                    continue
                idx = nx * H + ny
                if seen[idx] == 0:
                    seen[idx] = 1
                    newc[d, cnt] = idx
                    cnt += 1
            nnew[d] = cnt
            n0 = nuntried[d]
            for k in range(n0):
                untried[d + 1, k] = untried[d, k]
            for k in range(cnt):
                untried[d + 1, n0 + k] = newc[d, k]
            nuntried[d + 1] = n0 + cnt
            d += 1
        else:
            colmask[cx] &= ~(np.int64(1) << cy)
    return hist


def _level_hist(max_area: int, threads: int | None = None) -> np.ndarray:
    if not 1 <= max_area <= MAX_ENUMERATION_AREA:
        raise ValueError(f"max_area must lie in 1..{MAX_ENUMERATION_AREA}")
    workers = max(1, threads or 1)
    split = min(2, max_area - 1)
    if workers == 1 or split < 1:
        return _count_kernel(max_area, 0, 0, 1)
    with ThreadPoolExecutor(max_workers=workers) as pool:
        parts = list(pool.map(lambda w: _count_kernel(max_area, split, w, workers), range(workers)))
    return sum(parts[1:], parts[0])


def count_polyhexes(max_area: int, threads: int | None = None) -> dict[str, CoefficientTable]:
    """Tables for ``all``, ``column_convex``, ``level1`` and ``level2`` by brute force."""
    hist = _level_hist(max_area, threads)
    N = max_area
    out = {}
    for name, top in (("all", N + 1), ("column_convex", 0), ("level1", 1), ("level2", 2)):
        block = hist[: top + 1].sum(axis=0)
        counts = [int(block[n].sum()) for n in range(1, N + 1)]
        heights = {
            n: {h: int(block[n, h]) for h in range(1, n + 1) if block[n, h]} for n in range(1, N + 1)
        }
        out[name] = CoefficientTable(name, counts, heights=heights, source="enumeration")
    return out


def count_by_model(
    max_area: int, model, threads: int | None = None, with_classes: bool = False
) -> CoefficientTable:
    """Brute-force table for a model name or a level ``m``.

    ``with_classes`` attaches the eleven level-one class tallies (runs the
    per-figure Python enumeration, so keep ``max_area`` small).
    """
    if max_area < 1:
        raise ValueError("max_area must be >= 1")
    if isinstance(model, int):
        if model < 0:
            raise ValueError("level must be >= 0")
        if model > 2:
            hist = _level_hist(max_area, threads)
            block = hist[: model + 1].sum(axis=0)
            counts = [int(block[n].sum()) for n in range(1, max_area + 1)]
            return CoefficientTable(model_for_level(model), counts, source="enumeration")
        model = model_for_level(model)
    if model not in MODELS:
        raise ValueError(f"unknown model {model!r}")
    if model == "incomplete_level1":
        counts = [0] * max_area
        heights: dict[int, dict[int, int]] = {n: {} for n in range(1, max_area + 1)}
        for f in iter_incomplete(max_area, 1):
            counts[f.area - 1] += 1
            h = f.columns()[-1].height
            heights[f.area][h] = heights[f.area].get(h, 0) + 1
        table = CoefficientTable(model, counts, heights=heights, source="enumeration")
    else:
        table = count_polyhexes(max_area, threads)[model]
    if with_classes:
        table.classes = classification_tally(max_area)
    return table


# ----------------------------------------------------------------------
# column transfer DP

# state kinds
_ONE = 0
_SEPARATE = 1
_JOINED = 2


def _dp_states(m: int, N: int):
    """State arrays sorted by area: (kind, lower run, gap, upper run)."""
    rows = [(a, _ONE, a, 0, 0) for a in range(1, N + 1)]
    for a in range(1, N):
        for b in range(1, N - a + 1):
            for g in range(1, m + 1):
                rows.append((a + b, _SEPARATE, a, g, b))
                rows.append((a + b, _JOINED, a, g, b))
    rows.sort()
    arr = np.array([r[1:] for r in rows], dtype=np.int64).reshape(-1, 4)
    area = np.array([r[0] for r in rows], dtype=np.int64)
    return arr, area


@njit(cache=True)
def _find(parent, i):
    while parent[i] != i:
        i = parent[i]
    return i


@njit(cache=True)
def _transfer_count(old, new):
    """Number of vertical offsets taking last column ``old`` to column ``new``.

    Row 0 is the bottom of the old column; a new cell ``(x+1, r)`` touches
    old cells ``(x, r)`` and ``(x, r+1)``.  The offset is admissible when every
    component of the old figure reaches the new column; it is counted when
    the resulting connectivity matches ``new``'s kind.
    """
    okind, oa, og, ob = old[0], old[1], old[2], old[3]
    nkind, na, ng, nb = new[0], new[1], new[2], new[3]
    oH = oa + og + ob
    nH = na + ng + nb
    o_lo = np.empty(2, dtype=np.int64)
    o_hi = np.empty(2, dtype=np.int64)
    o_comp = np.empty(2, dtype=np.int64)
    o_lo[0] = 0
    o_hi[0] = oa - 1
    o_comp[0] = 0
    n_old = 1
    n_old_comp = 1
    if okind != _ONE:
        o_lo[1] = oa + og
        o_hi[1] = oH - 1
        n_old = 2
        if okind == _SEPARATE:
            o_comp[1] = 1
            n_old_comp = 2
        else:
            o_comp[1] = 0
    n_new = 1 if nkind == _ONE else 2
    parent = np.empty(4, dtype=np.int64)
    total = 0
    for d in range(-nH, oH):
        # nodes 0, 1: old components; nodes 2, 3: new runs
        for k in range(4):
            parent[k] = k
        touched0 = False
        touched1 = False
        for i in range(n_new):
            if i == 0:
                s = d
                e = d + na - 1
            else:
                s = d + na + ng
                e = d + nH - 1
            for j in range(n_old):
                if s <= o_hi[j] and o_lo[j] <= e + 1:
                    c = o_comp[j]
                    if c == 0:
                        touched0 = True
                    else:
                        touched1 = True
                    ra = _find(parent, 2 + i)
                    rb = _find(parent, c)
                    if ra != rb:
                        parent[ra] = rb
        if not touched0 or (n_old_comp == 2 and not touched1):
            continue
        if n_new == 1:
            total += 1
        else:
            joined = _find(parent, 2) == _find(parent, 3)
            if joined == (nkind == _JOINED):
                total += 1
    return total


@njit(cache=True)
def _build_transfers(states, area, N):
    """CSR lists: for each target state, sources with their offset counts."""
    S = states.shape[0]
    ptr = np.zeros(S + 1, dtype=np.int64)
    for t in range(S):
        cnt = 0
        budget = N - area[t]
        for s in range(S):
            if area[s] > budget:
                break
            if _transfer_count(states[s], states[t]) > 0:
                cnt += 1
        ptr[t + 1] = ptr[t] + cnt
    src = np.empty(ptr[S], dtype=np.int64)
    mult = np.empty(ptr[S], dtype=np.int64)
    for t in range(S):
        k = ptr[t]
        budget = N - area[t]
        for s in range(S):
            if area[s] > budget:
                break
            c = _transfer_count(states[s], states[t])
            if c > 0:
                src[k] = s
                mult[k] = c
                k += 1
    return ptr, src, mult


@njit(cache=True, parallel=True)
def _dp_run(states, area, ptr, src, mult, N, primes):
    """``V[p, s, n]``: partial figures (mod ``primes[p]``) of area ``n`` ending in state ``s``."""
    S = states.shape[0]
    P = primes.shape[0]
    V = np.zeros((P, S, N + 1), dtype=np.int64)
    for s in range(S):
        if states[s, 0] != _JOINED:
            for p in range(P):
                V[p, s, area[s]] = 1
    for n in range(2, N + 1):
        for t in prange(S):
            j = area[t]
            if j >= n:
                continue
            rest = n - j
            for p in range(P):
                pr = primes[p]
                acc = V[p, t, n]
                for k in range(ptr[t], ptr[t + 1]):
                    s = src[k]
                    if area[s] > rest:
                        break
                    v = V[p, s, rest]
                    if v:
                        acc = (acc + mult[k] * v) % pr
                V[p, t, n] = acc
    return V


_PRIMES = (
    2147483647, 2147483629, 2147483587, 2147483579, 2147483563, 2147483549,
    2147483543, 2147483497, 2147483489, 2147483477, 2147483423, 2147483399,
    2147483353, 2147483323, 2147483269, 2147483249, 2147483237, 2147483179,
    2147483171, 2147483137, 2147483123, 2147483077, 2147483069, 2147483059,
)  # fmt: skip


def _crt(residues: list[int], primes: tuple[int, ...]) -> int:
    x, mod = 0, 1
    for r, p in zip(residues, primes):
        # solve x + mod * k == r (mod p)
        k = ((r - x) * pow(mod, -1, p)) % p
        x += mod * k
        mod *= p
    return x


@dataclass
class DPResult:
    """Everything the column DP knows, exact."""

    m: int
    complete: CoefficientTable
    incomplete: CoefficientTable
    extra: dict = field(default_factory=dict)


def _primes_for(N: int, weight: int = 1) -> tuple[int, ...]:
    # every count is below 6^n; height-weighted totals below N * 6^n
    bits = N * math.log2(6) + math.log2(max(weight, 1)) + 2
    k = max(1, math.ceil(bits / 31))
    if k > len(_PRIMES):
        raise ValueError("area too large for the prime table")
    return _PRIMES[:k]


def dp_solve(m: int, max_area: int, threads: int | None = None) -> DPResult:
    """Run the column DP and return complete and incomplete tables with heights."""
    if m not in (0, 1, 2):
        raise ValueError("the DP supports m in {0, 1, 2}")
    if max_area < 1:
        raise ValueError("max_area must be >= 1")
    N = max_area
    if threads:
        numba.set_num_threads(max(1, min(threads, numba.config.NUMBA_NUM_THREADS)))
    states, area = _dp_states(m, N)
    ptr, src, mult = _build_transfers(states, area, N)
    primes = _primes_for(N)
    V = _dp_run(states, area, ptr, src, mult, N, np.array(primes, dtype=np.int64))
    kind = states[:, 0]
    height = states[:, 1] + states[:, 2] + states[:, 3]
    complete_counts, incomplete_counts = [], []
    complete_heights: dict[int, dict[int, int]] = {}
    incomplete_heights: dict[int, dict[int, int]] = {}
    for n in range(1, N + 1):
        ch: dict[int, int] = {}
        ih: dict[int, int] = {}
        for s in np.nonzero(area <= n)[0]:
            res = [int(V[p, s, n]) for p in range(len(primes))]
            if not any(res):
                continue
            val = _crt(res, primes)
            bucket = ih if kind[s] == _SEPARATE else ch
            h = int(height[s])
            bucket[h] = bucket.get(h, 0) + val
        complete_heights[n] = ch
        incomplete_heights[n] = ih
        complete_counts.append(sum(ch.values()))
        incomplete_counts.append(sum(ih.values()))
    bound = 6
    for n, c in enumerate(complete_counts, start=1):
        if c >= bound**n:
            raise ArithmeticError(f"CRT reconstruction overflow at area {n}")
    complete = CoefficientTable(model_for_level(m), complete_counts, heights=complete_heights, source="dp")
    incomplete = CoefficientTable(
        f"incomplete_level{m}", incomplete_counts, heights=incomplete_heights, source="dp"
    )
    return DPResult(m, complete, incomplete, {"states": int(states.shape[0]), "transfers": int(len(src))})


def dp_count_subconvex(m: int, max_area: int, threads: int | None = None) -> CoefficientTable:
    """Level-m counts ``a_1 .. a_max_area`` from the column DP."""
    return dp_solve(m, max_area, threads).complete

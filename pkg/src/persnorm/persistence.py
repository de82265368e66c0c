"""Persistent homology (dimensions 0 and 1) of Vietoris-Rips flag complexes.

Two routes compute diagrams. ``compute_persistence`` is the generic column
reduction over an explicit, face-closed filtration list. ``rips_persistence``
is the production path used by the pipeline: dimension 0 by a union-find
sweep, dimension 1 by the cohomology form of the reduction with the merging
edges cleared; it never materializes triangles and handles 252-point clouds
in milliseconds. ``dim0_mst_oracle`` is a deliberately independent check:
finite dimension-0 deaths must equal the minimum-spanning-tree edge weights.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations

import numpy as np

from . import _reduction
from .errors import MissingFace, TooShort, UnsortedFiltration

_EMPTY_PAIRS = np.empty((0, 2), dtype=float)
_EMPTY_BIRTHS = np.empty(0, dtype=float)


@dataclass(frozen=True)
class FilteredSimplex:
    """A simplex (1-3 vertices, sorted) with its diameter as filtration value."""

    vertices: tuple[int, ...]
    filtration: float

    def __post_init__(self):
        if not 1 <= len(self.vertices) <= 3:
            raise MissingFace(f"simplex size {len(self.vertices)} outside 1..3")
        if tuple(sorted(self.vertices)) != self.vertices:
            raise MissingFace(f"vertices {self.vertices} not sorted")
        if len(set(self.vertices)) != len(self.vertices):
            raise MissingFace(f"vertices {self.vertices} repeat")
        if self.filtration < 0:
            raise UnsortedFiltration(f"negative filtration {self.filtration}")

    @property
    def dim(self) -> int:
        return len(self.vertices) - 1


@dataclass(frozen=True, eq=False)
class PersistenceDiagram:
    """Finite (birth, death) pairs and infinite births, per dimension.

    Zero-persistence pairs (death == birth exactly) are dropped on
    construction; they contribute nothing to either norm.
    """

    finite: dict[int, np.ndarray]
    infinite: dict[int, np.ndarray]

    @classmethod
    def from_pairs(
        cls,
        finite: dict[int, np.ndarray],
        infinite: dict[int, np.ndarray],
    ) -> "PersistenceDiagram":
        fin: dict[int, np.ndarray] = {}
        for dim, pairs in finite.items():
            arr = np.asarray(pairs, dtype=float).reshape(-1, 2)
            keep = arr[:, 1] != arr[:, 0]
            arr = arr[keep]
            order = np.lexsort((arr[:, 1], arr[:, 0]))
            fin[dim] = arr[order]
        inf_: dict[int, np.ndarray] = {}
        for dim, births in infinite.items():
            arr = np.sort(np.asarray(births, dtype=float).reshape(-1))
            inf_[dim] = arr
        return cls(finite=fin, infinite=inf_)

    def finite_pairs(self, dim: int) -> np.ndarray:
        return self.finite.get(dim, _EMPTY_PAIRS)

    def infinite_births(self, dim: int) -> np.ndarray:
        return self.infinite.get(dim, _EMPTY_BIRTHS)

    def to_csv(self, path) -> None:
        """Dump as ``dim,birth,death`` rows, with ``inf`` for infinite deaths."""
        dims = sorted(set(self.finite) | set(self.infinite))
        lines = ["dim,birth,death"]
        for dim in dims:
            for b, d in self.finite_pairs(dim):
                lines.append(f"{dim},{float(b)!r},{float(d)!r}")
            for b in self.infinite_births(dim):
                lines.append(f"{dim},{float(b)!r},inf")
        with open(path, "w", encoding="utf-8", newline="") as fh:
            fh.write("\n".join(lines) + "\n")


def _as_distance_array(d) -> np.ndarray:
    arr = np.asarray(getattr(d, "values", d), dtype=float)
    if arr.ndim != 2 or arr.shape[0] != arr.shape[1]:
        raise TooShort(f"distance matrix must be square, got shape {arr.shape}")
    return arr


def enclosing_radius(d) -> float:
    """min over points of the max distance to any other point.

    At this threshold the flag complex is a cone over the minimizing vertex,
    so every dimension >= 1 feature has died; it is the default truncation.
    """
    arr = _as_distance_array(d)
    if arr.shape[0] < 1:
        raise TooShort("empty distance matrix")
    return float(np.min(np.max(arr, axis=1)))


def rips_filtration(d, max_dim: int = 2, threshold: float | None = None) -> list[FilteredSimplex]:
    """Explicit flag-complex filtration: every simplex with diameter <= threshold.

    Sorted by (filtration, dimension, lexicographic vertex order) and closed
    under faces. Enumeration is O(n^3); intended for explicit inspection and
    the generic reducer, not for the rolling pipeline (see rips_persistence).
    """
    if max_dim not in (1, 2):
        raise TooShort(f"max_dim must be 1 or 2, got {max_dim}")
    arr = _as_distance_array(d)
    n = arr.shape[0]
    thr = enclosing_radius(arr) if threshold is None else float(threshold)
    if thr < 0:
        raise UnsortedFiltration(f"negative threshold {thr}")
    out = [FilteredSimplex((i,), 0.0) for i in range(n)]
    for i, j in combinations(range(n), 2):
        w = arr[i, j]
        if w <= thr:
            out.append(FilteredSimplex((i, j), float(w)))
    if max_dim == 2:
        for i, j, k in combinations(range(n), 3):
            w = max(arr[i, j], arr[i, k], arr[j, k])
            if w <= thr:
                out.append(FilteredSimplex((i, j, k), float(w)))
    out.sort(key=lambda s: (s.filtration, s.dim, s.vertices))
    return out


def compute_persistence(filtration: list[FilteredSimplex], n_points: int) -> PersistenceDiagram:
    """Column reduction over an explicit filtration (field with two elements).

    The list must have non-decreasing filtration values and contain every
    face of every simplex at an earlier position; tie order among equal
    filtration values is free and does not change the diagram.
    """
    m = len(filtration)
    index_of: dict[tuple[int, ...], int] = {}
    vertex_count = 0
    for pos, s in enumerate(filtration):
        if pos > 0 and s.filtration < filtration[pos - 1].filtration:
            raise UnsortedFiltration(
                f"filtration decreases at position {pos}: "
                f"{filtration[pos - 1].filtration} -> {s.filtration}"
            )
        if s.vertices in index_of:
            raise MissingFace(f"simplex {s.vertices} appears twice")
        if any(v < 0 or v >= n_points for v in s.vertices):
            raise MissingFace(f"simplex {s.vertices} names a vertex outside 0..{n_points - 1}")
        index_of[s.vertices] = pos
        if s.dim == 0:
            vertex_count += 1
    if vertex_count != n_points:
        raise MissingFace(f"{vertex_count} vertices present, expected {n_points}")

    boundaries: list[set[int]] = []
    for pos, s in enumerate(filtration):
        col: set[int] = set()
        if s.dim > 0:
            for face in combinations(s.vertices, len(s.vertices) - 1):
                fpos = index_of.get(face)
                if fpos is None or fpos > pos:
                    raise MissingFace(f"face {face} of {s.vertices} missing or later in the list")
                col.add(fpos)
        boundaries.append(col)

    pivot_owner: dict[int, int] = {}
    reduced: dict[int, set[int]] = {}
    pairs: list[tuple[int, int]] = []
    for j in range(m):
        col = boundaries[j]
        while col:
            piv = max(col)
            owner = pivot_owner.get(piv)
            if owner is None:
                pivot_owner[piv] = j
                reduced[j] = col
                pairs.append((piv, j))
                break
            col = col ^ reduced[owner]

    finite: dict[int, list[tuple[float, float]]] = {0: [], 1: []}
    for i, j in pairs:
        dim = filtration[i].dim
        if dim in finite:
            finite[dim].append((filtration[i].filtration, filtration[j].filtration))
    paired_rows = set(pivot_owner)
    paired_cols = {j for _, j in pairs}
    infinite: dict[int, list[float]] = {0: [], 1: []}
    for j in range(m):
        if j in paired_cols or j in paired_rows:
            continue
        dim = filtration[j].dim
        if dim in infinite:
            infinite[dim].append(filtration[j].filtration)
    return PersistenceDiagram.from_pairs(
        finite={d: np.array(v, dtype=float).reshape(-1, 2) for d, v in finite.items()},
        infinite={d: np.array(v, dtype=float) for d, v in infinite.items()},
    )


def rips_persistence(d, threshold: float | None = None, max_dim: int = 2) -> PersistenceDiagram:
    """Production reducer: flag-complex diagram straight from the distances.

    Equivalent to compute_persistence(rips_filtration(d, ...)) — the test
    suite enforces this against both the naive reduction and the MST oracle —
    but fast enough for year-long daily windows.
    """
    if max_dim not in (1, 2):
        raise TooShort(f"max_dim must be 1 or 2, got {max_dim}")
    arr = _as_distance_array(d)
    n = arr.shape[0]
    if n < 1:
        raise TooShort("empty distance matrix")
    thr = enclosing_radius(arr) if threshold is None else float(threshold)
    if n == 1:
        return PersistenceDiagram.from_pairs(
            finite={0: _EMPTY_PAIRS, 1: _EMPTY_PAIRS},
            infinite={0: np.zeros(1), 1: _EMPTY_BIRTHS},
        )
    iu, ju = np.triu_indices(n, 1)
    w = arr[iu, ju]
    keep = w <= thr
    iu, ju, w = iu[keep], ju[keep], w[keep]
    order = np.lexsort((ju, iu, w))
    eu = np.ascontiguousarray(iu[order], dtype=np.int64)
    ev = np.ascontiguousarray(ju[order], dtype=np.int64)
    ew = np.ascontiguousarray(w[order], dtype=np.float64)
    m = eu.shape[0]

    deaths0, neg, n_comp = _reduction.h0_merges(eu, ev, ew, n)

    if max_dim == 2:
        e_idx = np.full((n, n), -1, dtype=np.int64)
        e_idx[eu, ev] = np.arange(m, dtype=np.int64)
        e_idx[ev, eu] = np.arange(m, dtype=np.int64)
        births1, deaths1, ess1 = _reduction.h1_pairs(eu, ev, ew, neg, e_idx, n)
        fin1 = np.column_stack([births1, deaths1]) if births1.size else _EMPTY_PAIRS
    else:
        # without triangles nothing can kill a cycle: every positive edge is essential
        fin1 = _EMPTY_PAIRS
        ess1 = ew[~neg]

    fin0 = (
        np.column_stack([np.zeros_like(deaths0), deaths0]) if deaths0.size else _EMPTY_PAIRS
    )
    return PersistenceDiagram.from_pairs(
        finite={0: fin0, 1: fin1},
        infinite={0: np.zeros(n_comp), 1: ess1},
    )


def dim0_mst_oracle(d) -> np.ndarray:
    """Minimum-spanning-tree edge weights of the complete graph on d.

    Prim's algorithm over the dense matrix — a code path with nothing in
    common with the reducers, used to cross-check finite dimension-0 deaths
    (their multiset equals the MST weight multiset, bitwise).
    """
    arr = _as_distance_array(d)
    n = arr.shape[0]
    if n < 1:
        raise TooShort("empty distance matrix")
    if n == 1:
        return np.empty(0, dtype=float)
    in_tree = np.zeros(n, dtype=bool)
    in_tree[0] = True
    best = arr[0].astype(float).copy()
    weights = np.empty(n - 1, dtype=float)
    for t in range(n - 1):
        masked = np.where(in_tree, np.inf, best)
        j = int(np.argmin(masked))
        weights[t] = masked[j]
        in_tree[j] = True
        np.minimum(best, arr[j], out=best)
    return np.sort(weights)

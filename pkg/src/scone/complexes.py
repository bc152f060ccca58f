"""Oriented simplicial and cubical 2-complexes and their boundary matrices.

A complex is stored as its cell lists (nodes, oriented edges, oriented
2-cells) together with the integer boundary matrices ``b1`` (nodes x edges)
and ``b2`` (edges x 2-cells).  Constructors produce the canonical basis:
cells sorted lexicographically and oriented by increasing node label
(squares: counter-clockwise cycle from the lowest-id corner, in (col, row)
coordinates).  Basis transforms (permutations, orientation flips) may leave
the cell lists in non-canonical order; ``validate`` only checks structural
coherence, not canonical ordering.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np
import scipy.sparse as sp


class ComplexError(ValueError):
    """Raised for structurally invalid complexes or transform arguments."""


def _normalize_face(face: Sequence[int]) -> tuple[int, ...]:
    """Rotate a cyclic 2-cell orientation so it starts at its smallest id.

    Rotations are even permutations for triangles and cyclic reorderings for
    squares, so this picks a representative without changing orientation.
    """
    face = tuple(face)
    k = face.index(min(face))
    return face[k:] + face[:k]


def _face_boundary(face: Sequence[int]) -> list[tuple[tuple[int, int], int]]:
    """Ordered-edge/sign pairs of the boundary of an oriented 2-cell."""
    if len(face) == 3:
        a, b, c = face
        return [((a, b), 1), ((a, c), -1), ((b, c), 1)]
    if len(face) == 4:
        a, b, c, d = face
        return [((a, b), 1), ((b, c), 1), ((c, d), 1), ((a, d), -1)]
    raise ComplexError(f"2-cell must have 3 or 4 vertices, got {len(face)}")


@dataclass(frozen=True)
class OrientedComplex2:
    """An oriented two-dimensional simplicial or cubical complex.

    Immutable after construction; safe to share across threads.
    """

    kind: str  # "simplicial" or "cubical"
    node_count: int
    edges: tuple[tuple[int, int], ...]
    faces2: tuple[tuple[int, ...], ...]
    b1: sp.csc_matrix  # node_count x n_edges, entries in {-1, 0, +1}
    b2: sp.csc_matrix  # n_edges x n_faces
    coords: np.ndarray | None = None  # (node_count, 2) or None

    _edge_index: dict[tuple[int, int], int] = field(
        init=False, repr=False, compare=False, default_factory=dict
    )
    _neighbors: tuple[tuple[int, ...], ...] = field(
        init=False, repr=False, compare=False, default=()
    )

    def __post_init__(self):
        lookup = {e: j for j, e in enumerate(self.edges)}
        nbrs: list[set[int]] = [set() for _ in range(self.node_count)]
        for u, v in self.edges:
            nbrs[u].add(v)
            nbrs[v].add(u)
        object.__setattr__(self, "_edge_index", lookup)
        object.__setattr__(
            self, "_neighbors", tuple(tuple(sorted(s)) for s in nbrs)
        )

    @property
    def n_edges(self) -> int:
        return len(self.edges)

    @property
    def n_faces(self) -> int:
        return len(self.faces2)

    def edge_id_and_sign(self, u: int, v: int) -> tuple[int, int]:
        """Index of the edge {u, v} and the sign of traversing u -> v."""
        j = self._edge_index.get((u, v))
        if j is not None:
            return j, 1
        j = self._edge_index.get((v, u))
        if j is not None:
            return j, -1
        raise ComplexError(f"no edge between nodes {u} and {v}")

    def has_edge(self, u: int, v: int) -> bool:
        return (u, v) in self._edge_index or (v, u) in self._edge_index


def neighborhood(c: OrientedComplex2, i: int) -> tuple[int, ...]:
    """Nodes adjacent to ``i``, in ascending order."""
    if not 0 <= i < c.node_count:
        raise ComplexError(f"node id {i} out of range [0, {c.node_count})")
    return c._neighbors[i]


def _build_matrices(node_count, edges, faces):
    rows, cols, vals = [], [], []
    for j, (u, v) in enumerate(edges):
        rows += [u, v]
        cols += [j, j]
        vals += [-1, 1]
    b1 = sp.csc_matrix(
        (vals, (rows, cols)), shape=(node_count, len(edges)), dtype=np.int64
    )
    lookup = {e: j for j, e in enumerate(edges)}
    rows, cols, vals = [], [], []
    for k, face in enumerate(faces):
        for (u, v), coeff in _face_boundary(face):
            if (u, v) in lookup:
                rows.append(lookup[(u, v)])
            else:
                rows.append(lookup[(v, u)])
                coeff = -coeff
            cols.append(k)
            vals.append(coeff)
    b2 = sp.csc_matrix(
        (vals, (rows, cols)), shape=(len(edges), len(faces)), dtype=np.int64
    )
    return b1, b2


def build_simplicial(
    node_count: int,
    triangles: Iterable[Sequence[int]] = (),
    extra_edges: Iterable[Sequence[int]] = (),
    coords: np.ndarray | None = None,
) -> OrientedComplex2:
    """Build a simplicial 2-complex from triangles plus extra edges.

    The edge set is the union of all triangle faces and ``extra_edges``,
    deduplicated and sorted lexicographically.  All simplices are oriented
    by increasing node label.
    """
    tri_set: set[tuple[int, int, int]] = set()
    edge_set: set[tuple[int, int]] = set()
    for tri in triangles:
        if len(set(tri)) != 3:
            raise ComplexError(f"degenerate triangle {tuple(tri)}")
        a, b, c = sorted(tri)
        _check_node_ids((a, b, c), node_count)
        tri_set.add((a, b, c))
        edge_set.update([(a, b), (a, c), (b, c)])
    for e in extra_edges:
        if len(set(e)) != 2:
            raise ComplexError(f"degenerate edge {tuple(e)}")
        u, v = sorted(e)
        _check_node_ids((u, v), node_count)
        edge_set.add((u, v))
    edges = tuple(sorted(edge_set))
    faces = tuple(sorted(tri_set))
    b1, b2 = _build_matrices(node_count, edges, faces)
    c = OrientedComplex2(
        kind="simplicial",
        node_count=node_count,
        edges=edges,
        faces2=faces,
        b1=b1,
        b2=b2,
        coords=None if coords is None else np.asarray(coords, float),
    )
    return c


def _check_node_ids(ids, node_count):
    for i in ids:
        if not 0 <= int(i) < node_count:
            raise ComplexError(f"node id {i} out of range [0, {node_count})")


def build_cubical_from_grid(grid: np.ndarray) -> OrientedComplex2:
    """Build a cubical 2-complex from a boolean passability grid.

    Nodes are the passable cells (ids in row-major order), edges connect
    4-adjacent passable cells, and a square is added for each 2x2 block of
    passable cells.  Square orientation is the counter-clockwise cycle from
    the lowest-id corner with coordinates (x, y) = (col, row).
    """
    grid = np.asarray(grid, dtype=bool)
    if grid.ndim != 2 or grid.size == 0:
        raise ComplexError("grid must be a nonempty 2-D array")
    h, w = grid.shape
    ids = -np.ones((h, w), dtype=np.int64)
    ids[grid] = np.arange(int(grid.sum()))
    edges: list[tuple[int, int]] = []
    faces: list[tuple[int, ...]] = []
    for r in range(h):
        for col in range(w):
            if not grid[r, col]:
                continue
            i = int(ids[r, col])
            if col + 1 < w and grid[r, col + 1]:
                edges.append((i, int(ids[r, col + 1])))
            if r + 1 < h and grid[r + 1, col]:
                edges.append((i, int(ids[r + 1, col])))
            if (
                r + 1 < h
                and col + 1 < w
                and grid[r, col + 1]
                and grid[r + 1, col]
                and grid[r + 1, col + 1]
            ):
                faces.append(
                    (
                        i,
                        int(ids[r, col + 1]),
                        int(ids[r + 1, col + 1]),
                        int(ids[r + 1, col]),
                    )
                )
    edges.sort()
    faces.sort()
    n = int(grid.sum())
    b1, b2 = _build_matrices(n, tuple(edges), tuple(faces))
    rr, cc = np.nonzero(grid)
    coords = np.stack([cc, rr], axis=1).astype(float)
    return OrientedComplex2(
        kind="cubical",
        node_count=n,
        edges=tuple(edges),
        faces2=tuple(faces),
        b1=b1,
        b2=b2,
        coords=coords,
    )


def skeleton(c: OrientedComplex2) -> OrientedComplex2:
    """The 1-skeleton: same nodes and edges, no 2-cells."""
    b2 = sp.csc_matrix((c.n_edges, 0), dtype=np.int64)
    return OrientedComplex2(
        kind=c.kind,
        node_count=c.node_count,
        edges=c.edges,
        faces2=(),
        b1=c.b1.copy(),
        b2=b2,
        coords=c.coords,
    )


# ---------------------------------------------------------------------------
# Basis transforms


@dataclass(frozen=True)
class PermutationSet:
    """Permutations of the node/edge/face index ranges (gather convention:
    ``new[a] = old[p[a]]``)."""

    p0: np.ndarray
    p1: np.ndarray
    p2: np.ndarray

    def __post_init__(self):
        for name in ("p0", "p1", "p2"):
            p = np.asarray(getattr(self, name), dtype=np.int64)
            object.__setattr__(self, name, p)
            if sorted(p.tolist()) != list(range(len(p))):
                raise ComplexError(f"{name} is not a permutation")

    @staticmethod
    def identity(c: OrientedComplex2) -> "PermutationSet":
        return PermutationSet(
            np.arange(c.node_count), np.arange(c.n_edges), np.arange(c.n_faces)
        )

    @staticmethod
    def random(c: OrientedComplex2, rng: np.random.Generator) -> "PermutationSet":
        return PermutationSet(
            rng.permutation(c.node_count),
            rng.permutation(c.n_edges),
            rng.permutation(c.n_faces),
        )

    def inverse(self) -> "PermutationSet":
        return PermutationSet(
            np.argsort(self.p0), np.argsort(self.p1), np.argsort(self.p2)
        )


@dataclass(frozen=True)
class OrientationFlip:
    """Sign vectors for edges and 2-cells; node signs are fixed to +1."""

    d1: np.ndarray
    d2: np.ndarray

    def __post_init__(self):
        for name in ("d1", "d2"):
            d = np.asarray(getattr(self, name), dtype=np.int64)
            object.__setattr__(self, name, d)
            if d.size and not np.isin(d, (-1, 1)).all():
                raise ComplexError(f"{name} entries must be +1 or -1")

    @staticmethod
    def identity(c: OrientedComplex2) -> "OrientationFlip":
        return OrientationFlip(
            np.ones(c.n_edges, dtype=np.int64), np.ones(c.n_faces, dtype=np.int64)
        )

    @staticmethod
    def random(c: OrientedComplex2, rng: np.random.Generator) -> "OrientationFlip":
        return OrientationFlip(
            rng.choice([-1, 1], size=c.n_edges),
            rng.choice([-1, 1], size=c.n_faces),
        )


def apply_permutation(c: OrientedComplex2, perm: PermutationSet) -> OrientedComplex2:
    """Relabel the node/edge/face bases of ``c`` by ``perm``.

    Returns the complex whose boundary matrices are ``P0 b1 P1^T`` and
    ``P1 b2 P2^T``; cell lists are reindexed consistently (node ``i``
    becomes ``argsort(p0)[i]``).
    """
    if (
        len(perm.p0) != c.node_count
        or len(perm.p1) != c.n_edges
        or len(perm.p2) != c.n_faces
    ):
        raise ComplexError("permutation sizes do not match complex")
    inv0 = np.argsort(perm.p0)
    edges = tuple(
        (int(inv0[u]), int(inv0[v]))
        for u, v in (c.edges[j] for j in perm.p1)
    )
    faces = tuple(
        _normalize_face([int(inv0[i]) for i in c.faces2[k]]) for k in perm.p2
    )
    b1 = c.b1[perm.p0][:, perm.p1].tocsc()
    b2 = c.b2[perm.p1][:, perm.p2].tocsc()
    coords = None if c.coords is None else c.coords[perm.p0]
    return OrientedComplex2(
        kind=c.kind,
        node_count=c.node_count,
        edges=edges,
        faces2=faces,
        b1=b1,
        b2=b2,
        coords=coords,
    )


def apply_orientation_flip(
    c: OrientedComplex2, flip: OrientationFlip
) -> OrientedComplex2:
    """Reverse the orientation of the cells where the sign vectors are -1."""
    if len(flip.d1) != c.n_edges or len(flip.d2) != c.n_faces:
        raise ComplexError("flip sizes do not match complex")
    edges = tuple(
        (v, u) if s < 0 else (u, v) for (u, v), s in zip(c.edges, flip.d1)
    )
    faces = tuple(
        _normalize_face(f[::-1]) if s < 0 else f
        for f, s in zip(c.faces2, flip.d2)
    )
    d1 = sp.diags(flip.d1, dtype=np.int64)
    d2 = sp.diags(flip.d2, dtype=np.int64)
    b1 = (c.b1 @ d1).tocsc()
    b2 = (d1 @ c.b2 @ d2).tocsc()
    return OrientedComplex2(
        kind=c.kind,
        node_count=c.node_count,
        edges=edges,
        faces2=faces,
        b1=b1,
        b2=b2,
        coords=c.coords,
    )


def relabel_nodes(c: OrientedComplex2, sigma: np.ndarray) -> OrientedComplex2:
    """Rebuild ``c`` from scratch with node ``i`` renamed to ``sigma[i]``.

    The result is in canonical form (sorted, label-oriented cells); use
    ``induced_transform`` for the equivalent basis transform of ``c``.
    """
    sigma = np.asarray(sigma, dtype=np.int64)
    if sorted(sigma.tolist()) != list(range(c.node_count)):
        raise ComplexError("sigma is not a permutation of the node ids")
    if c.kind == "simplicial":
        coords = None
        if c.coords is not None:
            coords = np.empty_like(c.coords)
            coords[sigma] = c.coords
        return build_simplicial(
            c.node_count,
            triangles=[tuple(sigma[list(f)]) for f in c.faces2],
            extra_edges=[(sigma[u], sigma[v]) for u, v in c.edges],
            coords=coords,
        )
    raise ComplexError("relabel_nodes supports simplicial complexes only")


def induced_transform(
    c: OrientedComplex2, sigma: np.ndarray
) -> tuple[PermutationSet, OrientationFlip]:
    """Basis transform (P, D) equivalent to renaming node ``i`` to ``sigma[i]``.

    ``apply_orientation_flip(apply_permutation(c, P), D)`` equals
    ``relabel_nodes(c, sigma)`` entrywise, matrices and cell lists alike.
    """
    sigma = np.asarray(sigma, dtype=np.int64)
    renamed_edges = [tuple(sorted((sigma[u], sigma[v]))) for u, v in c.edges]
    p1 = np.array(
        sorted(range(c.n_edges), key=lambda j: renamed_edges[j]), dtype=np.int64
    )
    d1 = np.array(
        [1 if sigma[c.edges[j][0]] < sigma[c.edges[j][1]] else -1 for j in p1],
        dtype=np.int64,
    )
    renamed_faces = [tuple(sorted(sigma[list(f)])) for f in c.faces2]
    p2 = np.array(
        sorted(range(c.n_faces), key=lambda k: renamed_faces[k]), dtype=np.int64
    )
    d2 = np.array(
        [_orientation_parity(sigma[list(c.faces2[k])]) for k in p2], dtype=np.int64
    )
    return PermutationSet(np.argsort(sigma), p1, p2), OrientationFlip(d1, d2)


def _orientation_parity(face) -> int:
    """+1 if sorting the triple is an even permutation, else -1."""
    face = list(face)
    if len(face) != 3:
        raise ComplexError("orientation parity is defined for triangles only")
    perm = np.argsort(face)
    inversions = sum(perm[i] > perm[j] for i in range(3) for j in range(i + 1, 3))
    return 1 if inversions % 2 == 0 else -1


# ---------------------------------------------------------------------------
# Validation


def validate(c: OrientedComplex2) -> None:
    """Check structural invariants; raise ComplexError on the first violation.

    Checks id ranges, duplicate-free cells, closure under restriction,
    boundary-matrix entry patterns, and exact integer ``b1 @ b2 == 0``.
    """
    n, m, p = c.node_count, c.n_edges, c.n_faces
    if c.b1.shape != (n, m):
        raise ComplexError(f"b1 shape {c.b1.shape} != ({n}, {m})")
    if c.b2.shape != (m, p):
        raise ComplexError(f"b2 shape {c.b2.shape} != ({m}, {p})")
    undirected = set()
    for j, (u, v) in enumerate(c.edges):
        if u == v:
            raise ComplexError(f"edge {j} has repeated vertex {u}")
        _check_node_ids((u, v), n)
        key = (min(u, v), max(u, v))
        if key in undirected:
            raise ComplexError(f"duplicate edge {key}")
        undirected.add(key)
    expected_nnz = 3 if c.kind == "simplicial" else 4
    seen_faces = set()
    for k, face in enumerate(c.faces2):
        if len(face) != expected_nnz:
            raise ComplexError(
                f"2-cell {k} has {len(face)} vertices, expected {expected_nnz}"
            )
        if len(set(face)) != len(face):
            raise ComplexError(f"2-cell {k} has repeated vertices: {face}")
        _check_node_ids(face, n)
        key = tuple(sorted(face))
        if key in seen_faces:
            raise ComplexError(f"duplicate 2-cell {key}")
        seen_faces.add(key)
        for (u, v), _ in _face_boundary(face):
            if (min(u, v), max(u, v)) not in undirected:
                raise ComplexError(
                    f"2-cell {face} is missing boundary edge ({u}, {v})"
                )
    b1 = c.b1.tocsc()
    for j in range(m):
        col = b1[:, j]
        vals = sorted(col.data.tolist())
        if vals != [-1, 1]:
            raise ComplexError(f"b1 column {j} entries {vals} != [-1, +1]")
        u, v = c.edges[j]
        if b1[u, j] != -1 or b1[v, j] != 1:
            raise ComplexError(f"b1 column {j} does not match edge ({u}, {v})")
    b2 = c.b2.tocsc()
    for k in range(p):
        if b2[:, k].nnz != expected_nnz:
            raise ComplexError(
                f"b2 column {k} has {b2[:, k].nnz} nonzeros, "
                f"expected {expected_nnz}"
            )
    prod = c.b1 @ c.b2
    prod.eliminate_zeros()
    if prod.nnz != 0:
        raise ComplexError("b1 @ b2 is not the zero matrix")


# ---------------------------------------------------------------------------
# File formats


def write_complex(c: OrientedComplex2, path) -> None:
    """Write the text complex format: `kind n`, edges section, faces section."""
    with open(path, "w") as fh:
        fh.write(f"{c.kind} {c.node_count}\n")
        fh.write("edges\n")
        for u, v in c.edges:
            fh.write(f"{u} {v}\n")
        fh.write("faces\n")
        for face in c.faces2:
            fh.write(" ".join(str(i) for i in face) + "\n")


def read_complex(path) -> OrientedComplex2:
    """Parse the text complex format; errors name the offending line."""
    with open(path) as fh:
        lines = fh.read().splitlines()
    if not lines:
        raise ComplexError(f"{path}: empty file")
    head = lines[0].split()
    if len(head) != 2 or head[0] not in ("simplicial", "cubical"):
        raise ComplexError(f"{path}:1: expected header 'kind n', got {lines[0]!r}")
    kind, n = head[0], int(head[1])
    if len(lines) < 2 or lines[1].strip() != "edges":
        raise ComplexError(f"{path}:2: expected 'edges' section")
    edges: list[tuple[int, int]] = []
    faces: list[tuple[int, ...]] = []
    section = "edges"
    for lineno, line in enumerate(lines[2:], start=3):
        line = line.strip()
        if not line:
            continue
        if line == "faces":
            section = "faces"
            continue
        try:
            ids = tuple(int(tok) for tok in line.split())
        except ValueError:
            raise ComplexError(f"{path}:{lineno}: non-integer field in {line!r}")
        if section == "edges":
            if len(ids) != 2:
                raise ComplexError(
                    f"{path}:{lineno}: edge line needs 2 ids, got {len(ids)}"
                )
            edges.append((ids[0], ids[1]))
        else:
            if len(ids) not in (3, 4):
                raise ComplexError(
                    f"{path}:{lineno}: face line needs 3 or 4 ids, got {len(ids)}"
                )
            faces.append(ids)
    b1, b2 = _build_matrices(n, tuple(edges), tuple(faces))
    c = OrientedComplex2(
        kind=kind,
        node_count=n,
        edges=tuple(edges),
        faces2=tuple(faces),
        b1=b1,
        b2=b2,
    )
    validate(c)
    return c


DEFAULT_PASSABLE = frozenset({".", "G"})


def parse_map(text: str, passable: frozenset[str] = DEFAULT_PASSABLE) -> np.ndarray:
    """Parse the Sturtevant `.map` benchmark format into a boolean grid."""
    lines = text.splitlines()
    height = width = None
    row_start = None
    for i, line in enumerate(lines):
        tok = line.split()
        if not tok:
            continue
        if tok[0] == "height":
            height = int(tok[1])
        elif tok[0] == "width":
            width = int(tok[1])
        elif tok[0] == "map":
            row_start = i + 1
            break
    if height is None or width is None or row_start is None:
        raise ComplexError("map file is missing height/width/map header")
    rows = lines[row_start : row_start + height]
    if len(rows) != height:
        raise ComplexError(
            f"map file has {len(rows)} rows, header says {height}"
        )
    grid = np.zeros((height, width), dtype=bool)
    for r, row in enumerate(rows):
        if len(row) < width:
            raise ComplexError(
                f"map row {r + 1} has {len(row)} chars, header says {width}"
            )
        grid[r] = [ch in passable for ch in row[:width]]
    return grid


def render_map(grid: np.ndarray) -> str:
    """Inverse of ``parse_map`` (passable '.', impassable '@')."""
    grid = np.asarray(grid, dtype=bool)
    h, w = grid.shape
    lines = ["type octile", f"height {h}", f"width {w}", "map"]
    for r in range(h):
        lines.append("".join("." if grid[r, c] else "@" for c in range(w)))
    return "\n".join(lines) + "\n"


def read_map(path, passable: frozenset[str] = DEFAULT_PASSABLE) -> np.ndarray:
    with open(path) as fh:
        return parse_map(fh.read(), passable)

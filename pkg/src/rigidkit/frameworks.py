"""Frameworks: a graph with vertex positions in one model space.

Includes edge lengths, isometry comparison, the spanning test, and the JSON
interchange format used by the CLI and the example gallery.
"""

import json
from dataclasses import dataclass

import numpy as np

from . import spaces
from ._linalg import RANK_TOL, numerical_rank
from .errors import (
    AntipodalEdge,
    DegenerateEdge,
    GraphError,
    GraphMismatch,
)
from .graphs import Graph, PlanarEmbedding, canonical_edge, graph, validate_embedding
from .spaces import EPS_MODEL, ModelPoint, Space, validate_point


@dataclass(frozen=True, eq=False)
class Framework:
    """A framework (Gamma, p): graph, space, and embedded vertex coordinates.

    `coords` has shape (n, d+1); Euclidean rows carry an explicit leading 1.
    """

    graph: Graph
    space: Space
    coords: np.ndarray
    embedding: PlanarEmbedding = None

    @property
    def n(self) -> int:
        return self.graph.vertex_count

    @property
    def m(self) -> int:
        return self.graph.edge_count

    @property
    def dim(self) -> int:
        return self.space.dim

    def point(self, i: int) -> ModelPoint:
        return ModelPoint(self.space, self.coords[i])

    def points(self):
        return [self.point(i) for i in range(self.n)]

    def spatial(self) -> np.ndarray:
        """Spatial coordinates (drops the homogeneous column; Euclidean only)."""
        return self.coords[:, 1:]

    def with_embedding(self, embedding: PlanarEmbedding) -> "Framework":
        return Framework(self.graph, self.space, self.coords, embedding)

    def __repr__(self):
        return "Framework(%s, n=%d, m=%d)" % (self.space, self.n, self.m)


class EdgeLengthMap:
    """Edge-indexed positive lengths, aligned with the graph's edge order."""

    def __init__(self, edges, values):
        self.edges = tuple(edges)
        self.values = np.asarray(values, dtype=float)
        self._index = {canonical_edge(i, j): k for k, (i, j) in enumerate(self.edges)}

    def __getitem__(self, edge):
        return float(self.values[self._index[canonical_edge(*edge)]])

    def __len__(self):
        return len(self.edges)

    def __iter__(self):
        return iter(self.edges)

    def value_set(self, decimals=9):
        return sorted(set(np.round(self.values, decimals)))


def build_framework(g: Graph, space: Space, coords, embedding=None,
                    eps=EPS_MODEL, renormalize=False) -> Framework:
    """Validate all points and edge non-degeneracy, then assemble a Framework.

    `coords` may be given per vertex either as full (d+1)-vectors or, for
    Euclidean space, as d-vectors (the leading 1 is added).
    """
    rows = []
    for i, c in enumerate(coords):
        c = np.asarray(c, dtype=float)
        if space.is_euclidean and c.shape == (space.dim,):
            c = np.concatenate([[1.0], c])
        rows.append(validate_point(c, space, eps=eps, renormalize=renormalize).coords)
    if len(rows) != g.vertex_count:
        raise GraphError(
            "graph has %d vertices but %d coordinate rows given" % (g.vertex_count, len(rows))
        )
    mat = np.array(rows) if rows else np.zeros((0, space.ambient_dim))
    mat.flags.writeable = False
    for i, j in g.edges:
        if np.max(np.abs(mat[i] - mat[j])) <= eps:
            raise DegenerateEdge("edge (%d, %d) has coincident endpoints" % (i, j))
        if space.is_spherical and np.max(np.abs(mat[i] + mat[j])) <= eps:
            raise AntipodalEdge("edge (%d, %d) joins antipodal points" % (i, j))
    if embedding is not None and embedding.graph != g:
        raise GraphMismatch("embedding belongs to a different graph")
    return Framework(g, space, mat, embedding)


def edge_lengths(fw: Framework) -> EdgeLengthMap:
    vals = [spaces.distance(fw.point(i), fw.point(j)) for i, j in fw.graph.edges]
    return EdgeLengthMap(fw.graph.edges, vals)


def is_isometric(fw1: Framework, fw2: Framework, tol=1e-9) -> bool:
    """True iff the two frameworks have the same edge-length map within tol."""
    if fw1.graph != fw2.graph or fw1.space != fw2.space:
        raise GraphMismatch("frameworks differ in graph or space")
    l1 = edge_lengths(fw1).values
    l2 = edge_lengths(fw2).values
    if l1.size == 0:
        return True
    return bool(np.max(np.abs(l1 - l2)) <= tol)


def is_spanning(fw: Framework, tol=RANK_TOL) -> bool:
    """True iff the vertices are not contained in a proper geodesic subspace.

    In the canonical embeddings this is a single linear-rank test: geodesic
    subspaces are intersections with linear subspaces of R^(d+1), and the
    Euclidean affine-span condition is equivalent because of the constant
    leading coordinate.
    """
    if fw.n == 0:
        return False
    return numerical_rank(fw.coords, tol) == fw.space.ambient_dim


# --- JSON interchange --------------------------------------------------------

@dataclass
class FrameworkDocument:
    """A framework plus the optional attachments of the file format."""

    framework: Framework
    stress: dict = None      # canonical edge tuple -> float
    load: np.ndarray = None  # (n, d+1) ambient vectors
    field: np.ndarray = None
    description: str = None


def framework_to_dict(fw: Framework, stress=None, load=None, field=None,
                      description=None) -> dict:
    d = {
        "space": fw.space.kind.value,
        "dim": fw.space.dim,
        "vertices": [
            [float(x) for x in (row[1:] if fw.space.is_euclidean else row)]
            for row in fw.coords
        ],
        "edges": [[int(i), int(j)] for i, j in fw.graph.edges],
    }
    if description is not None:
        d["description"] = description
    if fw.embedding is not None:
        d["faces"] = [list(map(int, f)) for f in fw.embedding.faces]
        if fw.embedding.exterior_face is not None:
            d["exterior_face"] = int(fw.embedding.exterior_face)
    if stress is not None:
        d["stress"] = {"%d-%d" % e: float(w) for e, w in sorted(stress.items())}
    if load is not None:
        d["load"] = [[float(x) for x in row] for row in np.asarray(load)]
    if field is not None:
        d["field"] = [[float(x) for x in row] for row in np.asarray(field)]
    return d


def framework_from_dict(data: dict, eps=EPS_MODEL) -> FrameworkDocument:
    try:
        space = spaces.space_from_code(data["space"], int(data["dim"]))
        g = graph(len(data["vertices"]), [tuple(e) for e in data["edges"]])
    except (KeyError, ValueError, TypeError) as exc:
        raise GraphError("malformed framework data: %s" % exc) from None
    embedding = None
    if "faces" in data:
        embedding = validate_embedding(g, data["faces"], data.get("exterior_face"))
    fw = build_framework(g, space, data["vertices"], embedding, eps=eps)
    doc = FrameworkDocument(fw, description=data.get("description"))
    if "stress" in data:
        stress = {}
        for key, w in data["stress"].items():
            i, j = (int(t) for t in key.split("-"))
            if not g.has_edge(i, j):
                raise GraphError("stress on non-edge %s" % key)
            stress[canonical_edge(i, j)] = float(w)
        doc.stress = stress
    for name in ("load", "field"):
        if name in data:
            arr = np.array(data[name], dtype=float)
            if arr.shape != (fw.n, space.ambient_dim):
                raise GraphError(
                    "%s must be %d ambient (d+1)-vectors" % (name, fw.n)
                )
            setattr(doc, name, arr)
    return doc


def save_framework(path, fw: Framework, **attachments):
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(framework_to_dict(fw, **attachments), fh, indent=1)
        fh.write("\n")


def load_framework(path, eps=EPS_MODEL) -> FrameworkDocument:
    with open(path, encoding="utf-8") as fh:
        return framework_from_dict(json.load(fh), eps=eps)

"""Statics: loads, stresses, equilibrium, resolution, and virtual work.

Equilibrium is tested through one uniform criterion in all three geometries:
the total force bivector sum_i p_i ^ f_i must vanish.  Loads are kept in
ambient (d+1)-coordinates with tangency enforced at construction, so the
same code path serves E, S and H.
"""

from dataclasses import dataclass

import numpy as np

from . import _linalg, spaces
from ._linalg import RANK_TOL
from .errors import BaseMismatch, GraphError
from .frameworks import Framework
from .graphs import canonical_edge
from .kinematics import (
    VectorField,
    require_same_framework,
    validate_tangent_field,
    virtual_work_field,
)
from .spaces import EPS_MODEL, Bivector, ModelPoint, TangentVector, wedge, zero_bivector

#: Relative tolerance for the bivector equilibrium test (max-abs norm).
EQUILIBRIUM_TOL = 1e-8


@dataclass(frozen=True, eq=False)
class Load:
    """A tangent force vector per vertex of a framework."""

    framework: Framework
    vecs: np.ndarray

    def __getitem__(self, i):
        return self.vecs[i]

    def norm(self) -> float:
        return float(np.linalg.norm(self.vecs))


def load(fw: Framework, vecs, eps=EPS_MODEL) -> Load:
    return Load(fw, validate_tangent_field(fw, vecs, eps))


def zero_load(fw: Framework) -> Load:
    return Load(fw, np.zeros((fw.n, fw.space.ambient_dim)))


class Stress:
    """Symmetric edge weights w_ij = w_ji, stored per undirected edge."""

    def __init__(self, edges, values):
        self.edges = tuple(canonical_edge(i, j) for i, j in edges)
        self.values = np.asarray(values, dtype=float)
        if self.values.shape != (len(self.edges),):
            raise GraphError("stress needs one value per edge")
        self._index = {e: k for k, e in enumerate(self.edges)}

    def __getitem__(self, edge):
        return float(self.values[self._index[canonical_edge(*edge)]])

    def __len__(self):
        return len(self.edges)

    def scaled(self, factor: float) -> "Stress":
        return Stress(self.edges, self.values * factor)

    def as_dict(self) -> dict:
        return {e: float(w) for e, w in zip(self.edges, self.values)}

    def __repr__(self):
        return "Stress(%s)" % (self.as_dict(),)


def stress_from_dict(fw: Framework, mapping: dict) -> Stress:
    vals = np.zeros(fw.m)
    idx = fw.graph.edge_index()
    for e, w in mapping.items():
        key = canonical_edge(*e)
        if key not in idx:
            raise GraphError("stress on non-edge %r" % (e,))
        vals[idx[key]] = float(w)
    return Stress(fw.graph.edges, vals)


def force_bivector(p: ModelPoint, f: TangentVector) -> Bivector:
    """The bivector p ^ f of a force (p, f)."""
    if f.base is not p and not f.base.close_to(p):
        raise BaseMismatch("force vector is based at a different point")
    return wedge(p.coords, f.vec, p.space.dim)


def net_bivector(fw: Framework, ld: Load) -> Bivector:
    require_same_framework(fw, ld.framework)
    total = zero_bivector(fw.dim)
    for i in range(fw.n):
        total = total + wedge(fw.coords[i], ld.vecs[i], fw.dim)
    return total


def is_equilibrium_load(fw: Framework, ld: Load, tol=EQUILIBRIUM_TOL) -> bool:
    """True iff the total force bivector vanishes (relative max-abs norm)."""
    require_same_framework(fw, ld.framework)
    per_vertex = [wedge(fw.coords[i], ld.vecs[i], fw.dim).norm_inf() for i in range(fw.n)]
    scale = max(per_vertex) if per_vertex else 0.0
    if scale == 0.0:
        return True
    return net_bivector(fw, ld).norm_inf() <= tol * scale


def resolution_matrix(fw: Framework) -> np.ndarray:
    """Ambient matrix of the map stress -> resolved load, shape (n*(d+1), m).

    Column for edge ij adds dist(p_i, p_j) e_ij at vertex i and the reversed
    vector at vertex j; in the Euclidean case this is just p_j - p_i.
    """
    amb = fw.space.ambient_dim
    mat = np.zeros((fw.n * amb, fw.m))
    for k, (i, j) in enumerate(fw.graph.edges):
        if fw.space.is_euclidean:
            at_i = fw.coords[j] - fw.coords[i]
            at_j = -at_i
        else:
            pi, pj = fw.point(i), fw.point(j)
            dist = spaces.distance(pi, pj)
            at_i = dist * spaces.unit_tangent(pi, pj).vec
            at_j = dist * spaces.unit_tangent(pj, pi).vec
        mat[i * amb : (i + 1) * amb, k] = at_i
        mat[j * amb : (j + 1) * amb, k] = at_j
    return mat


def apply_stress(fw: Framework, w: Stress) -> Load:
    """The load resolved by `w`: f_i = sum_j w_ij dist(p_i, p_j) e_ij."""
    if tuple(w.edges) != tuple(fw.graph.edges):
        raise GraphError("stress edge order does not match the framework")
    flat = resolution_matrix(fw) @ w.values
    return Load(fw, flat.reshape(fw.n, fw.space.ambient_dim))


@dataclass(frozen=True)
class Unresolvable:
    """Returned by resolve_load when no stress reproduces the load."""

    residual: float


def resolve_load(fw: Framework, ld: Load, tol=1e-8):
    """Minimum-norm least-squares stress resolving `ld`, or Unresolvable.

    When self-stresses exist the resolving stress is non-unique; the
    minimum-norm representative is the deterministic choice.
    """
    require_same_framework(fw, ld.framework)
    target = ld.vecs.ravel()
    w, resid = _linalg.min_norm_lstsq(resolution_matrix(fw), target)
    scale = np.linalg.norm(target)
    if scale == 0.0:
        return Stress(fw.graph.edges, np.zeros(fw.m))
    if resid > tol * scale:
        return Unresolvable(resid)
    return Stress(fw.graph.edges, w)


def self_stress_space(fw: Framework, tol=RANK_TOL) -> list:
    """Orthonormal basis of the stresses resolving the zero load."""
    basis = _linalg.nullspace(resolution_matrix(fw), tol)
    return [Stress(fw.graph.edges, row) for row in basis]


def bivector_map_matrix(fw: Framework) -> np.ndarray:
    """Matrix of (ambient load) -> total bivector, shape (C(d+1,2), n*(d+1))."""
    amb = fw.space.ambient_dim
    pairs = spaces.bivector_index_pairs(fw.dim)
    mat = np.zeros((len(pairs), fw.n * amb))
    for i in range(fw.n):
        for a in range(amb):
            unit = np.zeros(amb)
            unit[a] = 1.0
            mat[:, i * amb + a] = wedge(fw.coords[i], unit, fw.dim).comps
    return mat


def tangency_matrix(fw: Framework) -> np.ndarray:
    """Rows constraining ambient per-vertex vectors to the tangent spaces."""
    amb = fw.space.ambient_dim
    mat = np.zeros((fw.n, fw.n * amb))
    g = fw.space.metric_signs
    for i in range(fw.n):
        if fw.space.is_euclidean:
            row = np.zeros(amb)
            row[0] = 1.0
        else:
            row = g * fw.coords[i]
        mat[i, i * amb : (i + 1) * amb] = row
    return mat


@dataclass(frozen=True, eq=False)
class StaticSpaces:
    """Dimensions of the equilibrium and resolvable load spaces."""

    framework: Framework
    dim_F: int
    dim_F0: int
    self_stress_basis: tuple

    @property
    def static_dof(self) -> int:
        return self.dim_F - self.dim_F0

    @property
    def self_stress_count(self) -> int:
        return len(self.self_stress_basis)


def static_spaces(fw: Framework, tol=RANK_TOL) -> StaticSpaces:
    """Equilibrium-load dimension, resolvable-load dimension, self-stresses.

    dim F is the nullity of the bivector map restricted to tangent loads
    (computed with explicit tangency rows, so non-spanning frameworks are
    handled correctly); dim F_0 is the rank of the resolution operator.
    """
    stacked = np.vstack([bivector_map_matrix(fw), tangency_matrix(fw)])
    dim_f = stacked.shape[1] - _linalg.numerical_rank(stacked, tol)
    res = resolution_matrix(fw)
    dim_f0 = _linalg.numerical_rank(res, tol)
    return StaticSpaces(fw, dim_f, dim_f0, tuple(self_stress_space(fw, tol)))


def static_dof(fw: Framework, tol=RANK_TOL) -> int:
    return static_spaces(fw, tol).static_dof


def virtual_work(q: VectorField, f: Load) -> float:
    """The pairing <q, f> = sum_i <q_i, f_i> (signed products, per vertex)."""
    require_same_framework(q.framework, f.framework)
    return virtual_work_field(q, f.vecs)

"""Infinitesimal isometric deformations and the rigidity operator.

The operator realizes the linearized length constraints

    <p_i - p_j, q_i - q_j> = 0        (Euclidean)
    <p_i, q_j> + <q_i, p_j> = 0       (spherical / hyperbolic)

one row per edge; in the non-Euclidean cases candidate fields are ambient
(d+1)-vectors and one tangency row <p_i, q_i> = 0 is appended per vertex, so
a single numerical nullspace yields exactly the motion space V.
"""

from dataclasses import dataclass, field as dataclass_field
from itertools import combinations

import numpy as np

from . import _linalg
from ._linalg import RANK_TOL
from .errors import FrameworkMismatch, InternalInvariantError, NotTangent
from .frameworks import Framework, is_spanning
from .spaces import EPS_MODEL


def _same_framework(a: Framework, b: Framework) -> bool:
    return a is b or (
        a.graph == b.graph and a.space == b.space and np.array_equal(a.coords, b.coords)
    )


def validate_tangent_field(fw: Framework, vecs, eps=EPS_MODEL) -> np.ndarray:
    """Check per-vertex tangency of an (n, d+1) array of ambient vectors."""
    vecs = np.array(vecs, dtype=float)
    if vecs.shape != (fw.n, fw.space.ambient_dim):
        raise NotTangent(
            "expected an (%d, %d) array of ambient vectors" % (fw.n, fw.space.ambient_dim)
        )
    scale = max(1.0, float(np.max(np.abs(vecs))) if vecs.size else 0.0)
    if fw.space.is_euclidean:
        bad = np.abs(vecs[:, 0]) > eps * scale
    else:
        g = fw.space.metric_signs
        bad = np.abs(np.einsum("ia,a,ia->i", fw.coords, g, vecs)) > eps * scale * np.maximum(
            1.0, np.max(np.abs(fw.coords), axis=1)
        )
    if np.any(bad):
        raise NotTangent("vectors at vertices %s are not tangent" % np.nonzero(bad)[0].tolist())
    vecs.flags.writeable = False
    return vecs


@dataclass(frozen=True, eq=False)
class VectorField:
    """A tangent vector per vertex, stored as (n, d+1) ambient coordinates."""

    framework: Framework
    vecs: np.ndarray

    def __getitem__(self, i):
        return self.vecs[i]

    def norm(self) -> float:
        return float(np.linalg.norm(self.vecs))


def vector_field(fw: Framework, vecs, eps=EPS_MODEL) -> VectorField:
    return VectorField(fw, validate_tangent_field(fw, vecs, eps))


def zero_field(fw: Framework) -> VectorField:
    return VectorField(fw, np.zeros((fw.n, fw.space.ambient_dim)))


def _flatten(fw: Framework, vecs: np.ndarray) -> np.ndarray:
    if fw.space.is_euclidean:
        return np.asarray(vecs)[:, 1:].ravel()
    return np.asarray(vecs).ravel()


def _unflatten(fw: Framework, flat: np.ndarray) -> np.ndarray:
    if fw.space.is_euclidean:
        out = np.zeros((fw.n, fw.space.ambient_dim))
        out[:, 1:] = flat.reshape(fw.n, fw.dim)
        return out
    return flat.reshape(fw.n, fw.space.ambient_dim)


@dataclass(frozen=True, eq=False)
class RigidityOperator:
    """Linearized edge constraints as a matrix with labeled rows and columns."""

    framework: Framework
    matrix: np.ndarray
    row_labels: tuple
    col_labels: tuple

    @property
    def edge_rows(self) -> np.ndarray:
        return self.matrix[: self.framework.m]

    def rank(self, tol=RANK_TOL) -> int:
        return _linalg.numerical_rank(self.matrix, tol)

    def smallest_singular_values(self, k=2) -> np.ndarray:
        return _linalg.smallest_singular_values(self.matrix, k)

    def edge_residuals(self, q: VectorField) -> np.ndarray:
        """|row . q| per edge, normalized by ||row|| ||q||; for flex checks."""
        flat = _flatten(self.framework, q.vecs)
        vals = self.edge_rows @ flat
        scale = np.linalg.norm(self.edge_rows, axis=1) * max(np.linalg.norm(flat), 1e-300)
        return np.abs(vals) / np.where(scale > 0, scale, 1.0)


def rigidity_operator(fw: Framework) -> RigidityOperator:
    n, m, d = fw.n, fw.m, fw.dim
    if fw.space.is_euclidean:
        cols = n * d
        mat = np.zeros((m, cols))
        for r, (i, j) in enumerate(fw.graph.edges):
            diff = fw.coords[i, 1:] - fw.coords[j, 1:]
            mat[r, i * d : (i + 1) * d] = diff
            mat[r, j * d : (j + 1) * d] = -diff
        rows = tuple(("edge", e) for e in fw.graph.edges)
        cols_lbl = tuple((i, a + 1) for i in range(n) for a in range(d))
        return RigidityOperator(fw, mat, rows, cols_lbl)
    amb = fw.space.ambient_dim
    g = fw.space.metric_signs
    mat = np.zeros((m + n, n * amb))
    for r, (i, j) in enumerate(fw.graph.edges):
        mat[r, i * amb : (i + 1) * amb] = g * fw.coords[j]
        mat[r, j * amb : (j + 1) * amb] = g * fw.coords[i]
    for i in range(n):
        mat[m + i, i * amb : (i + 1) * amb] = g * fw.coords[i]
    rows = tuple(("edge", e) for e in fw.graph.edges) + tuple(
        ("tangency", i) for i in range(n)
    )
    cols_lbl = tuple((i, a) for i in range(n) for a in range(amb))
    return RigidityOperator(fw, mat, rows, cols_lbl)


def motion_space(fw: Framework, tol=RANK_TOL) -> list:
    """Orthonormal basis of V(Gamma, p) as a list of VectorFields."""
    op = rigidity_operator(fw)
    basis = _linalg.nullspace(op.matrix, tol)
    return [VectorField(fw, _unflatten(fw, row)) for row in basis]


def killing_matrices(space) -> list:
    """Ambient matrices whose evaluation q_i = B p_i spans the Killing fields.

    Euclidean: translations plus spatial rotations, as the affine subalgebra
    of gl(d+1) with zero first row.  Spherical: skew matrices.  Hyperbolic:
    G A with A skew (the Lorentz algebra, B^T G = -G B).
    """
    amb = space.ambient_dim
    out = []
    if space.is_euclidean:
        for k in range(1, amb):
            b = np.zeros((amb, amb))
            b[k, 0] = 1.0
            out.append(b)
        for a, b_idx in combinations(range(1, amb), 2):
            m = np.zeros((amb, amb))
            m[a, b_idx] = 1.0
            m[b_idx, a] = -1.0
            out.append(m)
        return out
    g = np.diag(space.metric_signs)
    for a, b_idx in combinations(range(amb), 2):
        skew = np.zeros((amb, amb))
        skew[a, b_idx] = 1.0
        skew[b_idx, a] = -1.0
        out.append(g @ skew)
    return out


def killing_evaluation_matrix(fw: Framework) -> np.ndarray:
    """Columns: each Killing basis field evaluated at the vertices, flattened."""
    mats = killing_matrices(fw.space)
    cols = [
        _flatten(fw, (b @ fw.coords.T).T) for b in mats
    ]
    if not cols:
        return np.zeros((0, 0))
    return np.column_stack(cols)


def trivial_motion_space(fw: Framework, tol=RANK_TOL) -> list:
    """Orthonormal basis of V_0: the Killing fields evaluated at the vertices.

    The dimension is the rank of the evaluation map, which handles
    non-spanning frameworks (where some Killing fields evaluate to zero or
    become dependent).
    """
    k = killing_evaluation_matrix(fw)
    if k.size == 0:
        return []
    u, s, _ = np.linalg.svd(k, full_matrices=False)
    cutoff = tol * s[0] * max(k.shape) if s.size and s[0] > 0 else 0.0
    rank = int(np.sum(s > cutoff))
    return [VectorField(fw, _unflatten(fw, u[:, r])) for r in range(rank)]


def trivial_motion_dim(fw: Framework, tol=RANK_TOL) -> int:
    k = killing_evaluation_matrix(fw)
    return _linalg.numerical_rank(k, tol)


@dataclass(frozen=True, eq=False)
class MotionSpaces:
    """Dimensions and bases of the motion space V and trivial space V_0."""

    framework: Framework
    basis_V: tuple
    basis_V0: tuple
    smallest_sigma: np.ndarray = dataclass_field(default=None)

    @property
    def dim_V(self) -> int:
        return len(self.basis_V)

    @property
    def dim_V0(self) -> int:
        return len(self.basis_V0)

    @property
    def kinematic_dof(self) -> int:
        return self.dim_V - self.dim_V0


def motion_spaces(fw: Framework, tol=RANK_TOL) -> MotionSpaces:
    op = rigidity_operator(fw)
    v = motion_space(fw, tol)
    v0 = trivial_motion_space(fw, tol)
    ms = MotionSpaces(fw, tuple(v), tuple(v0), op.smallest_singular_values())
    if ms.kinematic_dof < 0:
        raise InternalInvariantError(
            "dim V = %d < dim V0 = %d; rank tolerance is inconsistent" % (ms.dim_V, ms.dim_V0)
        )
    return ms


def kinematic_dof(fw: Framework, tol=RANK_TOL) -> int:
    """dim V - dim V_0, both at the same rank tolerance."""
    op = rigidity_operator(fw)
    dim_v = op.matrix.shape[1] - op.rank(tol)
    return dim_v - trivial_motion_dim(fw, tol)


def is_infinitesimally_rigid(fw: Framework, tol=RANK_TOL) -> bool:
    dof = kinematic_dof(fw, tol)
    rigid = dof == 0
    if fw.space.is_euclidean and is_spanning(fw, tol):
        # Rank-formula cross-check; a mismatch would mean the two rank
        # computations disagree, not that the input is bad.
        d = fw.dim
        formula = rigidity_operator(fw).rank(tol) == d * fw.n - d * (d + 1) // 2
        if formula != rigid:
            raise InternalInvariantError(
                "kinematic dof and rank formula disagree (dof=%d)" % dof
            )
    return rigid


def virtual_work_field(q: VectorField, load_vecs: np.ndarray) -> float:
    """Sum over vertices of the signed inner products <q_i, f_i>."""
    fw = q.framework
    g = fw.space.metric_signs
    return float(np.einsum("ia,a,ia->", q.vecs, g, load_vecs))


def require_same_framework(a: Framework, b: Framework):
    if not _same_framework(a, b):
        raise FrameworkMismatch("objects belong to different frameworks")

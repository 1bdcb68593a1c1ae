import numpy as np
import pytest
from hypothesis import given, strategies as st

import rigidkit as rk
from rigidkit import spaces
from rigidkit.errors import (
    AntipodalOrInvalid,
    DegenerateEdge,
    NotTangent,
    OffModel,
    WrongSheet,
    ZeroVector,
)

E2, S2, H2 = rk.euclidean(2), rk.spherical(2), rk.hyperbolic(2)


def test_signed_inner_signature():
    e0 = np.array([1.0, 0.0, 0.0])
    assert rk.signed_inner(e0, e0, S2) == 1.0
    assert rk.signed_inner(e0, e0, H2) == -1.0
    assert rk.signed_inner([1, 3, 4], [1, 1, 1], H2) == 6.0  # -1 + 3 + 4


def test_validate_point_examples():
    assert rk.validate_point([1.0, 3.0, 4.0], E2).coords[0] == 1.0
    p = rk.validate_point([0.6, 0.8, 0.0], S2)
    assert p.inner(p) == pytest.approx(1.0)
    h = rk.validate_point([np.sqrt(2.0), 1.0, 0.0], H2)
    assert h.inner(h) == pytest.approx(-1.0)


def test_validate_point_errors():
    with pytest.raises(OffModel):
        rk.validate_point([2.0, 0.0, 0.0], E2)
    with pytest.raises(OffModel):
        rk.validate_point([0.5, 0.5, 0.0], S2)
    with pytest.raises(WrongSheet):
        rk.validate_point([-np.sqrt(2.0), 1.0, 0.0], H2)


def test_validate_point_renormalize():
    p = rk.validate_point([0.3, 0.4, 0.0], S2, renormalize=True)
    assert p.inner(p) == pytest.approx(1.0)
    q = rk.validate_point([2.0, 6.0, 8.0], E2, renormalize=True)
    assert np.allclose(q.coords, [1.0, 3.0, 4.0])


def _pt(space, coords):
    return rk.validate_point(coords, space)


def test_distance_examples():
    assert rk.distance(_pt(E2, [1, 0, 0]), _pt(E2, [1, 3, 4])) == pytest.approx(5.0)
    assert rk.distance(_pt(S2, [0, 1, 0]), _pt(S2, [0, 0, 1])) == pytest.approx(np.pi / 2)
    h0 = _pt(H2, [1, 0, 0])
    h1 = _pt(H2, [np.cosh(1.0), np.sinh(1.0), 0.0])
    assert rk.distance(h0, h1) == pytest.approx(1.0)


def test_distance_antipodal_edge():
    p = _pt(S2, [0, 1, 0])
    q = _pt(S2, [0, -1, 0])
    assert rk.distance(p, q) == pytest.approx(np.pi)
    with pytest.raises(AntipodalOrInvalid):
        rk.distance(p, q, as_edge=True)


def test_unit_tangent_euclidean():
    e = rk.unit_tangent(_pt(E2, [1, 0, 0]), _pt(E2, [1, 2, 0]))
    assert np.allclose(e.vec, [0.0, 1.0, 0.0])


def test_unit_tangent_spherical_quarter_turn():
    e = rk.unit_tangent(_pt(S2, [0, 1, 0]), _pt(S2, [0, 0, 1]))
    assert np.allclose(e.vec, [0.0, 0.0, 1.0])


def test_unit_tangent_degenerate():
    with pytest.raises(DegenerateEdge):
        rk.unit_tangent(_pt(E2, [1, 0, 0]), _pt(E2, [1, 0, 0]))


@pytest.mark.parametrize("space", [E2, S2, H2, rk.spherical(3), rk.hyperbolic(3)])
def test_unit_tangent_exp_roundtrip(space, rng):
    # exp-map roundtrip oracle: e unit and exp_p(dist * e) reproduces q.
    for _ in range(20):
        if space.is_euclidean:
            a = rk.validate_point(np.r_[1.0, rng.standard_normal(space.dim)], space)
            b = rk.validate_point(np.r_[1.0, rng.standard_normal(space.dim)], space)
        elif space.is_spherical:
            raw = rng.standard_normal((2, space.dim + 1))
            raw /= np.linalg.norm(raw, axis=1, keepdims=True)
            a, b = (rk.validate_point(r, space) for r in raw)
        else:
            sp = 0.7 * rng.standard_normal((2, space.dim))
            raw = np.column_stack([np.sqrt(1 + np.sum(sp**2, axis=1)), sp])
            a, b = (rk.validate_point(r, space) for r in raw)
        if np.allclose(a.coords, b.coords):
            continue
        e = rk.unit_tangent(a, b)
        assert rk.signed_inner(e.vec, e.vec, space) == pytest.approx(1.0, abs=1e-9)
        back = rk.exp_map(a, e, rk.distance(a, b))
        assert np.max(np.abs(back.coords - b.coords)) < 1e-9


def test_exp_map_examples():
    p = _pt(S2, [1, 0, 0])
    v = spaces.tangent_vector(p, [0.0, 1.0, 0.0])
    out = rk.exp_map(p, v, np.pi / 2)
    assert np.allclose(out.coords, [0, 1, 0], atol=1e-12)
    h = _pt(H2, [1, 0, 0])
    vh = spaces.tangent_vector(h, [0.0, 1.0, 0.0])
    out = rk.exp_map(h, vh, 1.0)
    assert np.allclose(out.coords, [np.cosh(1), np.sinh(1), 0], atol=1e-12)
    assert rk.exp_map(h, vh, 0.0) is h


def test_exp_map_zero_vector():
    p = _pt(S2, [1, 0, 0])
    z = spaces.tangent_vector(p, [0.0, 0.0, 0.0])
    with pytest.raises(ZeroVector):
        rk.exp_map(p, z, 1.0)


def test_tangent_vector_invariant():
    p = _pt(S2, [1, 0, 0])
    with pytest.raises(NotTangent):
        spaces.tangent_vector(p, [1.0, 0.0, 0.0])
    pe = _pt(E2, [1, 2, 3])
    with pytest.raises(NotTangent):
        spaces.tangent_vector(pe, [0.5, 0.0, 0.0])


def test_cross3_euclidean_basis():
    out = rk.cross3([0, 1, 0], [0, 0, 1], E2)
    assert np.allclose(out, [1, 0, 0])
    assert np.allclose(rk.cross3([0.3, 1, 2], [0.3, 1, 2], E2), 0.0)


@given(st.lists(st.floats(-5, 5), min_size=6, max_size=6))
def test_cross3_orthogonality(vals):
    u = np.array(vals[:3])
    v = np.array(vals[3:])
    for space in (E2, H2):
        c = rk.cross3(u, v, space)
        if np.linalg.norm(u) < 1e-6 or np.linalg.norm(v) < 1e-6:
            continue
        un, vn = u / np.linalg.norm(u), v / np.linalg.norm(v)
        cn = rk.cross3(un, vn, space)
        assert abs(rk.signed_inner(cn, un, space)) <= 1e-12
        assert abs(rk.signed_inner(cn, vn, space)) <= 1e-12
        # determinant identity
        w = np.array([0.4, -1.2, 0.7])
        assert rk.signed_inner(rk.cross3(u, v, space), w, space) == pytest.approx(
            float(np.linalg.det(np.array([u, v, w]))), abs=1e-9
        )


@pytest.mark.parametrize("d", [1, 2, 3, 4, 5])
def test_bivector_dimension(d):
    assert spaces.zero_bivector(d).comps.size == d * (d + 1) // 2


def test_wedge_antisymmetry(rng):
    x = rng.standard_normal(4)
    y = rng.standard_normal(4)
    assert np.allclose(spaces.wedge(x, y, 3).comps, -spaces.wedge(y, x, 3).comps)
    assert np.allclose(spaces.wedge(x, x, 3).comps, 0.0)


def test_distance_positive_definite(rng):
    for space in (E2, S2, H2):
        if space.is_euclidean:
            p = rk.validate_point([1.0, 0.3, -2.0], space)
        elif space.is_spherical:
            p = rk.validate_point(np.array([0.6, 0.8, 0.0]), space)
        else:
            p = rk.validate_point([np.sqrt(2.0), 1.0, 0.0], space)
        assert rk.distance(p, p) == pytest.approx(0.0, abs=1e-9)

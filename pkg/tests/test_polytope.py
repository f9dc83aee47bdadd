import math

import numpy as np
import pytest
from scipy.spatial import ConvexHull

import geomfix
from mixedform import errors, polytope, surface

CUBE = geomfix.CUBE_NORMALS
OCTA = geomfix.OCTAHEDRON_NORMALS


@pytest.fixture(scope="module")
def cube_fan():
    return polytope.build_fan(CUBE, np.ones(6))


@pytest.fixture(scope="module")
def octa_fan():
    return polytope.build_fan(OCTA, np.full(8, 1.0 / math.sqrt(3.0)))


# =============================================================================
# FAN CONSTRUCTION
# =============================================================================

def test_cube_combinatorics(cube_fan):
    md = cube_fan.metadata
    assert md["faces"] == 6
    assert md["vertices"] == 8
    assert md["edges"] == 12
    assert md["simple"] is True
    assert md["cone_dim"] == 3
    for cyc in cube_fan.face_cycles:
        assert len(cyc) == 4


def test_octahedron_combinatorics(octa_fan):
    md = octa_fan.metadata
    assert md["faces"] == 8
    assert md["vertices"] == 6
    assert md["edges"] == 12
    assert md["simple"] is False        # 4 faces meet at every vertex


def test_gauss_cells_tile_sphere(cube_fan, octa_fan):
    for fan in (cube_fan, octa_fan):
        total = sum(cell.area for cell in fan.vertex_cells)
        assert abs(total - 4 * math.pi) < 1e-9


def test_cube_vertex_positions(cube_fan):
    pos = cube_fan.vertex_positions(np.ones(6))
    assert sorted(map(tuple, np.round(pos, 12).tolist())) == sorted(
        (x, y, z) for x in (-1.0, 1.0) for y in (-1.0, 1.0) for z in (-1.0, 1.0))


def test_unbounded_raises():
    # all normals in the upper halfspace: nothing caps the region below
    up = np.array([[1, 0, 1], [-1, 0, 1], [0, 1, 1], [0, -1, 1]], float)
    up /= np.linalg.norm(up, axis=1)[:, None]
    with pytest.raises(errors.UnboundedRegionError):
        polytope.build_fan(up, np.ones(4))


def test_redundant_halfspace_lists_faces():
    # a seventh plane far outside the unit cube touches nothing
    normals = np.vstack([CUBE, [[0, 0, 1]]])
    normals[6] = np.array([1.0, 1.0, 1.0]) / math.sqrt(3.0)
    h = np.append(np.ones(6), 10.0)
    with pytest.raises(errors.RedundancyError) as err:
        polytope.build_fan(normals, h)
    assert err.value.faces == [6]


def test_rejects_non_unit_normals():
    bad = CUBE.copy()
    bad[0] = [2.0, 0.0, 0.0]
    with pytest.raises(errors.InvalidInput):
        polytope.build_fan(bad, np.ones(6))


def test_rejects_duplicate_normals():
    bad = np.vstack([CUBE, [[1.0, 0.0, 0.0]]])
    with pytest.raises(errors.InvalidInput):
        polytope.build_fan(bad, np.ones(7))


def test_in_plane_support_numbers_match_geometry(cube_fan):
    # face +x of the unit cube: the in-plane polygon is the unit square,
    # all in-plane support numbers 1
    h = np.ones(6)
    for i in range(6):
        hi = polytope.face_support_numbers(cube_fan, h, i)
        assert np.allclose(hi, 1.0)


# =============================================================================
# VOLUME AND AREA -- oracles, then the convex-hull referee
# =============================================================================

def test_cube_volume_and_area(cube_fan):
    h = np.full(6, 0.5)
    assert abs(polytope.volume(cube_fan, h) - 1.0) < 1e-12
    assert abs(polytope.boundary_area_form(cube_fan).q(h) - 6.0) < 1e-12


def test_octahedron_volume_and_area(octa_fan):
    h = np.full(8, 1.0 / math.sqrt(3.0))
    # vertices at distance 1 on the axes: volume 4/3, area 4 sqrt 3
    assert abs(polytope.volume(octa_fan, h) - 4.0 / 3.0) < 1e-12
    assert abs(polytope.boundary_area_form(octa_fan).q(h) - 4.0 * math.sqrt(3.0)) < 1e-12


def test_octahedron_volume_tensor_refused(octa_fan):
    # around a non-simple vertex the volume is only piecewise cubic
    with pytest.raises(errors.DomainError):
        polytope.volume_form(octa_fan)


def test_volume_form_diagonal_matches_direct(cube_fan):
    rng = np.random.default_rng(5)
    T = polytope.volume_form(cube_fan)
    for _ in range(20):
        h = polytope.sample_interior(cube_fan, np.ones(6), rng)
        assert abs(T.diagonal(h) - polytope.volume(cube_fan, h)) < 1e-12 * max(
            1.0, abs(polytope.volume(cube_fan, h)))


def test_volume_against_qhull_referee():
    rng = np.random.default_rng(11)
    for m in (8, 10, 13):
        fan, h = geomfix.random_simple_polytope(m, rng)
        hull = ConvexHull(fan.vertex_positions(h))
        vol = polytope.volume(fan, h)
        area = polytope.boundary_area_form(fan).q(h)
        assert abs(vol - hull.volume) < 1e-9 * max(1.0, hull.volume)
        assert abs(area - hull.area) < 1e-9 * max(1.0, hull.area)


def test_translation_invariance(cube_fan):
    h = np.full(6, 0.5)
    shift = polytope.point_support_vector(cube_fan, np.array([0.2, -0.4, 0.1]))
    assert abs(polytope.volume(cube_fan, h + shift) - 1.0) < 1e-12
    area = polytope.boundary_area_form(cube_fan)
    assert abs(area.q(h + shift) - area.q(h)) < 1e-12


def test_area_form_signature_cube(cube_fan):
    assert polytope.boundary_area_form(cube_fan).signature().as_tuple == (1, 3, 2)


def test_area_form_kernel_is_translations(cube_fan):
    K = polytope.boundary_area_form(cube_fan).kernel()
    assert K.shape[1] == 3
    # every kernel vector is a point-support vector
    U = cube_fan.normals
    resid = K - U @ np.linalg.lstsq(U, K, rcond=None)[0]
    assert np.max(np.abs(resid)) < 1e-9


def test_random_simple_signatures():
    rng = np.random.default_rng(29)
    for m in (8, 11, 14):
        fan, _ = geomfix.random_simple_polytope(m, rng)
        sig = polytope.boundary_area_form(fan).signature()
        assert sig.as_tuple == (1, 3, m - 4)


def test_edge_lengths_cube(cube_fan):
    h = np.full(6, 0.5)
    for (i, j) in cube_fan.phi:
        assert abs(cube_fan.edge_length(i, j, h) - 1.0) < 1e-12


# =============================================================================
# CONE MEMBERSHIP
# =============================================================================

def test_membership_cube(cube_fan):
    assert polytope.cone_membership(cube_fan, np.ones(6)).status == "interior"
    # octahedron support numbers inside the cube fan: cube edges all shrink
    # to zero when the +z plane passes through the top edge ring
    h = np.array([1.0, 1.0, 1.0, 1.0, 1.0, -0.999])
    assert polytope.cone_membership(cube_fan, h).status == "interior"
    h[5] = -1.0
    assert polytope.cone_membership(cube_fan, h, tol=1e-9).status == "boundary"
    h[5] = -1.001
    assert polytope.cone_membership(cube_fan, h).status == "outside"


# =============================================================================
# ALEXANDROV-FENCHEL
# =============================================================================

def test_af_random_triples():
    rng = np.random.default_rng(37)
    fan, h0 = geomfix.random_simple_polytope(10, rng)
    for _ in range(50):
        h = polytope.sample_interior(fan, h0, rng)
        k = polytope.sample_interior(fan, h0, rng)
        p = polytope.sample_interior(fan, h0, rng)
        res = polytope.alexandrov_fenchel_check(fan, h, k, p)
        assert res.residual >= -1e-12 * res.scale


def test_af_equality_translate_homothety(cube_fan):
    rng = np.random.default_rng(41)
    k = polytope.sample_interior(cube_fan, np.ones(6), rng)
    p = polytope.sample_interior(cube_fan, np.ones(6), rng)
    x = np.array([0.3, -0.1, 0.25])
    lam = 2.2
    h = polytope.point_support_vector(cube_fan, x) + lam * k
    res = polytope.alexandrov_fenchel_check(cube_fan, h, k, p)
    assert res.equality
    assert np.linalg.norm(res.witness_x - x) < 1e-7
    assert abs(res.witness_lambda - lam) < 1e-7


def test_af_mixed_point_body_vanishes(cube_fan):
    # v(h^x, k, p) = 0: a point contributes nothing to the mixed volume
    T = polytope.volume_form(cube_fan)
    rng = np.random.default_rng(43)
    for _ in range(10):
        hx = polytope.point_support_vector(cube_fan, rng.standard_normal(3))
        k = polytope.sample_interior(cube_fan, np.ones(6), rng)
        p = polytope.sample_interior(cube_fan, np.ones(6), rng)
        assert abs(T.v(hx, k, p)) < 1e-12


def test_af_rejects_outside_reference(cube_fan):
    bad = np.array([1.0, 1.0, 1.0, 1.0, 1.0, -1.5])
    with pytest.raises(errors.DomainError):
        polytope.alexandrov_fenchel_check(cube_fan, np.ones(6), np.ones(6), bad)


def test_minkowski_sum_volume_polynomial(cube_fan):
    # V(h + t k) is cubic in t with coefficients given by mixed volumes
    rng = np.random.default_rng(47)
    h = polytope.sample_interior(cube_fan, np.ones(6), rng)
    k = polytope.sample_interior(cube_fan, np.ones(6), rng)
    T = polytope.volume_form(cube_fan)
    for t in (0.3, 1.0, 1.7):
        direct = polytope.volume(cube_fan, h + t * k)
        poly = (T.v(h, h, h) + 3 * t * T.v(h, h, k)
                + 3 * t * t * T.v(h, k, k) + t ** 3 * T.v(k, k, k))
        assert abs(direct - poly) < 1e-11 * max(1.0, abs(direct))


# =============================================================================
# FIRST AREA MEASURE
# =============================================================================

def test_first_area_measure_cube(cube_fan):
    measure = polytope.first_area_measure(cube_fan, np.full(6, 0.5))
    assert len(measure.arcs) == 12
    for arc in measure.arcs:
        assert abs(arc.arc_length - math.pi / 2.0) < 1e-12
        assert abs(arc.weight - 1.0) < 1e-12
    assert abs(measure.total_weighted_length - 12 * math.pi / 2.0) < 1e-10


def test_first_area_measure_scales_linearly(cube_fan):
    m1 = polytope.first_area_measure(cube_fan, np.ones(6))
    m2 = polytope.first_area_measure(cube_fan, 2.0 * np.ones(6))
    for a1, a2 in zip(m1.arcs, m2.arcs):
        assert a1.faces == a2.faces
        assert abs(a2.weight - 2.0 * a1.weight) < 1e-12
        assert abs(a2.arc_length - a1.arc_length) < 1e-15


# =============================================================================
# SPHERICAL QUADRATURE
# =============================================================================

def test_sphere_integral_cube_accuracy(cube_fan):
    h = np.full(6, 0.5)
    exact = 6.0
    assert abs(polytope.area_via_sphere_integral(cube_fan, h, depth=6) - exact) < 1e-5


def test_sphere_integral_convergence_order(cube_fan):
    h = np.ones(6)
    exact = polytope.boundary_area_form(cube_fan).q(h)
    errs = [abs(polytope.area_via_sphere_integral(cube_fan, h, depth=d) - exact)
            for d in (2, 4)]
    order = math.log2(errs[0] / errs[1]) / 2.0
    assert order >= 2.0


def test_sphere_integral_translation_invariance(cube_fan):
    h = np.full(6, 0.5)
    shift = polytope.point_support_vector(cube_fan, np.array([0.15, 0.1, -0.2]))
    a0 = polytope.area_via_sphere_integral(cube_fan, h, depth=5)
    a1 = polytope.area_via_sphere_integral(cube_fan, h + shift, depth=5)
    assert abs(a0 - a1) < 1e-9


def test_sphere_integral_depth_validation(cube_fan):
    with pytest.raises(errors.InvalidInput):
        polytope.area_via_sphere_integral(cube_fan, np.ones(6), depth=99)


# =============================================================================
# BOUNDARY METRIC
# =============================================================================

def test_boundary_metric_cube_curvatures(cube_fan):
    mesh = polytope.boundary_metric(cube_fan, np.full(6, 0.5))
    cone = surface.cone_data(mesh)
    assert cone.genus == 0
    assert len(cone.cone_angles) == 8
    assert np.max(np.abs(cone.curvatures - math.pi / 2.0)) < 1e-12
    assert abs(surface.total_area(mesh) - 6.0) < 1e-12


def test_boundary_curvature_equals_gauss_cell_area(octa_fan):
    h = np.full(8, 1.0 / math.sqrt(3.0))
    mesh = polytope.boundary_metric(octa_fan, h)
    cone = surface.cone_data(mesh)
    labels = mesh.orbit_labels()
    cell_area = {vid: cell.area for vid, cell in enumerate(octa_fan.vertex_cells)}
    for orbit_idx, label_set in enumerate(labels):
        assert len(label_set) == 1
        vid = next(iter(label_set))
        assert abs(cone.curvatures[orbit_idx] - cell_area[vid]) < 1e-9


def test_boundary_metric_random_polytope_genus0():
    rng = np.random.default_rng(53)
    fan, h = geomfix.random_simple_polytope(9, rng)
    mesh = polytope.boundary_metric(fan, h)
    cone = surface.cone_data(mesh)
    assert cone.genus == 0
    assert abs(cone.curvatures.sum() - 4 * math.pi) < 1e-9


# =============================================================================
# JSON
# =============================================================================

def test_fan_from_json_roundtrip():
    data = {"normals": CUBE.tolist(), "h": [0.5] * 6}
    fan, h = polytope.fan_from_json_dict(data)
    assert fan.m == 6
    assert abs(polytope.volume(fan, h) - 1.0) < 1e-12


def test_fan_json_missing_key():
    with pytest.raises(errors.InvalidInput):
        polytope.fan_from_json_dict({"normals": CUBE.tolist()})

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from covertherm.body_model import (
    GridSpec,
    JointRelation,
    Limb,
    body_heightfield,
    build_world,
    capsule_top,
    pose_joints_2d,
    world_from_dict,
    world_to_dict,
)
from covertherm.errors import (
    DanglingRelation,
    DisconnectedBody,
    DuplicateId,
    GridTooSmall,
    InvalidGeometry,
    MissingJoint,
    ValidationError,
)
from covertherm.scenario import builtin_document

from worlds import SKIN, cylinder, single_cylinder_world, skeleton_on_limb, small_grid


class TestBuildWorld:
    def test_single_limb(self):
        world = build_world([cylinder()])
        assert len(world.limbs) == 1

    def test_two_limb_chain(self):
        a = Limb(1, (0, 0, 0.025), (0.2, 0, 0.025), 0.025, SKIN)
        b = Limb(2, (0.2, 0, 0.025), (0.4, 0, 0.025), 0.025, SKIN)
        world = build_world([a, b], [JointRelation(1, 2, (0.2, 0, 0.025))])
        assert len(world.relations) == 1

    def test_disconnected(self):
        a = cylinder(1, y=-0.1)
        b = cylinder(2, y=0.1)
        with pytest.raises(DisconnectedBody):
            build_world([a, b], [])

    def test_duplicate_id(self):
        with pytest.raises(DuplicateId):
            build_world([cylinder(1), cylinder(1, y=0.01)])

    def test_dangling_relation(self):
        with pytest.raises(DanglingRelation):
            build_world([cylinder(1)], [JointRelation(1, 7, (0.2, 0, 0.025))])

    def test_relation_point_far_from_endpoints(self):
        a = Limb(1, (0, 0, 0.025), (0.2, 0, 0.025), 0.025, SKIN)
        b = Limb(2, (0.2, 0, 0.025), (0.4, 0, 0.025), 0.025, SKIN)
        with pytest.raises(InvalidGeometry):
            build_world([a, b], [JointRelation(1, 2, (0.1, 0, 0.025))])

    def test_empty(self):
        with pytest.raises(InvalidGeometry):
            build_world([])

    @pytest.mark.parametrize(
        "kwargs",
        [
            dict(radius=0.0),
            dict(radius=-0.01),
            dict(endpoint_b=(0.0, 0.0, 0.025)),
            dict(surface_temp=400.0),
            dict(surface_temp=100.0),
        ],
    )
    def test_invalid_limb(self, kwargs):
        base = dict(id=1, endpoint_a=(0.0, 0.0, 0.025), endpoint_b=(0.2, 0.0, 0.025), radius=0.025, surface_temp=SKIN)
        base.update(kwargs)
        with pytest.raises(InvalidGeometry):
            Limb(**base)

    def test_unknown_skeleton_joint(self):
        with pytest.raises(ValidationError):
            build_world([cylinder()], skeleton_map={"tail": {"limb": 1}})

    def test_skeleton_reference_to_missing_limb(self):
        with pytest.raises(DanglingRelation):
            build_world([cylinder()], skeleton_map={"neck": {"limb": 9}})


class TestGridSpec:
    def test_invariants(self):
        with pytest.raises(ValidationError):
            GridSpec((0, 0), 0.0, 4, 4)
        with pytest.raises(ValidationError):
            GridSpec((0, 0), 0.1, 1, 4)

    def test_shape_and_centres(self):
        g = GridSpec((1.0, 2.0), 0.5, 4, 3)
        assert g.shape == (3, 4)
        np.testing.assert_allclose(g.xs(), [1.0, 1.5, 2.0, 2.5])
        np.testing.assert_allclose(g.ys(), [2.0, 2.5, 3.0])


class TestHeightField:
    def test_crest_is_diameter(self):
        hf = body_heightfield(single_cylinder_world(), small_grid())
        # axis at y = 0 is row 60
        crest = hf.values[60, 60:100]
        np.testing.assert_allclose(crest, 0.050, rtol=0, atol=1e-15)
        assert hf.values.max() == pytest.approx(0.050, abs=1e-15)

    def test_empty_cells_at_bed(self):
        world = build_world([cylinder(z=0.525)], bed_height=0.5)
        hf = body_heightfield(world, small_grid())
        assert hf.values[0, 0] == 0.5
        assert hf.values[60, 80] == pytest.approx(0.55)

    def test_lateral_offset(self):
        hf = body_heightfield(single_cylinder_world(), small_grid())
        # row 63 sits 0.015 m from the axis
        expected = 0.025 + np.sqrt(0.025**2 - 0.015**2)
        assert expected == pytest.approx(0.045)
        np.testing.assert_allclose(hf.values[63, 60:100], expected, atol=1e-14)

    def test_end_caps_are_hemispherical(self):
        hf = body_heightfield(single_cylinder_world(), small_grid())
        # 0.01 m beyond the x = 0.2 end, on the axis: sphere of radius r about the endpoint
        j = int(round((0.21 + 0.4) / 0.005))
        assert hf.values[60, j] == pytest.approx(0.025 + np.sqrt(0.025**2 - 0.01**2), abs=1e-12)

    def test_grid_too_small(self):
        with pytest.raises(GridTooSmall):
            body_heightfield(single_cylinder_world(x1=0.5), small_grid())

    def test_vertical_limb(self):
        world = build_world([Limb(1, (0, 0, 0.03), (0, 0, 0.2), 0.03, SKIN)])
        hf = body_heightfield(world, small_grid())
        assert hf.values[60, 80] == pytest.approx(0.23)


def _capsule_top_bruteforce(limb, X, Y, n=20001):
    """Dense sampling of the axis: max_t z(t) + sqrt(r^2 - |xy(t) - P|^2)."""
    t = np.linspace(0, 1, n)
    a, b = np.array(limb.endpoint_a), np.array(limb.endpoint_b)
    pts = a[None, :] + t[:, None] * (b - a)[None, :]
    out = np.full(X.shape, -np.inf)
    for idx in np.ndindex(X.shape):
        d2 = (pts[:, 0] - X[idx]) ** 2 + (pts[:, 1] - Y[idx]) ** 2
        ok = d2 <= limb.radius**2
        if ok.any():
            out[idx] = np.max(pts[ok, 2] + np.sqrt(limb.radius**2 - d2[ok]))
    return out


@given(
    ax=st.floats(-0.1, 0.1),
    ay=st.floats(-0.1, 0.1),
    az=st.floats(0.02, 0.2),
    dx=st.floats(-0.2, 0.2),
    dy=st.floats(-0.2, 0.2),
    dz=st.floats(-0.15, 0.15),
    r=st.floats(0.01, 0.06),
)
def test_capsule_top_matches_sampled_oracle(ax, ay, az, dx, dy, dz, r):
    if dx * dx + dy * dy + dz * dz < 1e-4:
        return
    limb = Limb(1, (ax, ay, az), (ax + dx, ay + dy, az + dz), r, SKIN)
    X, Y = np.meshgrid(np.linspace(-0.35, 0.35, 15), np.linspace(-0.35, 0.35, 15))
    fast = capsule_top(limb, X, Y)
    slow = _capsule_top_bruteforce(limb, X, Y)
    both = np.isfinite(slow)
    # sampling the axis can miss the thin sliver near the silhouette edge only
    assert np.all(np.isfinite(fast)[both])
    assert np.all(fast[both] >= slow[both] - 1e-12)
    assert np.all(fast[both] - slow[both] <= 2e-3 * r + 1e-9)


class TestPoseJoints:
    def test_origin_maps_to_pixel_zero(self):
        limb = Limb(1, (0.0, 0.0, 0.025), (0.2, 0.0, 0.025), 0.025, SKIN)
        world = build_world([limb], skeleton_map=skeleton_on_limb())
        js = pose_joints_2d(world, GridSpec((0.0, 0.0), 0.01, 40, 40))
        np.testing.assert_allclose(js["neck"], [0.0, 0.0], atol=1e-12)
        assert js.visible.all()

    def test_affine_map(self):
        limb = Limb(1, (0.10, 0.20, 0.025), (0.2, 0.2, 0.025), 0.025, SKIN)
        world = build_world([limb], skeleton_map=skeleton_on_limb())
        js = pose_joints_2d(world, GridSpec((0.0, 0.0), 0.01, 40, 40))
        np.testing.assert_allclose(js["right_ankle"], [10.0, 20.0], atol=1e-9)

    def test_missing_neck(self):
        skel = skeleton_on_limb()
        del skel["neck"]
        world = build_world([cylinder()], skeleton_map=skel)
        with pytest.raises(MissingJoint):
            pose_joints_2d(world, small_grid())

    def test_supine_template_joints_are_plausible(self):
        doc = builtin_document("supine_template")
        world = world_from_dict(doc["world"])
        grid = GridSpec.from_dict(doc["grid"])
        js = pose_joints_2d(world, grid)
        # head above neck above hips along +x, right side at negative y
        assert js["head_top"][0] > js["neck"][0] > js["right_hip"][0] > js["right_knee"][0]
        assert js["right_wrist"][1] < js["neck"][1] < js["left_wrist"][1]


def test_world_json_round_trip():
    doc = builtin_document("supine_template")["world"]
    world = world_from_dict(doc)
    again = world_from_dict(world_to_dict(world))
    assert again == world


# properties

_offsets = st.floats(-0.05, 0.05)


@given(r=st.floats(0.01, 0.04), grow=st.floats(0.0, 0.02), tilt=st.floats(0.0, 0.05))
def test_heightfield_monotone_in_radius(r, grow, tilt):
    grid = small_grid(h=0.01, width=60, height=50)
    small = build_world([Limb(1, (-0.1, -0.02, 0.05), (0.1, 0.03, 0.05 + tilt), r, SKIN)])
    big = build_world([Limb(1, (-0.1, -0.02, 0.05), (0.1, 0.03, 0.05 + tilt), r + grow, SKIN)])
    assert np.all(body_heightfield(big, grid).values >= body_heightfield(small, grid).values)


@given(dx=_offsets, dy=_offsets)
def test_heightfield_translation_equivariance(dx, dy):
    grid = small_grid(h=0.01, width=60, height=50)
    world = build_world(
        # radii chosen so no silhouette edge (a vertical wall) passes through a cell centre
        [
            Limb(1, (-0.1013, -0.0207, 0.0317), (0.0511, 0.0403, 0.0437), 0.0317, SKIN),
            Limb(2, (0.0511, 0.0403, 0.0437), (0.1029, -0.0493, 0.0283), 0.0283, SKIN),
        ],
        [JointRelation(1, 2, (0.0511, 0.0403, 0.0437))],
    )
    moved = world.translated(dx, dy)
    moved_grid = GridSpec((grid.origin[0] + dx, grid.origin[1] + dy), grid.spacing, grid.width, grid.height)
    np.testing.assert_allclose(
        body_heightfield(moved, moved_grid).values, body_heightfield(world, grid).values, rtol=0, atol=1e-12
    )


@given(x=st.floats(-0.3, 0.3), y=st.floats(-0.2, 0.2))
def test_pixel_world_round_trip(x, y):
    grid = small_grid()
    limb = Limb(1, (x, y, 0.025), (x + 0.05, y, 0.025), 0.025, SKIN)
    world = build_world([limb], skeleton_map=skeleton_on_limb())
    js = pose_joints_2d(world, grid)
    back = grid.pixel_to_world(js["neck"])
    assert np.all(np.abs(back - [x, y]) <= grid.spacing)
    np.testing.assert_allclose(back, [x, y], atol=1e-12)

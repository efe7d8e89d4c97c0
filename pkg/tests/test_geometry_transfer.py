import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from covertherm.errors import (
    DegenerateConfiguration,
    ParseError,
    PointAtInfinity,
    TooFewCorrespondences,
    ValidationError,
)
from covertherm.geometry_transfer import (
    Correspondence,
    Homography,
    correspondences_from_dict,
    correspondences_to_dict,
    estimate_homography,
    map_points,
    transfer_labels,
)
from covertherm.joints import N_JOINTS, JointSet

from oracles import apply_h, canonical, correspondences, random_homography, random_quad

SQUARE = np.array([[0.0, 0.0], [1.0, 0.0], [1.0, 1.0], [0.0, 1.0]])


def translation_h():
    return estimate_homography(correspondences(SQUARE, SQUARE + [2.0, 3.0]))


class TestEstimate:
    def test_identity(self):
        H = estimate_homography(correspondences(SQUARE, SQUARE))
        np.testing.assert_allclose(H.matrix, np.eye(3) / np.sqrt(3), atol=1e-12)

    def test_translation(self):
        H = translation_h()
        np.testing.assert_allclose(H.matrix, canonical([[1, 0, 2], [0, 1, 3], [0, 0, 1]]), atol=1e-12)
        np.testing.assert_allclose(map_points(H, (0.0, 0.0)), [2.0, 3.0], atol=1e-12)

    def test_collinear_triple(self):
        src = np.array([[0.0, 0.0], [1.0, 0.0], [2.0, 0.0], [0.0, 1.0]])
        with pytest.raises(DegenerateConfiguration):
            estimate_homography(correspondences(src, src))

    def test_collinear_triple_in_destination(self):
        dst = np.array([[0.0, 0.0], [1.0, 1.0], [2.0, 2.0], [0.0, 1.0]])
        with pytest.raises(DegenerateConfiguration):
            estimate_homography(correspondences(SQUARE, dst))

    def test_too_few(self):
        with pytest.raises(TooFewCorrespondences):
            estimate_homography(correspondences(SQUARE[:3], SQUARE[:3]))

    def test_all_on_a_line(self):
        src = np.column_stack([np.arange(6.0), 2 * np.arange(6.0)])
        with pytest.raises(DegenerateConfiguration):
            estimate_homography(correspondences(src, src))

    def test_overdetermined_exact_data(self):
        rng = np.random.default_rng(3)
        m = random_homography(rng)
        src = rng.uniform([0, 0], [160, 120], (12, 2))
        H = estimate_homography(correspondences(src, apply_h(m, src)))
        np.testing.assert_allclose(H.matrix, canonical(m), atol=1e-9)


class TestHomography:
    def test_canonical_form(self):
        H = Homography(-5.0 * np.diag([1.0, 2.0, 3.0]))
        assert np.linalg.norm(H.matrix) == pytest.approx(1.0)
        assert H.matrix[2, 2] > 0

    def test_singular(self):
        with pytest.raises(DegenerateConfiguration):
            Homography(np.diag([1.0, 1.0, 0.0]))

    def test_inverse_and_compose(self):
        H = Homography(random_homography(np.random.default_rng(0)))
        np.testing.assert_allclose((H @ H.inverse()).matrix, Homography.identity().matrix, atol=1e-12)

    def test_json(self):
        H = translation_h()
        again = Homography.from_dict(H.to_dict())
        np.testing.assert_array_equal(again.matrix, H.matrix)
        with pytest.raises(ParseError):
            Homography.from_dict({"matrix": [1, 2, 3]})
        with pytest.raises(ParseError):
            Homography.from_dict({})


class TestMapPoints:
    def test_identity(self):
        pts = np.array([[1.5, -2.0], [100.0, 7.0]])
        # stored as I / sqrt(3), so equal up to rounding
        np.testing.assert_allclose(map_points(Homography.identity(), pts), pts, rtol=1e-15, atol=0)

    def test_scale_by_two(self):
        H = Homography(np.diag([2.0, 2.0, 1.0]))
        np.testing.assert_allclose(map_points(H, (1.0, 1.0)), [2.0, 2.0], atol=1e-14)

    def test_translation_example(self):
        np.testing.assert_allclose(map_points(translation_h(), (5.0, 5.0)), [7.0, 8.0], atol=1e-12)

    def test_point_at_infinity(self):
        H = Homography(np.array([[1.0, 0, 0], [0, 1.0, 0], [1.0, 0, -1.0]]))
        with pytest.raises(PointAtInfinity):
            map_points(H, (1.0, 3.0))

    def test_non_finite(self):
        with pytest.raises(ValidationError):
            map_points(Homography.identity(), (np.nan, 0.0))


class TestTransfer:
    def _joints(self, vis=None):
        rng = np.random.default_rng(1)
        vis = np.ones(N_JOINTS, bool) if vis is None else vis
        return JointSet(rng.uniform(0, 100, (N_JOINTS, 2)), vis)

    def test_identity(self):
        js = self._joints()
        out = transfer_labels(Homography.identity(), js)
        np.testing.assert_allclose(out.points, js.points, rtol=1e-15, atol=0)
        np.testing.assert_array_equal(out.visible, js.visible)

    def test_translation(self):
        js = self._joints()
        out = transfer_labels(translation_h(), js)
        np.testing.assert_allclose(out.points - js.points, np.tile([2.0, 3.0], (N_JOINTS, 1)), atol=1e-12)

    def test_invisible_copied(self):
        vis = np.ones(N_JOINTS, bool)
        vis[[0, 5]] = False
        js = self._joints(vis)
        out = transfer_labels(translation_h(), js)
        np.testing.assert_array_equal(out.points[~vis], js.points[~vis])
        np.testing.assert_array_equal(out.visible, vis)


def test_correspondence_json_round_trip():
    corr = correspondences(SQUARE, SQUARE + 1)
    assert correspondences_from_dict(correspondences_to_dict(corr)) == corr
    with pytest.raises(ParseError):
        correspondences_from_dict({"correspondences": [{"src": [0, 0]}]})
    with pytest.raises(ValidationError):
        Correspondence((0.0, np.inf), (0.0, 0.0))


# properties

_seeds = st.integers(0, 2**32 - 1)


@given(seed=_seeds)
def test_four_point_exact_and_recovers(seed):
    rng = np.random.default_rng(seed)
    m = random_homography(rng)
    src = random_quad(rng)
    dst = apply_h(m, src)
    H = estimate_homography(correspondences(src, dst))
    assert np.max(np.abs(map_points(H, src) - dst)) <= 1e-9
    assert np.linalg.norm(H.matrix - canonical(m)) <= 1e-6


@given(seed=_seeds)
def test_round_trip(seed):
    rng = np.random.default_rng(seed)
    H = Homography(random_homography(rng))
    p = rng.uniform([0, 0], [160, 120], (20, 2))
    assert np.max(np.abs(map_points(H.inverse(), map_points(H, p)) - p)) <= 1e-6


def test_noise_bound_fixture():
    """Held-out transfer error grows at most linearly in the correspondence noise."""
    rng = np.random.default_rng(2024)
    m = random_homography(rng)
    gx, gy = np.meshgrid([10.0, 80.0, 150.0], [10.0, 60.0, 110.0])
    src = np.column_stack([gx.ravel(), gy.ravel()])
    held = np.array([[45.0, 35.0], [120.0, 90.0]])
    worst = 0.0
    for sigma in (0.1, 0.5, 1.0):
        for _ in range(50):
            r = sigma * np.sqrt(rng.random(len(src)))
            th = rng.uniform(0, 2 * np.pi, len(src))
            noisy = apply_h(m, src) + np.column_stack([r * np.cos(th), r * np.sin(th)])
            H = estimate_homography(correspondences(src, noisy))
            err = np.max(np.linalg.norm(map_points(H, held) - apply_h(m, held), axis=1))
            worst = max(worst, err / sigma)
    assert worst < 10.0

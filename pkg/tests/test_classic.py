import numpy as np
import pytest
from conftest import brute_dilate, brute_erode

from amoeba_edge.classic import (
    closing,
    detect_atm,
    detect_bm,
    detect_mg,
    detect_rnm,
    dilate,
    erode,
    opening,
)
from amoeba_edge.filters import alpha_trimmed_mean_filter, mean_filter
from amoeba_edge.image import make_diamond_se, make_square_se

SE3 = make_square_se(1)


def random_images(count, shape, seed, lo=0.0, hi=255.0):
    rng = np.random.default_rng(seed)
    return [rng.uniform(lo, hi, shape) for _ in range(count)]


@pytest.mark.parametrize("se", [make_square_se(1), make_diamond_se(2), make_square_se(2)])
def test_dilate_erode_match_brute_force(se):
    for img in random_images(40, (8, 8), seed=10):
        np.testing.assert_array_equal(dilate(img, se), brute_dilate(img, se))
        np.testing.assert_array_equal(erode(img, se), brute_erode(img, se))


def test_dilate_erode_many_random_images_against_oracle():
    se = make_square_se(1)
    for img in random_images(60, (6, 7), seed=11):
        np.testing.assert_array_equal(dilate(img, se), brute_dilate(img, se))
        np.testing.assert_array_equal(erode(img, se), brute_erode(img, se))


def test_constant_image_fixed_points():
    img = np.full((9, 9), 77.0)
    np.testing.assert_array_equal(dilate(img, SE3), img)
    np.testing.assert_array_equal(erode(img, SE3), img)


def test_impulse_dilation_block():
    img = np.zeros((7, 7))
    img[3, 3] = 255.0
    out = dilate(img, SE3)
    expected = np.zeros_like(img)
    expected[2:5, 2:5] = 255.0
    np.testing.assert_array_equal(out, expected)


def test_min_max_duality():
    for img in random_images(10, (8, 8), seed=12):
        np.testing.assert_array_equal(erode(-img, SE3), -dilate(img, SE3))


def test_empty_se_rejected():
    with pytest.raises(ValueError):
        dilate(np.zeros((4, 4)), frozenset())
    with pytest.raises(ValueError):
        erode(np.zeros((4, 4)), frozenset())


def test_order_invariants():
    for img in random_images(20, (16, 16), seed=13):
        ero, dil = erode(img, SE3), dilate(img, SE3)
        assert (ero <= img).all() and (img <= dil).all()
        assert (opening(img, SE3) <= img).all()
        assert (img <= closing(img, SE3)).all()


def test_open_close_idempotent():
    for img in random_images(10, (16, 16), seed=14):
        opened = opening(img, SE3)
        np.testing.assert_array_equal(opening(opened, SE3), opened)
        closed = closing(img, SE3)
        np.testing.assert_array_equal(closing(closed, SE3), closed)


def test_opening_removes_impulse():
    img = np.zeros((7, 7))
    img[3, 3] = 255.0
    np.testing.assert_array_equal(opening(img, SE3), np.zeros_like(img))


def test_mg_vertical_step():
    img = np.full((8, 8), 100.0)
    img[:, 4:] = 150.0
    out = detect_mg(img, SE3)
    expected = np.zeros_like(img)
    expected[:, 3:5] = 50.0
    np.testing.assert_array_equal(out, expected)


def test_mg_nonzero_only_near_circle_ring():
    from scipy.ndimage import distance_transform_edt

    from amoeba_edge.noise import make_circle_image

    img, truth = make_circle_image(64, radius=16.0)
    out = detect_mg(img, SE3)
    dist = distance_transform_edt(~truth)
    hit = out > 0
    assert hit.any()
    assert dist[hit].max() <= np.sqrt(2.0) + 1e-9  # one 8-neighborhood step
    # every ring pixel responds
    assert (out[truth] > 0).all()


def test_bm_suppresses_isolated_impulse():
    img = np.zeros((9, 9))
    img[4, 4] = 255.0
    mg = detect_mg(img, SE3)
    bm = detect_bm(img, SE3, 1)
    assert bm[4, 4] < mg[4, 4] / 4.0


def test_bm_matches_composition():
    for img in random_images(20, (8, 8), seed=15):
        f_av = mean_filter(img, 1)
        expected = np.minimum(f_av - erode(f_av, SE3), dilate(f_av, SE3) - f_av)
        np.testing.assert_array_equal(detect_bm(img, SE3, 1), expected)


def test_atm_matches_composition():
    for img in random_images(20, (8, 8), seed=16):
        f_a = alpha_trimmed_mean_filter(img, 1, 0.25)
        expected = np.minimum(
            opening(f_a, SE3) - erode(f_a, SE3), dilate(f_a, SE3) - closing(f_a, SE3)
        )
        np.testing.assert_array_equal(detect_atm(img, SE3, 1, 0.25), expected)


def test_rnm_matches_composition():
    for img in random_images(20, (8, 8), seed=17):
        m = opening(closing(img, SE3), SE3)
        mc = closing(m, SE3)
        expected = dilate(mc, SE3) - mc
        np.testing.assert_array_equal(detect_rnm(img, SE3), expected)


def test_rnm_quieter_than_mg_under_impulse_noise():
    from amoeba_edge.noise import add_impulse_noise

    img = np.full((64, 64), 128.0)
    noisy = add_impulse_noise(img, 0.2, seed=21)
    assert detect_rnm(noisy, SE3).sum() < detect_mg(noisy, SE3).sum() / 4.0


def test_detectors_nonnegative_and_zero_on_constant():
    constant = np.full((16, 16), 50.0)
    for detect in (detect_mg, detect_bm, detect_atm, detect_rnm):
        np.testing.assert_array_equal(detect(constant), np.zeros_like(constant))
    for img in random_images(25, (16, 16), seed=18):
        for detect in (detect_mg, detect_bm, detect_atm, detect_rnm):
            assert (detect(img) >= 0).all()

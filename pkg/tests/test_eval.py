import numpy as np
import pytest
from conftest import brute_nearest_distance

from amoeba_edge.evaluate import (
    best_fom,
    evaluate_edge_map,
    pratt_fom,
    roc_curve,
    threshold,
    write_roc_csv,
)
from amoeba_edge.noise import make_circle_image


def test_threshold_rule():
    strengths = np.array([[0.0, 1.0], [2.0, 3.0]])
    np.testing.assert_array_equal(threshold(strengths, 0.0), np.ones((2, 2), bool))
    np.testing.assert_array_equal(threshold(strengths, 4.0), np.zeros((2, 2), bool))
    np.testing.assert_array_equal(
        threshold(strengths, 2.0), np.array([[False, False], [True, True]])
    )
    with pytest.raises(ValueError):
        threshold(strengths, np.inf)


def test_threshold_median_count():
    rng = np.random.default_rng(80)
    strengths = rng.uniform(0.01, 1.0, (16, 16))
    t = float(np.median(strengths))
    assert threshold(strengths, t).sum() == (strengths >= t).sum()


def test_fom_perfect_match():
    _, truth = make_circle_image(64, radius=16.0)
    assert pratt_fom(truth, truth) == 1.0


def test_fom_single_pixel_distance_one():
    ideal = np.zeros((9, 9), bool)
    ideal[4, 4] = True
    detected = np.zeros((9, 9), bool)
    detected[4, 5] = True
    assert pratt_fom(detected, ideal) == pytest.approx(0.9, abs=1e-12)  # 1/(1+1/9)


def test_fom_three_pixel_hand_case():
    # 3 ideal pixels; 2 detected at distances 0 and 2:
    # FOM = (1/3) * (1 + 1/(1 + (1/9)*4)) = (1/3) * (1 + 9/13)
    ideal = np.zeros((9, 9), bool)
    ideal[4, 3] = ideal[4, 4] = ideal[4, 5] = True
    detected = np.zeros((9, 9), bool)
    detected[4, 4] = True  # d = 0
    detected[6, 4] = True  # d = 2, straight below (4,4)
    expected = (1.0 / 3.0) * (1.0 + 9.0 / 13.0)
    assert pratt_fom(detected, ideal) == pytest.approx(expected, abs=1e-12)


def test_fom_empty_detection_and_errors():
    ideal = np.zeros((5, 5), bool)
    ideal[2, 2] = True
    assert pratt_fom(np.zeros((5, 5), bool), ideal) == 0.0
    with pytest.raises(ValueError):
        pratt_fom(ideal, np.zeros((5, 5), bool))  # empty ideal
    with pytest.raises(ValueError):
        pratt_fom(np.zeros((4, 5), bool), ideal)  # shape mismatch


def test_fom_bounded_by_one():
    rng = np.random.default_rng(81)
    for _ in range(20):
        ideal = rng.random((12, 12)) < 0.2
        detected = rng.random((12, 12)) < 0.3
        if not ideal.any():
            continue
        fom = pratt_fom(detected, ideal)
        assert 0.0 <= fom <= 1.0
        if detected.any():
            assert fom > 0.0


def test_distance_transform_matches_brute_force():
    from scipy.ndimage import distance_transform_edt

    rng = np.random.default_rng(82)
    for _ in range(10):
        mask = rng.random((16, 16)) < 0.15
        if not mask.any():
            continue
        np.testing.assert_allclose(
            distance_transform_edt(~mask), brute_nearest_distance(mask), atol=1e-9
        )


def test_best_fom_cases():
    _, truth = make_circle_image(64, radius=16.0)
    scaled = np.where(truth, 7.0, 0.0)
    fom, t = best_fom(scaled, truth)
    assert fom == 1.0
    assert t == 7.0
    fom, t = best_fom(np.zeros_like(scaled), truth)
    assert fom == 0.0


def test_best_fom_prefers_lower_threshold_on_tie():
    # two detections both at distance 1 from the single ideal pixel:
    # t=1 detects both -> (0.9+0.9)/2 = 0.9; t=2 detects one -> 0.9/1 = 0.9
    truth = np.zeros((8, 8), bool)
    truth[4, 4] = True
    strengths = np.zeros((8, 8))
    strengths[4, 5] = 1.0
    strengths[4, 3] = 2.0
    fom, t = best_fom(strengths, truth)
    assert fom == pytest.approx(0.9)
    assert t == 1.0  # exact tie broken toward the lower threshold


def test_best_fom_scale_invariance():
    rng = np.random.default_rng(83)
    strengths = rng.uniform(0, 1, (32, 32)) ** 3
    truth = rng.random((32, 32)) < 0.1
    f1, _ = best_fom(strengths, truth)
    f2, _ = best_fom(strengths * 137.5, truth)
    assert f1 == pytest.approx(f2, abs=1e-12)


def test_best_fom_mg_on_clean_circle():
    from amoeba_edge.classic import detect_mg

    img, truth = make_circle_image(256, radius=64.0)
    fom, _ = best_fom(detect_mg(img), truth)
    # both one-pixel bands flanking the step respond equally, so the best
    # threshold keeps ~2x the ideal count at distance <= sqrt(2)
    assert fom > 0.9


def test_roc_perfect_detector():
    _, truth = make_circle_image(64, radius=16.0)
    strengths = np.where(truth, 1.0, 0.0)
    roc = roc_curve(strengths, truth)
    assert roc.auc == pytest.approx(1.0)
    assert any(f == 0.0 and d == 1.0 for f, d in zip(roc.false_rates, roc.hit_rates))


def test_roc_random_detector_near_half():
    rng = np.random.default_rng(84)
    _, truth = make_circle_image(256, radius=64.0)
    strengths = rng.uniform(0, 1, truth.shape)
    roc = roc_curve(strengths, truth)
    assert abs(roc.auc - 0.5) < 0.05


def test_roc_endpoints_and_monotonicity():
    rng = np.random.default_rng(85)
    _, truth = make_circle_image(64, radius=16.0)
    strengths = rng.uniform(0, 5, truth.shape)
    roc = roc_curve(strengths, truth)
    assert (roc.false_rates[0], roc.hit_rates[0]) == (0.0, 0.0)
    assert (roc.false_rates[-1], roc.hit_rates[-1]) == (1.0, 1.0)
    assert (np.diff(roc.false_rates) >= 0).all()
    assert (np.diff(roc.hit_rates) >= 0).all()
    assert (np.diff(roc.thresholds) <= 0).all()  # rates fall as threshold rises
    assert 0.0 <= roc.auc <= 1.0


def test_roc_rejects_degenerate_truth():
    strengths = np.ones((4, 4))
    with pytest.raises(ValueError):
        roc_curve(strengths, np.zeros((4, 4), bool))
    with pytest.raises(ValueError):
        roc_curve(strengths, np.ones((4, 4), bool))


def test_edge_map_validation():
    truth = np.zeros((4, 4), bool)
    truth[1, 1] = True
    with pytest.raises(ValueError):
        best_fom(np.full((4, 4), -1.0), truth)
    with pytest.raises(ValueError):
        best_fom(np.full((4, 4), np.nan), truth)


def test_evaluate_edge_map_report():
    img, truth = make_circle_image(64, radius=16.0)
    from amoeba_edge.classic import detect_mg

    report = evaluate_edge_map(
        detect_mg(img), truth, detector="mg", noise_kind="none", noise_level=0.0, seed=3
    )
    assert report.detector == "mg"
    assert 0.0 < report.fom <= 1.0
    assert report.auc == report.roc.auc
    assert report.seed == 3


def test_write_roc_csv(tmp_path):
    _, truth = make_circle_image(32, radius=8.0)
    strengths = np.where(truth, 2.0, 1.0)
    roc = roc_curve(strengths, truth)
    path = tmp_path / "roc.csv"
    write_roc_csv(path, roc)
    lines = path.read_text().splitlines()
    assert lines[0] == "threshold,p_f,p_d"
    assert len(lines) == roc.thresholds.size + 1

import numpy as np
import pytest

from actrec.matching import FeatureSequence, classify_1nn, dtw_distance, euclidean_distance


def brute_force_dtw(a, b):
    """Minimum over every monotone warping path, enumerated recursively."""
    a = np.atleast_2d(a)
    b = np.atleast_2d(b)
    ta, tb = len(a), len(b)
    best = [np.inf]

    def walk(i, j, acc):
        acc += np.linalg.norm(a[i] - b[j])
        if acc >= best[0]:
            return
        if i == ta - 1 and j == tb - 1:
            best[0] = acc
            return
        if i + 1 < ta and j + 1 < tb:
            walk(i + 1, j + 1, acc)
        if i + 1 < ta:
            walk(i + 1, j, acc)
        if j + 1 < tb:
            walk(i, j + 1, acc)

    walk(0, 0, 0.0)
    return best[0] / (ta + tb)


def seq(values, label=None, source_id=""):
    return FeatureSequence(frames=np.asarray(values, dtype=np.float64),
                           label=label, source_id=source_id)


class TestEuclidean:
    def test_identity(self):
        assert euclidean_distance(np.array([1.0, 2.0]), np.array([1.0, 2.0])) == 0

    def test_3_4_5(self):
        assert euclidean_distance(np.array([0.0, 0.0]), np.array([3.0, 4.0])) == 5

    def test_matches_sum_oracle(self, rng):
        y1, y2 = rng.normal(size=(2, 150))
        expected = sum((u - v) ** 2 for u, v in zip(y1, y2)) ** 0.5
        assert abs(euclidean_distance(y1, y2) - expected) <= 1e-12

    def test_dimension_mismatch(self):
        with pytest.raises(ValueError):
            euclidean_distance(np.zeros(2), np.zeros(3))


class TestDTW:
    def test_self_distance_zero(self, rng):
        a = seq(rng.normal(size=(5, 3)))
        assert dtw_distance(a, a) == 0

    def test_duplicate_warp(self):
        a = seq([[1.0], [2.0], [3.0]])
        b = seq([[1.0], [2.0], [2.0], [3.0]])
        assert dtw_distance(a, b) == 0

    def test_matches_brute_force(self, rng):
        a = seq(rng.normal(size=(4, 2)))
        b = seq(rng.normal(size=(5, 2)))
        assert abs(dtw_distance(a, b) - brute_force_dtw(a.frames, b.frames)) <= 1e-12

    def test_brute_force_all_length_pairs(self, rng):
        for ta in range(1, 7):
            for tb in range(1, 7):
                a = seq(rng.normal(size=(ta, 3)))
                b = seq(rng.normal(size=(tb, 3)))
                assert abs(dtw_distance(a, b) - brute_force_dtw(a.frames, b.frames)) <= 1e-12

    def test_symmetry(self, rng):
        a = seq(rng.normal(size=(6, 4)))
        b = seq(rng.normal(size=(3, 4)))
        assert abs(dtw_distance(a, b) - dtw_distance(b, a)) <= 1e-12

    def test_nonnegative(self, rng):
        for _ in range(10):
            a = seq(rng.normal(size=(rng.integers(1, 6), 2)))
            b = seq(rng.normal(size=(rng.integers(1, 6), 2)))
            assert dtw_distance(a, b) >= 0

    def test_dimension_mismatch(self):
        with pytest.raises(ValueError):
            dtw_distance(seq(np.zeros((2, 2))), seq(np.zeros((2, 3))))

    def test_empty_sequence_rejected(self):
        with pytest.raises(ValueError):
            FeatureSequence(frames=np.zeros((0, 2)))


class TestClassify1NN:
    def test_exact_match(self, rng):
        gallery = [seq(rng.normal(size=(4, 2)), label="walk", source_id="g0"),
                   seq(rng.normal(size=(4, 2)), label="fall", source_id="g1")]
        result = classify_1nn(gallery[1], gallery)
        assert result.predicted == "fall"
        assert result.best_distance == 0

    def test_argmin(self):
        probe = seq([[0.0, 0.0]])
        gallery = [seq([[1.0, 0.0]], label="near", source_id="g0"),
                   seq([[2.0, 0.0]], label="far", source_id="g1")]
        result = classify_1nn(probe, gallery)
        assert result.predicted == "near"
        assert result.best_distance == min(d for _, _, d in result.per_template)

    def test_tie_breaks_first(self):
        probe = seq([[0.0]])
        gallery = [seq([[1.0]], label="first", source_id="g0"),
                   seq([[-1.0]], label="second", source_id="g1")]
        assert classify_1nn(probe, gallery).predicted == "first"

    def test_separable_trajectories(self, rng):
        centers = {"a": np.array([0.0, 0.0]), "b": np.array([10.0, 0.0]),
                   "c": np.array([0.0, 10.0])}
        gallery = [seq(centers[k] + rng.normal(scale=0.1, size=(8, 2)),
                       label=k, source_id=f"g_{k}") for k in centers]
        correct = 0
        for _ in range(30):
            k = list(centers)[rng.integers(0, 3)]
            probe = seq(centers[k] + rng.normal(scale=0.1, size=(5, 2)))
            correct += classify_1nn(probe, gallery).predicted == k
        assert correct == 30

    def test_scale_invariance(self, rng):
        gallery = [seq(rng.normal(size=(5, 3)), label=f"c{i}", source_id=f"g{i}")
                   for i in range(4)]
        probe = seq(rng.normal(size=(4, 3)))
        base = classify_1nn(probe, gallery).predicted
        scaled_gallery = [seq(g.frames * 7.5, label=g.label, source_id=g.source_id)
                          for g in gallery]
        scaled_probe = seq(probe.frames * 7.5)
        assert classify_1nn(scaled_probe, scaled_gallery).predicted == base

    def test_deterministic(self, rng):
        gallery = [seq(rng.normal(size=(5, 2)), label=f"c{i}", source_id=f"g{i}")
                   for i in range(3)]
        probe = seq(rng.normal(size=(4, 2)))
        r1 = classify_1nn(probe, gallery)
        r2 = classify_1nn(probe, gallery)
        assert r1 == r2

    def test_empty_gallery(self):
        with pytest.raises(ValueError):
            classify_1nn(seq([[0.0]]), [])

"""Shifted penalties, straight-through training, and binarization snapshots."""

import numpy as np
import pytest

from foothill import (
    PenaltyParams,
    QuantNet,
    ShiftedPenalty,
    TrainConfig,
    accuracy,
    binarize_snapshot,
    lambda_schedule,
    predict,
    shifted_eval,
    shifted_grad,
    train,
    two_gaussians,
)

TANH_1 = 0.7615941559557649
GRAD_1_1_AT_2 = 1.1815684975697910

FOOTHILL = ShiftedPenalty("foothill", PenaltyParams(16, 0.125))
MOD_L1 = ShiftedPenalty("mod_l1")
MOD_L2 = ShiftedPenalty("mod_l2")
ALL_KINDS = (FOOTHILL, MOD_L1, MOD_L2)


def small_config(**overrides):
    base = dict(epochs=10, batch_size=25, learning_rate=0.05, lambda_base=0.01,
                seed=3, penalty=ShiftedPenalty("foothill", PenaltyParams(0.5, 50)))
    base.update(overrides)
    return TrainConfig(**base)


class TestShiftedEval:
    def test_zero_at_plus_minus_mu_for_all_kinds(self):
        for pen in ALL_KINDS:
            for mu in (0.5, 1.5):
                assert shifted_eval(pen, mu, mu) == 0.0
                assert shifted_eval(pen, -mu, mu) == 0.0

    def test_foothill_at_origin_equals_unshifted_at_mu(self):
        pen = ShiftedPenalty("foothill", PenaltyParams(1, 2))
        assert shifted_eval(pen, 0.0, 1.0) == pytest.approx(TANH_1, abs=1e-12)

    def test_mod_l1_example(self):
        assert shifted_eval(MOD_L1, -0.5, 1.5) == 1.0

    def test_mod_l2_profile(self):
        x = np.linspace(-3, 3, 61)
        np.testing.assert_allclose(shifted_eval(MOD_L2, x, 1.0),
                                   (np.abs(x) - 1.0) ** 2)

    def test_symmetric(self):
        x = np.linspace(-3, 3, 301)
        for pen in ALL_KINDS:
            np.testing.assert_array_equal(shifted_eval(pen, x, 1.2),
                                          shifted_eval(pen, -x, 1.2))

    def test_rejects_nonpositive_mu(self):
        for pen in ALL_KINDS:
            with pytest.raises(ValueError):
                shifted_eval(pen, 1.0, 0.0)
            with pytest.raises(ValueError):
                shifted_grad(pen, 1.0, -1.0)

    def test_kind_validation(self):
        with pytest.raises(ValueError):
            ShiftedPenalty("l0")
        with pytest.raises(ValueError):
            ShiftedPenalty("foothill")


class TestShiftedGrad:
    def test_zero_at_minimum(self):
        pen = ShiftedPenalty("foothill", PenaltyParams(1, 1))
        assert shifted_grad(pen, 1.0, 1.0) == (0.0, 0.0)

    def test_foothill_chain_rule_example(self):
        pen = ShiftedPenalty("foothill", PenaltyParams(1, 1))
        d_dx, d_dmu = shifted_grad(pen, 3.0, 1.0)
        assert d_dx == pytest.approx(GRAD_1_1_AT_2, abs=1e-12)
        assert d_dmu == pytest.approx(-GRAD_1_1_AT_2, abs=1e-12)

    def test_mod_l2_example(self):
        assert shifted_grad(MOD_L2, 2.0, 1.0) == (2.0, -2.0)

    def test_matches_finite_differences_away_from_kinks(self):
        rng = np.random.default_rng(12)
        h = 1e-6
        for pen in ALL_KINDS:
            checked = 0
            while checked < 40:
                x = rng.uniform(-3, 3)
                mu = rng.uniform(0.3, 2.0)
                if min(abs(x), abs(abs(x) - mu)) < 1e-3:
                    continue
                d_dx, d_dmu = shifted_grad(pen, x, mu)
                fd_x = (shifted_eval(pen, x + h, mu) - shifted_eval(pen, x - h, mu)) / (2 * h)
                fd_mu = (shifted_eval(pen, x, mu + h) - shifted_eval(pen, x, mu - h)) / (2 * h)
                assert d_dx == pytest.approx(fd_x, abs=1e-6)
                assert d_dmu == pytest.approx(fd_mu, abs=1e-6)
                checked += 1

    def test_subgradient_zero_at_kinks(self):
        d_dx, d_dmu = shifted_grad(MOD_L1, 1.0, 1.0)
        assert d_dx == 0.0 and d_dmu == 0.0
        d_dx, _ = shifted_grad(MOD_L1, 0.0, 1.0)
        assert d_dx == 0.0


class TestLimits:
    def test_large_alpha_foothill_approaches_mod_l2(self):
        pen = ShiftedPenalty("foothill", PenaltyParams(1000, 0.002))
        x = np.linspace(-3, 3, 1201)
        x = x[np.abs(x) >= 0.01]
        gap = np.abs(shifted_eval(pen, x, 1.0) - shifted_eval(MOD_L2, x, 1.0))
        assert np.max(gap) < 1e-2

    def test_large_beta_foothill_approaches_mod_l1(self):
        pen = ShiftedPenalty("foothill", PenaltyParams(1, 1000))
        mu = 1.0
        x = np.linspace(-3, 3, 1201)
        keep = (np.abs(x) >= 0.01) & (np.abs(np.abs(x) - mu) >= 0.01)
        x = x[keep]
        gap = np.abs(shifted_eval(pen, x, mu) - shifted_eval(MOD_L1, x, mu))
        assert np.max(gap) < 1e-2


class TestLambdaSchedule:
    def test_starts_at_zero_and_increases(self):
        assert lambda_schedule(0.01, 0) == 0.0
        values = [lambda_schedule(0.01, t) for t in range(1, 100)]
        assert all(a < b for a, b in zip(values, values[1:]))


class TestConfig:
    def test_zero_lambda_base_allowed(self):
        small_config(lambda_base=0.0)

    @pytest.mark.parametrize("bad", [
        dict(epochs=0), dict(batch_size=0), dict(learning_rate=0.0),
        dict(lambda_base=-0.1), dict(seed=-1),
    ])
    def test_rejects_bad_fields(self, bad):
        with pytest.raises(ValueError):
            small_config(**bad)


class TestNet:
    def test_first_and_last_layers_full_precision(self):
        net = QuantNet.initialize([2, 16, 16, 2], np.random.default_rng(0))
        assert [layer.binary for layer in net.layers] == [False, True, False]
        net5 = QuantNet.initialize([4, 8, 8, 8, 3], np.random.default_rng(0))
        assert [layer.binary for layer in net5.layers] == [False, True, True, False]

    def test_mu_positive_at_init(self):
        net = QuantNet.initialize([2, 16, 16, 2], np.random.default_rng(0))
        for layer in net.layers:
            assert np.all(layer.mu > 0)


class TestBinarizeSnapshot:
    def test_fixed_point(self):
        net = QuantNet.initialize([2, 8, 8, 2], np.random.default_rng(1))
        layer = net.layers[1]
        layer.W = np.sign(layer.W + (layer.W == 0)) * layer.mu
        snap = binarize_snapshot(net)
        np.testing.assert_array_equal(snap.layers[1].W, net.layers[1].W)

    def test_row_example(self):
        net = QuantNet.initialize([2, 2, 2, 2], np.random.default_rng(1))
        net.layers[1].W = np.array([[0.9, -1.1], [0.3, -0.2]])
        net.layers[1].mu = np.array([1.0, 1.0])
        snap = binarize_snapshot(net)
        np.testing.assert_array_equal(snap.layers[1].W,
                                      [[1.0, -1.0], [1.0, -1.0]])

    def test_full_precision_layers_untouched(self):
        net = QuantNet.initialize([2, 8, 8, 2], np.random.default_rng(1))
        snap = binarize_snapshot(net)
        np.testing.assert_array_equal(snap.layers[0].W, net.layers[0].W)
        np.testing.assert_array_equal(snap.layers[-1].W, net.layers[-1].W)

    def test_snapshot_plain_eval_equals_quantized_forward(self):
        from foothill.quantizer import _forward_binary
        net = QuantNet.initialize([2, 8, 8, 2], np.random.default_rng(5))
        X = np.random.default_rng(6).standard_normal((40, 2))
        logits_binary, _ = _forward_binary(net, X)
        logits_snapshot = predict(binarize_snapshot(net), X)
        np.testing.assert_array_equal(logits_snapshot, logits_binary)


class TestTrain:
    def setup_method(self):
        self.X, self.y = two_gaussians(200, 4.0, seed=11)

    def test_report_shapes_and_ranges(self):
        cfg = small_config()
        net = QuantNet.initialize([2, 8, 8, 2], np.random.default_rng(cfg.seed))
        report = train(self.X, self.y, net, cfg)
        assert len(report.train_accuracy) == cfg.epochs
        assert len(report.concentration) == cfg.epochs
        assert len(report.lambdas) == cfg.epochs
        assert report.lambdas[0] == 0.0
        assert all(0 <= c <= 1 for c in report.concentration)
        assert all(0 <= a <= 1 for a in report.train_accuracy)
        assert all(np.all(mu > 0) for mu in report.final_mu)

    def test_deterministic_given_seed(self):
        cfg = small_config()
        reports = []
        for _ in range(2):
            net = QuantNet.initialize([2, 8, 8, 2], np.random.default_rng(cfg.seed))
            reports.append(train(self.X, self.y, net, cfg))
        a, b = reports
        assert a.train_accuracy == b.train_accuracy
        assert a.concentration == b.concentration
        assert a.lambdas == b.lambdas
        assert all((x == y).all() for x, y in zip(a.final_mu, b.final_mu))

    def test_zero_lambda_is_penalty_kind_invariant(self):
        reports = []
        for pen in ALL_KINDS:
            cfg = small_config(lambda_base=0.0, penalty=pen)
            net = QuantNet.initialize([2, 8, 8, 2], np.random.default_rng(cfg.seed))
            reports.append(train(self.X, self.y, net, cfg))
        for other in reports[1:]:
            assert reports[0].train_accuracy == other.train_accuracy
            assert reports[0].concentration == other.concentration

    def test_learns_the_separable_problem(self):
        cfg = small_config(epochs=30)
        net = QuantNet.initialize([2, 8, 8, 2], np.random.default_rng(cfg.seed))
        report = train(self.X, self.y, net, cfg)
        assert report.train_accuracy[-1] > 0.9

    def test_mu_stays_above_floor(self):
        cfg = small_config(epochs=20, lambda_base=0.5)
        net = QuantNet.initialize([2, 8, 8, 2], np.random.default_rng(cfg.seed))
        train(self.X, self.y, net, cfg)
        for layer in net.layers:
            assert np.all(layer.mu >= 1e-4)

    def test_rejects_bad_dataset(self):
        cfg = small_config()
        net = QuantNet.initialize([2, 8, 8, 2], np.random.default_rng(0))
        with pytest.raises(ValueError):
            train(np.empty((0, 2)), np.empty(0, dtype=int), net, cfg)
        with pytest.raises(ValueError):
            train(self.X, self.y[:-1], net, cfg)


class TestTwoGaussians:
    def test_shapes_and_balance(self):
        X, y = two_gaussians(501, 4.0, seed=0)
        assert X.shape == (501, 2)
        assert y.shape == (501,)
        assert set(np.unique(y)) == {0, 1}
        assert abs(int(np.sum(y == 0)) - 250) <= 1

    def test_deterministic(self):
        X1, y1 = two_gaussians(100, 4.0, seed=5)
        X2, y2 = two_gaussians(100, 4.0, seed=5)
        np.testing.assert_array_equal(X1, X2)
        np.testing.assert_array_equal(y1, y2)

    def test_separation_controls_the_means(self):
        X, y = two_gaussians(4000, 6.0, seed=2)
        gap = np.linalg.norm(X[y == 1].mean(axis=0) - X[y == 0].mean(axis=0))
        assert gap == pytest.approx(6.0, abs=0.3)

    def test_accuracy_helper_matches_predictions(self):
        X, y = two_gaussians(100, 4.0, seed=3)
        net = QuantNet.initialize([2, 8, 8, 2], np.random.default_rng(9))
        acc = accuracy(net, X, y)
        manual = np.mean(np.argmax(predict(net, X), axis=1) == y)
        assert acc == manual

import numpy as np
import pytest

from shopsim.agents.scorer import (LEAKY_SLOPE, CrossAttentionScorer,
                                   ScorerConfig, hash_tokens,
                                   policy_distribution, score_action)


def small_scorer(seed=0, dim=8, zero=False):
    return CrossAttentionScorer(ScorerConfig(dim=dim, vocab_size=64),
                                seed=seed, zero_init=zero)


class TestHashing:
    def test_stable_across_calls(self):
        a = hash_tokens(["red", "shoe", "66"], 4096)
        b = hash_tokens(["red", "shoe", "66"], 4096)
        assert np.array_equal(a, b)
        assert a.dtype == np.int64
        assert (0 <= a).all() and (a < 4096).all()


class TestScoreAction:
    def test_zero_parameters_score_zero(self):
        scorer = small_scorer(zero=True)
        assert score_action(scorer, ["red", "shoe"], ["buy"]) == 0.0
        assert score_action(scorer, ["a"], ["b", "c", "d"]) == 0.0

    def test_single_token_pair_matches_hand_computation(self):
        # with one observation and one action token both softmax weights are
        # 1, so the closed form is mechanical
        scorer = CrossAttentionScorer(ScorerConfig(dim=2, vocab_size=32),
                                      zero_init=True)
        o = np.array([0.3, -0.2])
        a = np.array([0.1, 0.4])
        w4 = np.arange(16, dtype=float).reshape(2, 8) / 10.0 - 0.6
        w5 = np.array([[0.5, -0.25], [0.75, 1.0]])
        w6 = np.array([1.5, -2.0])
        oid = int(hash_tokens(["obs"], 32)[0])
        aid = int(hash_tokens(["act"], 32)[0])
        assert oid != aid
        scorer.params["emb"][oid] = o
        scorer.params["emb"][aid] = a
        scorer.params["w4"], scorer.params["w5"], scorer.params["w6"] = w4, w5, w6

        g = np.concatenate([a, o, a * o, a * o])  # c = o and q = a here
        z = w4 @ g
        h = np.where(z > 0, z, LEAKY_SLOPE * z)
        expected = float(w6 @ (w5 @ h))
        assert scorer.score(["obs"], ["act"]) == pytest.approx(expected, rel=1e-12)

    def test_invariant_to_observation_token_order(self):
        scorer = small_scorer(seed=3)
        obs = ["red", "shoe", "size", "9", "list", "page"]
        act = ["red", "shoe"]
        base = scorer.score(obs, act)
        rng = np.random.default_rng(1)
        for _ in range(5):
            perm = list(rng.permutation(obs))
            assert scorer.score(perm, act) == pytest.approx(base, rel=1e-9)

    def test_action_token_order_matters_only_via_sets_too(self):
        # mean over ca_j is order-free as well; permuting action tokens
        # must not change the score either
        scorer = small_scorer(seed=4)
        obs = ["red", "shoe", "size"]
        base = scorer.score(obs, ["blue", "jacket", "rain"])
        assert scorer.score(obs, ["rain", "blue", "jacket"]) == pytest.approx(
            base, rel=1e-9)

    def test_empty_action_tokens_rejected(self):
        scorer = small_scorer()
        with pytest.raises(ValueError):
            scorer.score(["obs"], [])
        with pytest.raises(ValueError):
            scorer.score([], ["act"])


class TestPolicyDistribution:
    def test_single_action_is_certain(self):
        scorer = small_scorer(seed=5)
        pi = policy_distribution(scorer, ["red", "shoe"], [["buy"]])
        assert pi.tolist() == [1.0]

    def test_zero_parameters_give_uniform(self):
        scorer = small_scorer(zero=True)
        pi = policy_distribution(scorer, ["red"], [["a"], ["b"], ["c"], ["d"]])
        assert np.allclose(pi, 0.25)

    def test_shift_invariance_and_normalization(self):
        scorer = small_scorer(seed=6)
        actions = [["buy"], ["red"], ["back", "search"], ["next"]]
        scores = scorer.action_scores(["red", "shoe", "page"], actions)
        pi = scorer.policy(["red", "shoe", "page"], actions)

        def softmax(x):
            e = np.exp(x - x.max())
            return e / e.sum()

        assert np.allclose(pi, softmax(scores + 123.456))
        assert abs(pi.sum() - 1.0) < 1e-12

    def test_normalization_fuzz_over_random_parameters(self):
        rng = np.random.default_rng(7)
        actions = [["buy"], ["red", "shoe"], ["next", "page"]]
        for trial in range(1000):
            scorer = small_scorer(seed=trial, dim=4)
            pi = scorer.policy(["some", "obs", "text"], actions)
            assert abs(pi.sum() - 1.0) < 1e-12
            assert (pi >= 0).all()

    def test_no_actions_rejected(self):
        with pytest.raises(ValueError):
            small_scorer().policy(["obs"], [])


class TestCheckpoint:
    def test_round_trip_preserves_scores(self, tmp_path):
        scorer = small_scorer(seed=9)
        path = tmp_path / "scorer.npz"
        scorer.save(path)
        loaded = CrossAttentionScorer.load(path)
        assert loaded.config == scorer.config
        obs, act = ["red", "shoe", "size"], ["buy", "now"]
        assert loaded.score(obs, act) == scorer.score(obs, act)
        assert loaded.value(obs) == scorer.value(obs)

    def test_vector_round_trip(self):
        scorer = small_scorer(seed=10)
        vec = scorer.to_vector()
        before = scorer.score(["a", "b"], ["c"])
        scorer.from_vector(vec * 0.0)
        assert scorer.score(["a", "b"], ["c"]) == 0.0
        scorer.from_vector(vec)
        assert scorer.score(["a", "b"], ["c"]) == before

"""Agents: rule baseline, choice oracle, query rules, learned choice policy."""

from .base import PolicyStep, TrajStep, Trajectory, observation_digest
from .oracle import OracleChoice, choice_oracle, oracle_episode
from .query import query_generate
from .rule import rule_agent
from .scorer import (CrossAttentionScorer, ScorerConfig, policy_distribution,
                     score_action)
from .training import (BCResult, RLResult, behavior_clone_update,
                       collect_oracle_demos, demo_samples, mean_log_likelihood,
                       reinforce_update, returns_to_go, run_policy_episode,
                       train_bc, train_rl)

__all__ = [
    "PolicyStep", "TrajStep", "Trajectory", "observation_digest",
    "OracleChoice", "choice_oracle", "oracle_episode", "query_generate",
    "rule_agent", "CrossAttentionScorer", "ScorerConfig",
    "policy_distribution", "score_action", "BCResult", "RLResult",
    "behavior_clone_update", "collect_oracle_demos", "demo_samples",
    "mean_log_likelihood", "reinforce_update", "returns_to_go",
    "run_policy_episode", "train_bc", "train_rl",
]

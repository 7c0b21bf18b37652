"""Imitation and policy-gradient training for the cross-attention scorer.

Losses: behavior cloning minimizes the mean negative log-likelihood of
demonstrated clicks; the policy-gradient update minimizes

    L = L_pg + L_value + entropy_weight * L_entropy

where L_pg = mean[-(R_t - V(o_t)) log pi(a_t)] with the advantage held
constant under differentiation, L_value = mean[(R_t - V(o_t))^2], and
L_entropy = mean[sum_a pi log pi]. Minimizing sum_a pi log pi (negative
entropy) with a positive weight pushes the policy toward uniform, so the
default weight is positive; flip its sign to penalize entropy instead.
"""

from __future__ import annotations

import random
from dataclasses import dataclass

import numpy as np

from ..session import Action, Env, Page
from ..text import tokenize
from .base import (PolicyStep, TrajStep, Trajectory, observation_digest,
                   policy_observation_text, trajectory_stats)
from .oracle import oracle_episode
from .query import query_generate
from .scorer import CrossAttentionScorer


def _policy_forward(scorer, obs_ids, actions_tokens):
    scores, caches = [], []
    for tokens in actions_tokens:
        s, cache = scorer.score_ids(obs_ids, scorer.token_ids(tokens))
        scores.append(s)
        caches.append(cache)
    scores = np.array(scores)
    shifted = scores - scores.max()
    exps = np.exp(shifted)
    log_pi = shifted - np.log(exps.sum())
    return np.asarray(exps / exps.sum()), log_pi, caches


def bc_loss(scorer: CrossAttentionScorer, batch: list[PolicyStep]) -> float:
    total = 0.0
    for sample in batch:
        obs = scorer.obs_ids(sample.obs_tokens)
        _, log_pi, _ = _policy_forward(scorer, obs, sample.action_tokens)
        total -= log_pi[sample.chosen_index]
    return total / len(batch)


def bc_loss_and_grads(scorer: CrossAttentionScorer, batch: list[PolicyStep]):
    grads = scorer.zero_grads()
    total = 0.0
    scale = 1.0 / len(batch)
    for sample in batch:
        obs = scorer.obs_ids(sample.obs_tokens)
        pi, log_pi, caches = _policy_forward(scorer, obs, sample.action_tokens)
        total -= log_pi[sample.chosen_index]
        d_scores = pi.copy()
        d_scores[sample.chosen_index] -= 1.0
        for cache, d_s in zip(caches, d_scores):
            scorer.backward_score(cache, scale * d_s, grads)
    return total * scale, grads


def behavior_clone_update(scorer: CrossAttentionScorer, batch: list[PolicyStep],
                          learning_rate: float):
    """One gradient step on the clicked-button log-likelihood; returns
    (scorer, loss). The scorer is updated in place."""
    if not batch:
        raise ValueError("empty demonstration batch")
    for sample in batch:
        if not 0 <= sample.chosen_index < len(sample.action_tokens):
            raise ValueError("chosen action is not among the legal actions")
    loss, grads = bc_loss_and_grads(scorer, batch)
    scorer.apply_grads(grads, learning_rate)
    return scorer, loss


def returns_to_go(rewards: list[float], gamma: float) -> list[float]:
    out = [0.0] * len(rewards)
    acc = 0.0
    for t in range(len(rewards) - 1, -1, -1):
        acc = rewards[t] + gamma * acc
        out[t] = acc
    return out


def _choice_steps_with_returns(scorer, trajectories):
    gamma = scorer.config.gamma
    out = []
    for traj in trajectories:
        rewards = [step.reward for step in traj.training_steps]
        rtg = returns_to_go(rewards, gamma)
        out.extend((step, r) for step, r in zip(traj.training_steps, rtg)
                   if step.is_choice)
    return out


def pg_advantages(scorer, trajectories) -> list[float]:
    """Advantage R_t - V(o_t) per choice step, under the current values."""
    return [r_t - scorer.value_ids(scorer.obs_ids(step.obs_tokens))
            for step, r_t in _choice_steps_with_returns(scorer, trajectories)]


def _rl_pass(scorer, trajectories, entropy_weight, grads=None,
             frozen_advantages=None):
    """Losses (and optionally gradients) over all choice steps of a batch.

    The policy-gradient term multiplies log pi by the advantage as a
    constant; passing frozen_advantages evaluates that term against
    advantages captured at another parameter point, which is what a finite
    difference of the total loss has to use to probe this gradient.
    """
    choice_steps = _choice_steps_with_returns(scorer, trajectories)
    if not choice_steps:
        return 0.0, 0.0, 0.0
    scale = 1.0 / len(choice_steps)
    l_pg = l_value = l_entropy = 0.0
    for k, (step, r_t) in enumerate(choice_steps):
        obs = scorer.obs_ids(step.obs_tokens)
        pi, log_pi, caches = _policy_forward(scorer, obs, step.action_tokens)
        v = scorer.value_ids(obs)
        adv = r_t - v
        pg_adv = adv if frozen_advantages is None else frozen_advantages[k]
        neg_ent = float(pi @ log_pi)
        l_pg += -pg_adv * log_pi[step.chosen_index]
        l_value += adv * adv
        l_entropy += neg_ent
        if grads is not None:
            d_scores = pg_adv * pi
            d_scores[step.chosen_index] -= pg_adv
            d_scores += entropy_weight * pi * (log_pi - neg_ent)
            for cache, d_s in zip(caches, d_scores):
                scorer.backward_score(cache, scale * d_s, grads)
            scorer.backward_value(obs, scale * (-2.0 * adv), grads)
    return l_pg * scale, l_value * scale, l_entropy * scale


def rl_loss(scorer, trajectories, entropy_weight,
            frozen_advantages=None) -> float:
    l_pg, l_value, l_entropy = _rl_pass(
        scorer, trajectories, entropy_weight,
        frozen_advantages=frozen_advantages)
    return l_pg + l_value + entropy_weight * l_entropy


def reinforce_update(scorer: CrossAttentionScorer, trajectories: list[Trajectory],
                     learning_rate: float, entropy_weight: float = 0.01):
    """One gradient step on L_pg + L_value + entropy_weight * L_entropy.

    Trajectories must come from the current policy (synchronous on-policy
    contract). Returns (scorer, l_pg, l_value, l_entropy).
    """
    if not trajectories:
        raise ValueError("empty trajectory batch")
    grads = scorer.zero_grads()
    l_pg, l_value, l_entropy = _rl_pass(scorer, trajectories, entropy_weight, grads)
    scorer.apply_grads(grads, learning_rate)
    return scorer, l_pg, l_value, l_entropy


def run_policy_episode(scorer: CrossAttentionScorer, env: Env, goal,
                       mode: str = "sample", horizon: int = 100,
                       rng_seed: int = 0, collect: bool = False) -> Trajectory:
    """Roll out one episode: deterministic query reformulation on search
    pages, the learned choice policy everywhere else."""
    if horizon < 1:
        raise ValueError("horizon must be >= 1")
    if mode not in ("sample", "greedy"):
        raise ValueError(f"unknown mode {mode!r}")
    rng = np.random.default_rng(rng_seed)
    state, obs = env.reset(goal)
    steps: list[TrajStep] = []
    tsteps: list[PolicyStep] = []
    items: set[str] = set()
    searches = 0
    done = False
    breakdown = None
    for _ in range(horizon):
        obs_tokens = tokenize(policy_observation_text(obs.rendered_text))
        if state.page == Page.SEARCH:
            query = query_generate(goal.instruction_text, searches)
            searches += 1
            action = Action("search", query)
            action_tokens = [tokenize(query) or ["?"]]
            chosen = 0
            is_choice = False
        else:
            legal = obs.actions
            action_tokens = [tokenize(a.argument) for a in legal]
            pi = scorer.policy(obs_tokens, action_tokens)
            if mode == "greedy":
                chosen = int(np.argmax(pi))
            else:
                chosen = int(rng.choice(len(pi), p=pi))
            action = legal[chosen]
            is_choice = True
        digest = observation_digest(obs.rendered_text)
        state, obs, reward, done, breakdown = env.step(state, action, goal)
        steps.append(TrajStep(digest, action, reward, state.page))
        if collect:
            tsteps.append(PolicyStep(obs_tokens, action_tokens, chosen,
                                     float(reward), is_choice))
        if state.focused_product_id is not None:
            items.add(state.focused_product_id)
        if done:
            break
    return Trajectory(goal.goal_id, steps, breakdown,
                      trajectory_stats(steps, items), truncated=not done,
                      training_steps=tsteps)


# -- end-to-end training loops ------------------------------------------------

def collect_oracle_demos(env: Env, goals, query_attempt: int = 0) -> list[Trajectory]:
    demos = []
    for goal in goals:
        query = query_generate(goal.instruction_text, query_attempt)
        demos.append(oracle_episode(env, goal, query))
    return demos


def demo_samples(trajectories: list[Trajectory]) -> list[PolicyStep]:
    return [step for traj in trajectories for step in traj.training_steps
            if step.is_choice]


def mean_log_likelihood(scorer, samples: list[PolicyStep]) -> float:
    if not samples:
        return 0.0
    return -bc_loss(scorer, samples)


@dataclass
class BCResult:
    train_loss: list[float]
    holdout_ll_initial: float
    holdout_ll: list[float]
    n_train: int
    n_holdout: int


def train_bc(scorer: CrossAttentionScorer, samples: list[PolicyStep],
             epochs: int = 20, learning_rate: float = 0.05,
             batch_size: int = 16, seed: int = 0,
             holdout_frac: float = 0.1) -> BCResult:
    rng = random.Random(seed)
    pool = samples[:]
    rng.shuffle(pool)
    n_holdout = int(len(pool) * holdout_frac) if len(pool) > 4 else 0
    holdout, train = pool[:n_holdout], pool[n_holdout:]
    result = BCResult([], mean_log_likelihood(scorer, holdout), [],
                      len(train), len(holdout))
    for _ in range(epochs):
        rng.shuffle(train)
        losses = []
        for start in range(0, len(train), batch_size):
            _, loss = behavior_clone_update(scorer, train[start:start + batch_size],
                                            learning_rate)
            losses.append(loss)
        result.train_loss.append(sum(losses) / len(losses))
        result.holdout_ll.append(mean_log_likelihood(scorer, holdout))
    return result


@dataclass
class RLResult:
    episodes: int
    mean_rewards: list[float]
    losses: list[tuple[float, float, float]]


def train_rl(scorer: CrossAttentionScorer, env: Env, goals, episodes: int = 500,
             batch_size: int = 8, learning_rate: float = 0.01,
             entropy_weight: float = 0.01, horizon: int = 100,
             seed: int = 0) -> RLResult:
    rng = random.Random(seed)
    result = RLResult(0, [], [])
    while result.episodes < episodes:
        batch = []
        for _ in range(batch_size):
            goal = goals[rng.randrange(len(goals))]
            traj = run_policy_episode(
                scorer, env, goal, mode="sample", horizon=horizon,
                rng_seed=rng.randrange(2 ** 31), collect=True)
            batch.append(traj)
            result.episodes += 1
        _, l_pg, l_value, l_entropy = reinforce_update(
            scorer, batch, learning_rate, entropy_weight)
        result.losses.append((l_pg, l_value, l_entropy))
        result.mean_rewards.append(
            sum(float(t.reward) for t in batch) / len(batch))
    return result

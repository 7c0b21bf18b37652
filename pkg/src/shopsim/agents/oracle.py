"""Privileged choice oracle: exhaustive search over retrieved items and
option combinations, maximizing the hidden reward.

The oracle sees the reward function, product attributes and the goal's
option requirements, which no ordinary agent may touch. It exists to bound
what choosing perfectly could achieve for a fixed query, and to script
demonstration episodes for imitation.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction

from ..reward import RewardBreakdown
from ..search import PAGE_SIZE, search
from ..session import BUY, NEXT_PAGE, Action, Env, Page
from ..text import tokenize
from .base import (PolicyStep, TrajStep, Trajectory, observation_digest,
                   policy_observation_text, trajectory_stats)

DEFAULT_COMBO_CAP = 10_000


@dataclass
class OracleChoice:
    product_id: str
    rank: int
    options: dict[str, str]
    breakdown: RewardBreakdown
    skipped_items: int  # items whose combination count exceeded the cap


def choice_oracle(env: Env, goal, query: str,
                  combo_cap: int = DEFAULT_COMBO_CAP) -> OracleChoice | None:
    """Best (item, options) over the query's results; None when empty.

    Ties prefer the earlier-ranked item, then the lexicographically smallest
    option assignment. Items with more than combo_cap option combinations
    are skipped and counted.
    """
    results = search(env.index, query)
    skipped = 0
    best: OracleChoice | None = None
    for rank, pid in enumerate(results):
        product = env.catalog.by_id[pid]
        fields = list(product.option_groups)
        n_combos = 1
        for f in fields:
            n_combos *= len(product.option_groups[f])
        if n_combos > combo_cap:
            skipped += 1
            continue
        # type/attribute/price parts do not depend on the selection; only
        # the option count varies per combination
        base = env.reward_engine(goal, product, {}, env.catalog)
        denom = base.n_att + base.n_opt + 1
        for combo in itertools.product(*(product.option_groups[f] for f in fields)):
            selected = dict(zip(fields, combo))
            matched_opt = sum(1 for f, v in goal.u_opt.items()
                              if selected.get(f) == v)
            r = base.r_type * Fraction(
                base.matched_att + matched_opt + base.price_score, denom)
            key = tuple(sorted(selected.items()))
            if best is None or r > best.breakdown.r or (
                    r == best.breakdown.r and rank == best.rank
                    and key < tuple(sorted(best.options.items()))):
                breakdown = env.reward_engine(goal, product, selected, env.catalog)
                assert breakdown.r == r
                best = OracleChoice(pid, rank, selected, breakdown, 0)
    if best is not None:
        best.skipped_items = skipped
    return best


def oracle_episode(env: Env, goal, query: str | None = None,
                   combo_cap: int = DEFAULT_COMBO_CAP) -> Trajectory:
    """Execute the oracle's choice as a real episode (for demonstrations)."""
    query = query if query is not None else goal.instruction_text
    choice = choice_oracle(env, goal, query, combo_cap)
    state, obs = env.reset(goal)
    steps: list[TrajStep] = []
    tsteps: list[PolicyStep] = []
    items: set[str] = set()

    def take(action: Action):
        nonlocal state, obs
        digest = observation_digest(obs.rendered_text)
        if action.kind == "choose":
            tsteps.append(PolicyStep(
                obs_tokens=tokenize(policy_observation_text(obs.rendered_text)),
                action_tokens=[tokenize(a.argument) for a in obs.actions],
                chosen_index=obs.actions.index(action),
                reward=0.0, is_choice=True))
        else:
            tsteps.append(PolicyStep(
                obs_tokens=tokenize(policy_observation_text(obs.rendered_text)),
                action_tokens=[tokenize(action.argument) or ["?"]],
                chosen_index=0, reward=0.0, is_choice=False))
        state, obs, reward, done, breakdown = env.step(state, action, goal)
        tsteps[-1].reward = float(reward)
        steps.append(TrajStep(digest, action, reward, state.page))
        return reward, done, breakdown

    take(Action("search", query))
    if choice is None:
        return Trajectory(goal.goal_id, steps, None,
                          trajectory_stats(steps, items), truncated=True,
                          training_steps=tsteps)

    for _ in range(choice.rank // PAGE_SIZE):
        take(Action("choose", NEXT_PAGE))
    product = env.catalog.by_id[choice.product_id]
    take(Action("choose", product.title))
    items.add(product.id)
    # clicking a value label resolves to the first group containing it, so
    # when a label appears in two groups the executed episode (and its
    # breakdown below) is the environment truth, not the planned assignment
    for fname in product.option_groups:
        take(Action("choose", choice.options[fname]))
    _, done, breakdown = take(Action("choose", BUY))
    assert done and breakdown is not None
    return Trajectory(goal.goal_id, steps, breakdown,
                      trajectory_stats(steps, items), truncated=False,
                      training_steps=tsteps)

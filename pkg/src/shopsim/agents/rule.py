"""Baseline agent: search the instruction, buy the first hit, pick nothing."""

from __future__ import annotations

from ..session import BUY, Action, Env, Page
from .base import TrajStep, Trajectory, observation_digest, trajectory_stats


def rule_agent(env: Env, goal) -> Trajectory:
    """Three actions: search the instruction text, open the first result,
    buy it without touching any option. Truncates with zero reward when the
    search comes back empty."""
    state, obs = env.reset(goal)
    steps: list[TrajStep] = []
    items: set[str] = set()

    action = Action("search", goal.instruction_text)
    digest = observation_digest(obs.rendered_text)
    state, obs, reward, done, breakdown = env.step(state, action, goal)
    steps.append(TrajStep(digest, action, reward, state.page))

    if not state.results:
        return Trajectory(goal.goal_id, steps, None,
                          trajectory_stats(steps, items), truncated=True)

    first = env.catalog.by_id[state.results[0]]
    for action in (Action("choose", first.title), Action("choose", BUY)):
        digest = observation_digest(obs.rendered_text)
        state, obs, reward, done, breakdown = env.step(state, action, goal)
        steps.append(TrajStep(digest, action, reward, state.page))
    items.add(first.id)

    assert done and state.page == Page.DONE
    return Trajectory(goal.goal_id, steps, breakdown,
                      trajectory_stats(steps, items), truncated=False)

"""Shared trajectory containers for scripted and learned agents."""

from __future__ import annotations

import hashlib
import re
from dataclasses import dataclass, field

from ..reward import RewardBreakdown, TrajectoryStats
from ..session import Action, Page


def observation_digest(rendered_text: str) -> str:
    return hashlib.sha256(rendered_text.encode("utf-8")).hexdigest()


_ENTRY_ROW = re.compile(r"^\[\d+\] ")


def policy_observation_text(rendered_text: str) -> str:
    """The observation slice the choice policy conditions on.

    Keeps the instruction, the page header, the top result row and the
    current selection markers; drops the rest of the button listing, whose
    text already reaches the scorer through the action branch. Feeding the
    full page would let every candidate's tokens attend to their own
    listing, drowning the useful signal of whether the instruction mentions
    them; the top row alone keeps the retrieval ranking visible.
    """
    keep = []
    seen_entry = False
    for i, line in enumerate(rendered_text.split("\n")):
        if i < 2 or "[selected]" in line or line.endswith(":"):
            keep.append(line)
        elif not seen_entry and _ENTRY_ROW.match(line):
            keep.append("top " + line)
            seen_entry = True
    return "\n".join(keep)


@dataclass(frozen=True)
class TrajStep:
    obs_digest: str  # digest of the observation the action was taken from
    action: Action
    reward: object  # Fraction; zero everywhere except the Buy step
    page_after: Page


@dataclass
class PolicyStep:
    """Training-time view of one step: tokens, candidates, the pick, reward."""
    obs_tokens: list[str]
    action_tokens: list[list[str]]
    chosen_index: int
    reward: float
    is_choice: bool  # False for the deterministic search steps


@dataclass
class Trajectory:
    goal_id: str
    steps: list[TrajStep]
    breakdown: RewardBreakdown | None
    stats: TrajectoryStats
    truncated: bool
    training_steps: list[PolicyStep] = field(default_factory=list)

    @property
    def reward(self):
        return self.breakdown.r if self.breakdown is not None else 0


def trajectory_stats(steps: list[TrajStep], items: set[str]) -> TrajectoryStats:
    searches = sum(1 for s in steps if s.action.kind == "search")
    return TrajectoryStats(states=len(steps), items=len(items), searches=searches)

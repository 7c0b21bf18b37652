"""Trajectory records, replay verification, goal splits and evaluation.

A TrajectoryRecord stores the action texts of one episode plus the observed
page/digest at every step; replaying those texts through a fresh session
must reproduce the recorded observations and reward exactly.
"""

from __future__ import annotations

import json
import random
from dataclasses import dataclass, field
from fractions import Fraction

from .agents import (CrossAttentionScorer, Trajectory, observation_digest,
                     oracle_episode, rule_agent, run_policy_episode)
from .agents.base import policy_observation_text
from .agents.base import PolicyStep
from .goals import Goal
from .reward import (MetricsReport, RewardBreakdown, TrajectoryStats,
                     aggregate_metrics)
from .session import Env, Page, parse_action
from .text import tokenize

ACTOR_TAGS = ("human", "rule", "oracle", "policy")


@dataclass(frozen=True)
class RecordStep:
    action_text: str
    page: str  # page reached by the action
    obs_digest: str  # digest of the observation the action was taken from
    t: float


@dataclass
class TrajectoryRecord:
    session_id: str
    goal_id: str
    actor: str
    steps: list[RecordStep]
    breakdown: RewardBreakdown | None
    truncated: bool

    def to_json(self) -> dict:
        return {
            "session_id": self.session_id,
            "goal_id": self.goal_id,
            "actor": self.actor,
            "steps": [{"action": s.action_text, "page": s.page,
                       "obs": s.obs_digest, "t": s.t} for s in self.steps],
            "breakdown": None if self.breakdown is None else self.breakdown.to_json(),
            "truncated": self.truncated,
        }

    @classmethod
    def from_json(cls, data: dict) -> "TrajectoryRecord":
        return cls(
            session_id=str(data["session_id"]),
            goal_id=str(data["goal_id"]),
            actor=str(data["actor"]),
            steps=[RecordStep(s["action"], s["page"], s["obs"], float(s["t"]))
                   for s in data["steps"]],
            breakdown=(None if data["breakdown"] is None
                       else RewardBreakdown.from_json(data["breakdown"])),
            truncated=bool(data["truncated"]),
        )


def trajectory_to_record(traj: Trajectory, session_id: str, actor: str,
                         clock=None) -> TrajectoryRecord:
    now = clock if clock is not None else (lambda: 0.0)
    return TrajectoryRecord(
        session_id=session_id,
        goal_id=traj.goal_id,
        actor=actor,
        steps=[RecordStep(s.action.text(), s.page_after.value, s.obs_digest, now())
               for s in traj.steps],
        breakdown=traj.breakdown,
        truncated=traj.truncated,
    )


def append_records(records: list[TrajectoryRecord], path) -> None:
    with open(path, "a", encoding="utf-8") as fh:
        for record in records:
            fh.write(json.dumps(record.to_json(), sort_keys=True) + "\n")


def read_records(path) -> list[TrajectoryRecord]:
    records = []
    with open(path, encoding="utf-8") as fh:
        for line in fh:
            line = line.strip()
            if line:
                records.append(TrajectoryRecord.from_json(json.loads(line)))
    return records


@dataclass
class ReplayResult:
    record: TrajectoryRecord
    reward: Fraction
    breakdown: RewardBreakdown | None
    mismatches: list[str] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.mismatches


def replay_record(env: Env, record: TrajectoryRecord) -> ReplayResult:
    """Re-run a record's action texts; flag any observation/page/reward drift."""
    goal = env.goal(record.goal_id)
    state, obs = env.reset(goal)
    mismatches: list[str] = []
    breakdown = None
    reward = Fraction(0)
    for i, step in enumerate(record.steps):
        digest = observation_digest(obs.rendered_text)
        if digest != step.obs_digest:
            mismatches.append(f"step {i}: observation digest drift")
        action = parse_action(step.action_text)
        state, obs, reward, done, breakdown = env.step(state, action, goal)
        if state.page.value != step.page:
            mismatches.append(f"step {i}: page {state.page.value} != {step.page}")
    recorded_r = record.breakdown.r if record.breakdown else Fraction(0)
    final_r = breakdown.r if breakdown else Fraction(0)
    if final_r != recorded_r:
        mismatches.append(f"reward {final_r} != recorded {recorded_r}")
    if record.breakdown != breakdown:
        mismatches.append("breakdown drift")
    return ReplayResult(record, final_r, breakdown, mismatches)


def replay_record_to_samples(env: Env, record: TrajectoryRecord) -> list[PolicyStep]:
    """Rebuild imitation samples (obs tokens, candidates, pick) from a record."""
    goal = env.goal(record.goal_id)
    state, obs = env.reset(goal)
    samples: list[PolicyStep] = []
    for step in record.steps:
        action = parse_action(step.action_text)
        if action.kind == "choose":
            samples.append(PolicyStep(
                obs_tokens=tokenize(policy_observation_text(obs.rendered_text)),
                action_tokens=[tokenize(a.argument) for a in obs.actions],
                chosen_index=obs.actions.index(action),
                reward=0.0, is_choice=True))
        state, obs, reward, done, _ = env.step(state, action, goal)
        if samples and action.kind == "choose":
            samples[-1].reward = float(reward)
    return samples


def split_goals(goals: list[Goal], seed: int,
                fractions=(0.85, 0.10, 0.05)) -> dict[str, list[Goal]]:
    """Seeded shuffle into train/dev/test with fixed proportions."""
    if abs(sum(fractions) - 1.0) > 1e-9:
        raise ValueError("split fractions must sum to 1")
    order = list(goals)
    random.Random(seed).shuffle(order)
    n = len(order)
    n_train = int(round(fractions[0] * n))
    n_dev = int(round(fractions[1] * n))
    return {
        "train": order[:n_train],
        "dev": order[n_train:n_train + n_dev],
        "test": order[n_train + n_dev:],
    }


def zero_breakdown(goal: Goal) -> RewardBreakdown:
    """Score of an episode that never bought anything."""
    n_att, n_opt = len(goal.u_att), len(goal.u_opt)
    return RewardBreakdown(
        r=Fraction(0), att_score=Fraction(0),
        opt_score=None if n_opt == 0 else Fraction(0), price_score=0,
        r_type=Fraction(0), matched_att=0, matched_opt=0,
        n_att=n_att, n_opt=n_opt)


def run_eval(env: Env, agent: str, goals: list[Goal], episodes: int, seed: int,
             horizon: int = 100, checkpoint=None,
             scorer: CrossAttentionScorer | None = None,
             log_path=None, mode: str = "sample"):
    """Run an agent over a goal split in-process; returns (report, records).

    Fully deterministic for a fixed (agent, goals, episodes, seed): episode
    order, policy sampling and the emitted records never touch a wall clock.
    """
    if agent not in ("rule", "oracle", "policy"):
        raise ValueError(f"unknown agent {agent!r}")
    if not goals:
        raise ValueError("empty goal split")
    if agent == "policy" and scorer is None:
        if checkpoint is None:
            raise ValueError("policy agent needs a checkpoint")
        scorer = CrossAttentionScorer.load(checkpoint)

    rng = random.Random(seed)
    picked = [goals[rng.randrange(len(goals))] for _ in range(episodes)]
    episodes_data = []
    records = []
    for i, goal in enumerate(picked):
        if agent == "rule":
            traj = rule_agent(env, goal)
        elif agent == "oracle":
            traj = oracle_episode(env, goal)
        else:
            traj = run_policy_episode(scorer, env, goal, mode=mode,
                                      horizon=horizon,
                                      rng_seed=seed * 1_000_003 + i)
        breakdown = traj.breakdown if traj.breakdown else zero_breakdown(goal)
        episodes_data.append((breakdown, traj.stats))
        records.append(trajectory_to_record(traj, f"eval-{agent}-{i:05d}", agent))
    report = aggregate_metrics(episodes_data)
    if log_path is not None:
        append_records(records, log_path)
    return report, records

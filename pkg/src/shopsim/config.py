"""Runtime defaults, overridable from a JSON config file."""

from __future__ import annotations

import dataclasses
import json
from dataclasses import dataclass


@dataclass
class Config:
    # search
    k1: float = 1.2
    b: float = 0.75
    # synthetic catalog
    n_products: int = 1000
    n_categories: int = 5
    max_options_per_group: int = 4
    price_range: tuple[float, float] = (5.0, 200.0)
    attribute_embed_prob: float = 0.8
    # attribute mining
    top_k_per_category: int = 30
    # goals
    max_att: int = 2
    max_opt: int = 2
    price_markup_range: tuple[float, float] = (1.05, 1.5)
    # splits
    split_seed: int = 0
    split_fractions: tuple[float, float, float] = (0.85, 0.10, 0.05)
    # episodes
    horizon: int = 100
    # scorer
    dim: int = 32
    vocab_size: int = 4096
    gamma: float = 0.99
    max_obs_tokens: int = 160
    # behavior cloning
    bc_epochs: int = 30
    bc_learning_rate: float = 0.1
    bc_batch_size: int = 16
    bc_holdout_frac: float = 0.1
    # policy gradient; positive entropy weight pushes toward uniform
    rl_episodes: int = 1000
    rl_batch_size: int = 8
    rl_learning_rate: float = 0.02
    entropy_weight: float = 0.01
    # oracle
    combo_cap: int = 10_000
    # server
    port: int = 8080
    max_sessions: int = 256
    session_ttl: float = 3600.0

    @classmethod
    def from_file(cls, path) -> "Config":
        with open(path, encoding="utf-8") as fh:
            data = json.load(fh)
        known = {f.name: f for f in dataclasses.fields(cls)}
        unknown = set(data) - set(known)
        if unknown:
            raise ValueError(f"unknown config keys: {sorted(unknown)}")
        kwargs = {}
        for key, value in data.items():
            if isinstance(value, list):
                value = tuple(value)
            kwargs[key] = value
        return cls(**kwargs)

    def to_file(self, path) -> None:
        data = dataclasses.asdict(self)
        with open(path, "w", encoding="utf-8") as fh:
            json.dump(data, fh, indent=2, sort_keys=True)
            fh.write("\n")

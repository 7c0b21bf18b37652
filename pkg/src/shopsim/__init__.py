"""shopsim: a deterministic, seedable simulated shopping site.

Catalog, lexical search, templated instructions, a page-typed episode state
machine with exact-arithmetic terminal rewards, scripted and learned agents,
and an HTTP service for human demonstration collection.
"""

from .catalog import (Catalog, CatalogConfig, CatalogError, Product,
                      generate_synthetic_catalog, load_catalog,
                      mine_attributes, save_catalog)
from .config import Config
from .goals import Goal, GoalConfig, generate_goals, load_goals, sample_goal, save_goals
from .reward import RewardBreakdown, aggregate_metrics, compute_reward
from .search import SearchIndex, build_index, paginate, search
from .session import (Action, Env, IllegalActionError, Observation, Page,
                      SessionState, available_actions, parse_action, reset,
                      step)
from .text import tokenize

__version__ = "0.1.0"

"""Terminal reward: title match, type multiplier, sub-score breakdown, metrics.

All scores are exact ``fractions.Fraction`` values so that "reward equals 1"
is decidable without an epsilon; floats only appear in reports.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .catalog import Catalog, Product
from .text import FUNCTION_WORDS, tokenize

ZERO = Fraction(0)
ONE = Fraction(1)
TENTH = Fraction(1, 10)
HALF = Fraction(1, 2)
FIFTH = Fraction(1, 5)


def title_match_tokens(title: str) -> list[str]:
    """Tokens kept for title matching: no function words, no pure numbers."""
    return [t for t in tokenize(title) if t not in FUNCTION_WORDS and not t.isdigit()]


def text_match(chosen_tokens: list[str], target_tokens: list[str]) -> Fraction:
    """Token-set overlap |chosen ∩ target| / max(1, |target|)."""
    target = set(target_tokens)
    overlap = set(chosen_tokens) & target
    return Fraction(len(overlap), max(1, len(target)))


def type_reward(chosen: Product, target: Product) -> Fraction:
    """Categorical multiplier in {0, 0.1, 0.5, 1} from title/category evidence.

    Cases, in order: zero overlap -> 0; overlap below 0.1 -> 0.1; overlap
    above 0.2 but the category or subcategory chain differs -> 0.5;
    otherwise 1. A product always types as 1 against itself.
    """
    tm = text_match(title_match_tokens(chosen.title), title_match_tokens(target.title))
    if tm == ZERO:
        return ZERO
    if tm < TENTH:
        return TENTH
    same_coarse = chosen.category == target.category
    same_fine = chosen.subcategory_chain == target.subcategory_chain
    if tm > FIFTH and not (same_coarse and same_fine):
        return HALF
    return ONE


@dataclass(frozen=True)
class RewardBreakdown:
    r: Fraction
    att_score: Fraction
    opt_score: Fraction | None  # None when the goal specifies no options
    price_score: int  # 0 or 1
    r_type: Fraction
    matched_att: int
    matched_opt: int
    n_att: int
    n_opt: int

    def recombined(self) -> Fraction:
        """Recompute r from the stored sub-parts; must equal ``r`` exactly."""
        return self.r_type * Fraction(
            self.matched_att + self.matched_opt + self.price_score,
            self.n_att + self.n_opt + 1)

    def to_json(self) -> dict:
        return {
            "r": str(self.r),
            "att_score": str(self.att_score),
            "opt_score": None if self.opt_score is None else str(self.opt_score),
            "price_score": self.price_score,
            "r_type": str(self.r_type),
            "matched_att": self.matched_att,
            "matched_opt": self.matched_opt,
            "n_att": self.n_att,
            "n_opt": self.n_opt,
        }

    @classmethod
    def from_json(cls, data: dict) -> "RewardBreakdown":
        return cls(
            r=Fraction(data["r"]),
            att_score=Fraction(data["att_score"]),
            opt_score=None if data["opt_score"] is None else Fraction(data["opt_score"]),
            price_score=int(data["price_score"]),
            r_type=Fraction(data["r_type"]),
            matched_att=int(data["matched_att"]),
            matched_opt=int(data["matched_opt"]),
            n_att=int(data["n_att"]),
            n_opt=int(data["n_opt"]),
        )


def compute_reward(goal, chosen: Product, selected_options: dict[str, str],
                   catalog: Catalog) -> RewardBreakdown:
    """Score a purchase: attribute/option/price matches scaled by type.

    Option credit goes to the options the buyer actually selected, compared
    as exact (field, value) pairs against the goal's required options.
    """
    target = catalog.by_id[goal.target_product_id]
    matched_att = len(goal.u_att & chosen.attributes)
    matched_opt = sum(1 for f, v in goal.u_opt.items()
                      if selected_options.get(f) == v)
    price_score = 1 if chosen.price <= goal.u_price else 0
    r_type = type_reward(chosen, target)
    n_att, n_opt = len(goal.u_att), len(goal.u_opt)
    r = r_type * Fraction(matched_att + matched_opt + price_score, n_att + n_opt + 1)
    return RewardBreakdown(
        r=r,
        att_score=Fraction(matched_att, n_att),
        opt_score=None if n_opt == 0 else Fraction(matched_opt, n_opt),
        price_score=price_score,
        r_type=r_type,
        matched_att=matched_att,
        matched_opt=matched_opt,
        n_att=n_att,
        n_opt=n_opt,
    )


@dataclass(frozen=True)
class TrajectoryStats:
    states: int
    items: int
    searches: int


@dataclass
class MetricsReport:
    episodes: int
    task_score: float
    success_rate: float
    att_score: float
    opt_score: float | None
    type_score: float
    price_score: float
    stats: dict[str, tuple[float, int, int]]  # name -> (avg, max, min)

    def to_json(self) -> dict:
        return {
            "episodes": self.episodes,
            "task_score": self.task_score,
            "success_rate": self.success_rate,
            "att_score": self.att_score,
            "opt_score": self.opt_score,
            "type_score": self.type_score,
            "price_score": self.price_score,
            "stats": {k: list(v) for k, v in self.stats.items()},
        }

    def to_text(self) -> str:
        opt = "n/a" if self.opt_score is None else f"{self.opt_score:.1f}"
        lines = [
            f"episodes      {self.episodes}",
            f"task score    {self.task_score:.1f}",
            f"success rate  {self.success_rate * 100:.1f}%",
            f"attribute     {self.att_score:.1f}",
            f"option        {opt}",
            f"type          {self.type_score:.1f}",
            f"price         {self.price_score:.1f}",
        ]
        for name, (avg, mx, mn) in self.stats.items():
            lines.append(f"{name:<13} {avg:.1f} (max {mx} / min {mn})")
        return "\n".join(lines)


def aggregate_metrics(episodes: list[tuple[RewardBreakdown, TrajectoryStats]]) -> MetricsReport:
    """Task score, success rate, sub-score means and trajectory statistics.

    Success counts exact r == 1 only. Sub-scores are reported on a 0-100
    scale; the option mean covers only episodes whose goal required options.
    """
    if not episodes:
        raise ValueError("aggregate_metrics needs at least one episode")
    n = len(episodes)
    breakdowns = [b for b, _ in episodes]
    task_score = 100.0 * float(sum(b.r for b in breakdowns) / n)
    success_rate = sum(1 for b in breakdowns if b.r == ONE) / n
    att = 100.0 * float(sum(b.att_score for b in breakdowns) / n)
    with_opt = [b.opt_score for b in breakdowns if b.opt_score is not None]
    opt = 100.0 * float(sum(with_opt) / len(with_opt)) if with_opt else None
    typ = 100.0 * float(sum(b.r_type for b in breakdowns) / n)
    price = 100.0 * sum(b.price_score for b in breakdowns) / n

    stats = {}
    for name in ("states", "items", "searches"):
        values = [getattr(s, name) for _, s in episodes]
        stats[name] = (sum(values) / n, max(values), min(values))
    return MetricsReport(
        episodes=n,
        task_score=task_score,
        success_rate=success_rate,
        att_score=att,
        opt_score=opt,
        type_score=typ,
        price_score=price,
        stats=stats,
    )

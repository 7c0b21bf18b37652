"""Goal sampling and instruction rendering.

A goal names a target product, a non-empty attribute subset, an option
subset and a price cap strictly above the target price. The instruction text
is rendered from templates; attribute surface forms can be swapped through a
versioned paraphrase table while the goal keeps the canonical phrases.
"""

from __future__ import annotations

import importlib.resources
import json
import random
from dataclasses import dataclass

from .catalog import Catalog


class GoalError(ValueError):
    pass


@dataclass(frozen=True)
class Goal:
    goal_id: str
    target_product_id: str
    u_att: frozenset[str]
    u_opt: dict[str, str]
    u_price: float
    instruction_text: str = ""

    def to_record(self) -> dict:
        return {
            "goal_id": self.goal_id,
            "target_product_id": self.target_product_id,
            "u_att": sorted(self.u_att),
            "u_opt": dict(self.u_opt),
            "u_price": self.u_price,
            "instruction_text": self.instruction_text,
        }

    @classmethod
    def from_record(cls, rec: dict) -> "Goal":
        return cls(
            goal_id=str(rec["goal_id"]),
            target_product_id=str(rec["target_product_id"]),
            u_att=frozenset(rec["u_att"]),
            u_opt={str(k): str(v) for k, v in rec["u_opt"].items()},
            u_price=float(rec["u_price"]),
            instruction_text=str(rec.get("instruction_text", "")),
        )


@dataclass
class GoalConfig:
    max_att: int = 2
    max_opt: int = 2
    price_markup_range: tuple[float, float] = (1.05, 1.5)

    def validate(self) -> None:
        if self.max_att < 1:
            raise GoalError("max_att must be >= 1")
        if self.max_opt < 0:
            raise GoalError("max_opt must be >= 0")
        lo, hi = self.price_markup_range
        if not (1.0 < lo <= hi):
            raise GoalError("price markup must be > 1 and min <= max")


# Each template has a variant with and without an option clause. Slots:
# {category}, {attributes}, {options}, {price}.
DEFAULT_TEMPLATES = [
    {
        "with_options": "i am looking for {attributes} {category} with {options}, "
                        "and price lower than {price} dollars",
        "without_options": "i am looking for {attributes} {category}, "
                           "and price lower than {price} dollars",
    },
    {
        "with_options": "can you find me {category} that is {attributes}? "
                        "i want {options}, and price lower than {price} dollars",
        "without_options": "can you find me {category} that is {attributes}? "
                           "price lower than {price} dollars",
    },
    {
        "with_options": "i need {category} with {options}. it should be "
                        "{attributes}, and price lower than {price} dollars",
        "without_options": "i need {category}. it should be {attributes}, "
                           "and price lower than {price} dollars",
    },
    {
        "with_options": "find {attributes} {category} in {options}, "
                        "price lower than {price} dollars",
        "without_options": "find {attributes} {category}, "
                           "price lower than {price} dollars",
    },
]

_REQUIRED_SLOTS = {
    "with_options": ("{category}", "{attributes}", "{options}", "{price}"),
    "without_options": ("{category}", "{attributes}", "{price}"),
}


def load_paraphrases(path=None) -> dict[str, str]:
    """Load the attribute paraphrase table; defaults to the packaged file."""
    if path is None:
        source = importlib.resources.files("shopsim.data").joinpath("paraphrases.json")
        data = json.loads(source.read_text(encoding="utf-8"))
    else:
        with open(path, encoding="utf-8") as fh:
            data = json.load(fh)
    if "version" not in data or "attributes" not in data:
        raise GoalError("paraphrase table needs 'version' and 'attributes' fields")
    return {str(k): str(v) for k, v in data["attributes"].items()}


def load_templates(path) -> list[dict]:
    """Load a template file: one JSON object per line, validated for slots."""
    templates = []
    with open(path, encoding="utf-8") as fh:
        for line_no, line in enumerate(fh, start=1):
            line = line.strip()
            if not line:
                continue
            tpl = json.loads(line)
            _validate_template(tpl, where=f"line {line_no}")
            templates.append(tpl)
    if not templates:
        raise GoalError("template file is empty")
    return templates


def _validate_template(tpl: dict, where: str = "template") -> None:
    for key, slots in _REQUIRED_SLOTS.items():
        text = tpl.get(key)
        if not isinstance(text, str):
            raise GoalError(f"{where}: missing {key!r} text")
        for slot in slots:
            if slot not in text:
                raise GoalError(f"{where}: {key!r} lacks required slot {slot}")


def sample_goal(catalog: Catalog, rng_seed: int, config: GoalConfig | None = None,
                goal_id: str | None = None) -> Goal:
    """Sample a goal from a uniformly chosen product that has attributes."""
    config = config or GoalConfig()
    config.validate()
    eligible = [p for p in catalog.products if p.attributes]
    if not eligible:
        raise GoalError("no product in the catalog has attributes")
    rng = random.Random(rng_seed)
    target = eligible[rng.randrange(len(eligible))]

    atts = sorted(target.attributes)
    n_att = rng.randint(1, min(config.max_att, len(atts)))
    u_att = frozenset(rng.sample(atts, n_att))

    fields = list(target.option_groups)
    n_opt = rng.randint(0, min(config.max_opt, len(fields)))
    u_opt = {}
    for fname in sorted(rng.sample(fields, n_opt)):
        u_opt[fname] = rng.choice(target.option_groups[fname])

    lo, hi = config.price_markup_range
    u_price = round(target.price * rng.uniform(lo, hi), 2)
    if u_price <= target.price:
        u_price = round(target.price + 0.01, 2)
    return Goal(
        goal_id=goal_id or f"g{rng_seed}",
        target_product_id=target.id,
        u_att=u_att,
        u_opt=u_opt,
        u_price=u_price,
    )


def render_instruction(goal: Goal, catalog: Catalog,
                       template_set: list[dict] | None = None,
                       rng_seed: int = 0,
                       paraphrases: dict[str, str] | None = None) -> str:
    """Fill a randomly chosen template with the goal's requirements.

    Every required attribute and option value appears verbatim unless the
    paraphrase table maps it to a surface form; the price cap is always
    rendered as "price lower than X dollars".
    """
    templates = template_set if template_set is not None else DEFAULT_TEMPLATES
    for tpl in templates:
        _validate_template(tpl)
    paraphrases = paraphrases or {}
    target = catalog.by_id.get(goal.target_product_id)
    if target is None:
        raise GoalError(f"unknown target product {goal.target_product_id!r}")

    rng = random.Random(rng_seed)
    tpl = templates[rng.randrange(len(templates))]
    category_noun = target.subcategory_chain[-1] if target.subcategory_chain else target.category
    att_parts = [paraphrases.get(a, a) for a in sorted(goal.u_att)]
    attributes = " and ".join(att_parts)
    price = f"{goal.u_price:.2f}"

    if goal.u_opt:
        opt_parts = [f"{value} {fname}" for fname, value in sorted(goal.u_opt.items())]
        options = " and ".join(opt_parts)
        text = tpl["with_options"].format(category=category_noun,
                                          attributes=attributes,
                                          options=options, price=price)
    else:
        text = tpl["without_options"].format(category=category_noun,
                                             attributes=attributes, price=price)
    return text


def attach_instruction(goal: Goal, catalog: Catalog, rng_seed: int = 0,
                       template_set: list[dict] | None = None,
                       paraphrases: dict[str, str] | None = None) -> Goal:
    text = render_instruction(goal, catalog, template_set, rng_seed, paraphrases)
    return Goal(goal_id=goal.goal_id, target_product_id=goal.target_product_id,
                u_att=goal.u_att, u_opt=goal.u_opt, u_price=goal.u_price,
                instruction_text=text)


def generate_goals(catalog: Catalog, n: int, seed: int,
                   config: GoalConfig | None = None,
                   template_set: list[dict] | None = None,
                   paraphrases: dict[str, str] | None = None) -> list[Goal]:
    """Sample n instruction-carrying goals, deterministic per (catalog, seed)."""
    goals = []
    for i in range(n):
        goal = sample_goal(catalog, seed + i, config, goal_id=f"g{i:05d}")
        goals.append(attach_instruction(goal, catalog, rng_seed=seed + i,
                                        template_set=template_set,
                                        paraphrases=paraphrases))
    return goals


def save_goals(goals: list[Goal], path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        for goal in goals:
            fh.write(json.dumps(goal.to_record(), sort_keys=True) + "\n")


def load_goals(path) -> list[Goal]:
    goals = []
    with open(path, encoding="utf-8") as fh:
        for line in fh:
            line = line.strip()
            if line:
                goals.append(Goal.from_record(json.loads(line)))
    return goals

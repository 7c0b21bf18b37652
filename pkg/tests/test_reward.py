from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from shopsim.goals import Goal
from shopsim.catalog import Catalog
from shopsim.reward import (RewardBreakdown, TrajectoryStats, aggregate_metrics,
                            compute_reward, text_match, title_match_tokens,
                            type_reward)

from conftest import make_product


def goal_for(target, u_att, u_opt=None, u_price=None):
    return Goal(goal_id="g", target_product_id=target.id,
                u_att=frozenset(u_att), u_opt=dict(u_opt or {}),
                u_price=u_price if u_price is not None else target.price * 1.2)


class TestTextMatch:
    def test_identical_is_one(self):
        toks = ["blackout", "shade", "window"]
        assert text_match(toks, toks) == 1

    def test_disjoint_is_zero(self):
        assert text_match(["apple"], ["pear", "plum"]) == 0

    def test_partial_overlap_fixture(self):
        target = ["blackout", "shades", "window"]
        chosen = ["blackout", "curtain"]
        assert text_match(chosen, target) == Fraction(1, 3)

    def test_empty_target_is_zero_not_error(self):
        assert text_match(["x"], []) == 0

    def test_filter_drops_function_words_and_numbers(self):
        toks = title_match_tokens("The Shade 66 of Window")
        assert toks == ["shade", "window"]


def titled(pid, title, category="fashion", chain=("shoes", "sneakers")):
    return make_product(pid, title, category=category, chain=chain)


WORDS = ("alpha bravo charlie delta echo foxtrot golf hotel india juliet "
         "kilo lima mike november oscar papa quebec romeo sierra tango").split()


class TestTypeReward:
    def test_zero_overlap_gives_zero(self):
        assert type_reward(titled("a", "apple pie"), titled("b", "steel chair")) == 0

    def test_small_overlap_gives_tenth(self):
        target = titled("t", " ".join(WORDS[:11]))
        chosen = titled("c", WORDS[0] + " zulu yankee")
        assert type_reward(chosen, target) == Fraction(1, 10)

    def test_mid_overlap_is_full_reward_for_any_category(self):
        target = titled("t", " ".join(WORDS))  # 20 tokens
        chosen_same = titled("c", " ".join(WORDS[:3]) + " zulu")
        chosen_other = titled("d", " ".join(WORDS[:3]) + " zulu",
                              category="food", chain=("pantry", "snacks"))
        assert type_reward(chosen_same, target) == 1  # 3/20 = 0.15
        assert type_reward(chosen_other, target) == 1

    def test_high_overlap_with_category_mismatch_is_half(self):
        target = titled("t", " ".join(WORDS[:4]))
        chosen = titled("c", " ".join(WORDS[:3]) + " zulu",
                        category="food", chain=("pantry", "snacks"))
        assert type_reward(chosen, target) == Fraction(1, 2)  # 3/4 > 0.2

    def test_high_overlap_with_subcategory_mismatch_is_half(self):
        target = titled("t", " ".join(WORDS[:4]))
        chosen = titled("c", " ".join(WORDS[:3]) + " zulu", chain=("shoes", "boots"))
        assert type_reward(chosen, target) == Fraction(1, 2)

    def test_self_match_is_always_one(self, small_catalog):
        for p in small_catalog.products:
            assert type_reward(p, p) == 1

    def test_boundary_exactly_point_one_is_not_tenth(self):
        target = titled("t", " ".join(WORDS[:10]))
        chosen = titled("c", WORDS[0] + " zulu")
        # 1/10 is not < 0.1, and not > 0.2: falls through to 1
        assert type_reward(chosen, target) == 1


class TestComputeReward:
    def _pair(self, r_type_one=True):
        """Target plus a same-titled twin with controlled matches."""
        target = make_product(
            "t", " ".join(WORDS[:11]), price=50.0,
            options={"color": ["red", "blue"]},
            attributes=("water resistant", "slim fit"))
        # shared title gives overlap 1 (type 1); a single shared token out
        # of 11 gives overlap 1/11 < 0.1 (type 0.1)
        twin_title = (" ".join(WORDS[:11]) if r_type_one
                      else WORDS[0] + " zulu yankee")
        chosen = make_product(
            "c", twin_title, price=50.0,
            options={"color": ["red", "blue"]},
            attributes=("water resistant", "crew neck"))
        return target, chosen

    def test_target_with_exact_options_scores_one(self):
        target, _ = self._pair()
        catalog = Catalog(products=[target])
        goal = goal_for(target, ["water resistant"], {"color": "red"})
        breakdown = compute_reward(goal, target, {"color": "red"}, catalog)
        assert breakdown.r == 1

    def test_partial_match_halves(self):
        target, chosen = self._pair(r_type_one=True)
        catalog = Catalog(products=[target, chosen])
        goal = goal_for(target, ["water resistant", "slim fit"], {"color": "blue"})
        breakdown = compute_reward(goal, chosen, {}, catalog)
        # 1 attribute of 2, 0 options of 1, price ok: (1+0+1)/4
        assert breakdown.r == Fraction(1, 2)
        assert breakdown.att_score == Fraction(1, 2)
        assert breakdown.opt_score == 0
        assert breakdown.price_score == 1
        assert breakdown.r_type == 1

    def test_type_multiplier_scales_reward(self):
        target, chosen = self._pair(r_type_one=False)
        catalog = Catalog(products=[target, chosen])
        goal = goal_for(target, ["water resistant", "slim fit"], {"color": "blue"})
        breakdown = compute_reward(goal, chosen, {}, catalog)
        assert breakdown.r_type == Fraction(1, 10)
        assert breakdown.r == Fraction(1, 20)  # 0.1 * (1+0+1)/4

    def test_option_match_is_field_and_value(self):
        target, _ = self._pair()
        catalog = Catalog(products=[target])
        goal = goal_for(target, ["water resistant"], {"color": "red"})
        wrong_field = compute_reward(goal, target, {"size": "red"}, catalog)
        assert wrong_field.matched_opt == 0
        wrong_value = compute_reward(goal, target, {"color": "blue"}, catalog)
        assert wrong_value.matched_opt == 0

    def test_price_above_cap_loses_the_point(self):
        target, _ = self._pair()
        catalog = Catalog(products=[target])
        goal = goal_for(target, ["water resistant"], u_price=49.0)
        breakdown = compute_reward(goal, target, {}, catalog)
        assert breakdown.price_score == 0

    def test_breakdown_json_round_trip(self):
        target, _ = self._pair()
        catalog = Catalog(products=[target])
        goal = goal_for(target, ["water resistant"], {"color": "red"})
        breakdown = compute_reward(goal, target, {}, catalog)
        assert RewardBreakdown.from_json(breakdown.to_json()) == breakdown


# -- property tests over randomized goal/product/selection triples ----------

_tokens = st.sampled_from(WORDS)
_titles = st.lists(_tokens, min_size=1, max_size=6, unique=True).map(" ".join)
_attrs = st.frozensets(st.sampled_from(
    ["water resistant", "slim fit", "crew neck", "gluten free", "fair trade"]),
    min_size=0, max_size=4)
_chains = st.sampled_from([("shoes", "sneakers"), ("pantry", "snacks")])
_cats = st.sampled_from(["fashion", "food"])


@st.composite
def _product(draw, pid):
    options = {}
    if draw(st.booleans()):
        options["color"] = draw(st.lists(
            st.sampled_from(["red", "blue", "olive"]),
            min_size=1, max_size=3, unique=True))
    return make_product(pid, draw(_titles), price=draw(
        st.floats(min_value=1.0, max_value=100.0, allow_nan=False)),
        options=options, attributes=draw(_attrs),
        category=draw(_cats), chain=draw(_chains))


@st.composite
def _scenario(draw):
    target = draw(_product("t"))
    chosen = draw(_product("c"))
    u_att = draw(st.frozensets(st.sampled_from(sorted(target.attributes)), min_size=1)
                 if target.attributes else st.just(frozenset(["slim fit"])))
    u_opt = {}
    if target.option_groups and draw(st.booleans()):
        u_opt["color"] = draw(st.sampled_from(target.option_groups["color"]))
    goal = Goal(goal_id="g", target_product_id="t", u_att=u_att, u_opt=u_opt,
                u_price=draw(st.floats(min_value=1.0, max_value=150.0,
                                       allow_nan=False)))
    selected = {}
    if chosen.option_groups and draw(st.booleans()):
        selected["color"] = draw(st.sampled_from(chosen.option_groups["color"]))
    return goal, target, chosen, selected


@settings(max_examples=300, deadline=None)
@given(_scenario())
def test_reward_bounded_and_recombines(scenario):
    goal, target, chosen, selected = scenario
    catalog = Catalog(products=[target, chosen])
    breakdown = compute_reward(goal, chosen, selected, catalog)
    assert 0 <= breakdown.r <= 1
    assert breakdown.recombined() == breakdown.r


@settings(max_examples=300, deadline=None)
@given(_scenario())
def test_perfect_reward_iff_all_parts_perfect(scenario):
    goal, target, chosen, selected = scenario
    catalog = Catalog(products=[target, chosen])
    breakdown = compute_reward(goal, chosen, selected, catalog)
    perfect = (breakdown.r_type == 1
               and goal.u_att <= chosen.attributes
               and all(selected.get(f) == v for f, v in goal.u_opt.items())
               and chosen.price <= goal.u_price)
    assert (breakdown.r == 1) == perfect


@settings(max_examples=200, deadline=None)
@given(_scenario())
def test_extra_matched_attribute_never_hurts(scenario):
    goal, target, chosen, selected = scenario
    missing = goal.u_att - chosen.attributes
    if not missing:
        return
    catalog = Catalog(products=[target, chosen])
    before = compute_reward(goal, chosen, selected, catalog)
    improved = make_product(
        chosen.id, chosen.title, chosen.description, chosen.overview,
        chosen.price, chosen.option_groups,
        tuple(chosen.attributes | {sorted(missing)[0]}),
        chosen.category, chosen.subcategory_chain)
    after = compute_reward(goal, improved, selected,
                           Catalog(products=[target, improved]))
    assert after.r >= before.r


class TestAggregateMetrics:
    def _episode(self, r, n_att=1, matched_att=None, states=3, items=1, searches=1):
        matched = matched_att if matched_att is not None else (n_att if r == 1 else 0)
        breakdown = RewardBreakdown(
            r=Fraction(r), att_score=Fraction(matched, n_att),
            opt_score=None, price_score=1 if r > 0 else 0,
            r_type=Fraction(1) if r > 0 else Fraction(0),
            matched_att=matched, matched_opt=0, n_att=n_att, n_opt=0)
        return breakdown, TrajectoryStats(states=states, items=items,
                                          searches=searches)

    def test_all_perfect(self):
        report = aggregate_metrics([self._episode(1), self._episode(1)])
        assert report.task_score == 100.0
        assert report.success_rate == 1.0

    def test_half_and_full(self):
        report = aggregate_metrics([self._episode(1),
                                    self._episode(Fraction(1, 2), n_att=2,
                                                  matched_att=1)])
        assert report.task_score == 75.0
        assert report.success_rate == 0.5

    def test_stats_hand_counted(self):
        episodes = [self._episode(1, states=3, items=1, searches=1),
                    self._episode(0, states=8, items=3, searches=2),
                    self._episode(1, states=4, items=2, searches=1)]
        report = aggregate_metrics(episodes)
        assert report.stats["states"] == (5.0, 8, 3)
        assert report.stats["items"] == (2.0, 3, 1)
        assert report.stats["searches"] == (pytest.approx(4 / 3), 2, 1)

    def test_empty_rejected(self):
        with pytest.raises(ValueError):
            aggregate_metrics([])

    def test_text_report_mentions_all_fields(self):
        text = aggregate_metrics([self._episode(1)]).to_text()
        for key in ("task score", "success rate", "attribute", "option",
                    "type", "price", "states", "items", "searches"):
            assert key in text

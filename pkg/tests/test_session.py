from fractions import Fraction

import pytest

from _fuzz import run_transition_fuzz
from shopsim.catalog import Catalog
from shopsim.goals import Goal, attach_instruction
from shopsim.search import build_index
from shopsim.session import (BACK_TO_SEARCH, BUY, DESCRIPTION, NEXT_PAGE,
                             OVERVIEW, PREV_PAGE, PREVIOUS, Action, Env,
                             IllegalActionError, Page, available_actions,
                             parse_action, render_simple, reset, step)

from conftest import make_product


@pytest.fixture
def tiny_env(tiny_catalog):
    goal = Goal(goal_id="g-a1", target_product_id="a1",
                u_att=frozenset(["breathable mesh"]),
                u_opt={"color": "red", "size": "s"}, u_price=20.0)
    goal = attach_instruction(goal, tiny_catalog, rng_seed=1)
    other = Goal(goal_id="g-b2", target_product_id="b2",
                 u_att=frozenset(["water resistant"]), u_opt={}, u_price=30.0)
    other = attach_instruction(other, tiny_catalog, rng_seed=2)
    return Env(tiny_catalog, build_index(tiny_catalog), [goal, other])


def to_item_page(env, goal_id="g-a1", query="Zephyr Trail Sneaker Kt77",
                 title="Zephyr Trail Sneaker Kt77"):
    goal = env.goal(goal_id)
    state, _ = env.reset(goal)
    state, _, _, _, _ = env.step(state, Action("search", query), goal)
    state, obs, _, _, _ = env.step(state, Action("choose", title), goal)
    return goal, state, obs


class TestActionGrammar:
    def test_round_trip(self):
        for text in ("search[red shoes]", "click[Back to Search]", "click[66 gb]"):
            assert parse_action(text).text() == text

    def test_bad_grammar_rejected(self):
        for bad in ("buy now", "search<red>", "click[oops", ""):
            with pytest.raises(IllegalActionError):
                parse_action(bad)


class TestReset:
    def test_starts_on_search_page(self, tiny_env):
        state, obs = tiny_env.reset(tiny_env.goal("g-a1"))
        assert state.page == Page.SEARCH
        assert state.step_count == 0
        assert obs.actions == [Action("search", "*")]
        assert obs.instruction_text

    def test_reset_twice_equal(self, tiny_env):
        a, _ = tiny_env.reset(tiny_env.goal("g-a1"))
        b, _ = tiny_env.reset(tiny_env.goal("g-a1"))
        assert a == b

    def test_different_goals_differ_only_in_instruction(self, tiny_env):
        _, obs_a = tiny_env.reset(tiny_env.goal("g-a1"))
        _, obs_b = tiny_env.reset(tiny_env.goal("g-b2"))
        assert obs_a.instruction_text != obs_b.instruction_text
        assert obs_a.page == obs_b.page
        assert obs_a.actions == obs_b.actions
        assert (obs_a.rendered_text.split("\n")[1:]
                == obs_b.rendered_text.split("\n")[1:])

    def test_unknown_goal_rejected(self, tiny_catalog):
        bogus = Goal(goal_id="g", target_product_id="zzz",
                     u_att=frozenset(["x"]), u_opt={}, u_price=1.0)
        with pytest.raises(KeyError):
            reset(tiny_catalog, build_index(tiny_catalog), bogus)


class TestAvailableActions:
    def test_full_results_page_one(self, medium_env):
        goal = list(medium_env.goals.values())[0]
        state, _ = medium_env.reset(goal)
        state, _, _, _, _ = medium_env.step(
            state, Action("search", "classic modern organic wireless a"), goal)
        assert state.page == Page.RESULTS
        assert len(state.results) >= 50
        actions = available_actions(state, medium_env.catalog)
        # back + next + 10 titles, no prev on page 1
        assert len(actions) == 12
        assert actions[0].argument == BACK_TO_SEARCH
        assert actions[1].argument == NEXT_PAGE

    def test_item_page_enumerates_options(self, tiny_env):
        _, state, obs = to_item_page(tiny_env)
        labels = [a.argument for a in obs.actions]
        assert labels[:4] == [BACK_TO_SEARCH, DESCRIPTION, OVERVIEW, BUY]
        assert set(labels[4:]) == {"red", "blue", "s", "m"}

    def test_item_detail_exactly_two(self, tiny_env):
        goal, state, _ = to_item_page(tiny_env)
        state, obs, _, _, _ = tiny_env.step(state, Action("choose", DESCRIPTION), goal)
        assert [a.argument for a in obs.actions] == [BACK_TO_SEARCH, PREVIOUS]

    def test_done_page_rejected(self, tiny_env):
        goal, state, _ = to_item_page(tiny_env)
        state, _, _, done, _ = tiny_env.step(state, Action("choose", BUY), goal)
        assert done
        with pytest.raises(IllegalActionError):
            available_actions(state, tiny_env.catalog)


class TestStep:
    def test_search_lands_on_results_page_one(self, tiny_env):
        goal = tiny_env.goal("g-a1")
        state, _ = tiny_env.reset(goal)
        state, obs, reward, done, _ = tiny_env.step(
            state, Action("search", "sneaker"), goal)
        assert state.page == Page.RESULTS
        assert state.result_page_index == 1
        assert state.last_query == "sneaker"
        assert reward == 0 and not done

    def test_option_reselect_overwrites_group(self, tiny_env):
        goal, state, _ = to_item_page(tiny_env)
        state, _, _, _, _ = tiny_env.step(state, Action("choose", "red"), goal)
        assert state.selected_options == {"color": "red"}
        state, _, _, _, _ = tiny_env.step(state, Action("choose", "blue"), goal)
        assert state.selected_options == {"color": "blue"}
        state, _, _, _, _ = tiny_env.step(state, Action("choose", "s"), goal)
        assert state.selected_options == {"color": "blue", "size": "s"}

    def test_options_survive_detail_round_trip(self, tiny_env):
        goal, state, _ = to_item_page(tiny_env)
        state, _, _, _, _ = tiny_env.step(state, Action("choose", "red"), goal)
        state, _, _, _, _ = tiny_env.step(state, Action("choose", OVERVIEW), goal)
        state, _, _, _, _ = tiny_env.step(state, Action("choose", PREVIOUS), goal)
        assert state.page == Page.ITEM
        assert state.selected_options == {"color": "red"}

    def test_options_cleared_by_new_search_and_refocus(self, tiny_env):
        goal, state, _ = to_item_page(tiny_env)
        state, _, _, _, _ = tiny_env.step(state, Action("choose", "red"), goal)
        state, _, _, _, _ = tiny_env.step(state, Action("choose", BACK_TO_SEARCH), goal)
        assert state.selected_options == {}
        assert state.results is None and state.focused_product_id is None

    def test_buy_target_with_exact_options_rewards_one(self, tiny_env):
        goal, state, _ = to_item_page(tiny_env)
        for label in ("red", "s"):
            state, _, _, _, _ = tiny_env.step(state, Action("choose", label), goal)
        state, _, reward, done, breakdown = tiny_env.step(
            state, Action("choose", BUY), goal)
        assert done and state.page == Page.DONE
        assert reward == 1 and breakdown.r == 1

    def test_expert_shaped_eight_action_episode(self, tiny_env):
        goal = tiny_env.goal("g-a1")
        title = "Zephyr Trail Sneaker Kt77"
        state, _ = tiny_env.reset(goal)
        script = [Action("search", "trail sneaker"), Action("choose", title),
                  Action("choose", BACK_TO_SEARCH), Action("search", title),
                  Action("choose", title), Action("choose", "red"),
                  Action("choose", "s"), Action("choose", BUY)]
        rewards = []
        for action in script:
            state, _, reward, done, _ = tiny_env.step(state, action, goal)
            rewards.append(reward)
        assert done and state.step_count == 8
        assert rewards[:-1] == [0] * 7
        assert rewards[-1] == 1

    def test_nav_labels_case_insensitive_titles_not(self, tiny_env):
        goal, state, _ = to_item_page(tiny_env)
        state, _, _, _, _ = tiny_env.step(state, Action("choose", "back to search"), goal)
        assert state.page == Page.SEARCH
        state, _, _, _, _ = tiny_env.step(state, Action("search", "sneaker"), goal)
        with pytest.raises(IllegalActionError):
            tiny_env.step(state, Action("choose", "zephyr trail sneaker kt77"), goal)

    def test_illegal_action_reports_code_and_preserves_state(self, tiny_env):
        goal = tiny_env.goal("g-a1")
        state, _ = tiny_env.reset(goal)
        with pytest.raises(IllegalActionError) as exc:
            tiny_env.step(state, Action("choose", BUY), goal)
        assert exc.value.code == "choose_not_allowed"
        assert state.page == Page.SEARCH and state.step_count == 0

        state, _, _, _, _ = tiny_env.step(state, Action("search", "sneaker"), goal)
        before = (state.page, state.step_count, state.results)
        with pytest.raises(IllegalActionError) as exc:
            tiny_env.step(state, Action("search", "again"), goal)
        assert exc.value.code == "search_not_allowed"
        with pytest.raises(IllegalActionError) as exc:
            tiny_env.step(state, Action("choose", "No Such Product"), goal)
        assert exc.value.code == "unknown_button"
        assert (state.page, state.step_count, state.results) == before

    def test_prev_next_page_bounds(self, medium_env):
        goal = list(medium_env.goals.values())[0]
        state, _ = medium_env.reset(goal)
        state, _, _, _, _ = medium_env.step(
            state, Action("search", "classic modern organic wireless a"), goal)
        with pytest.raises(IllegalActionError):
            medium_env.step(state, Action("choose", PREV_PAGE), goal)
        state, _, _, _, _ = medium_env.step(state, Action("choose", NEXT_PAGE), goal)
        assert state.result_page_index == 2
        state, _, _, _, _ = medium_env.step(state, Action("choose", PREV_PAGE), goal)
        assert state.result_page_index == 1

    def test_history_records_actions_and_pages(self, tiny_env):
        goal, state, _ = to_item_page(tiny_env)
        assert [page for _, page in state.history] == [Page.RESULTS, Page.ITEM]
        assert state.step_count == 2


class TestRenderSimple:
    def test_search_page_layout(self, tiny_env):
        goal = tiny_env.goal("g-a1")
        state, obs = tiny_env.reset(goal)
        lines = obs.rendered_text.split("\n")
        assert lines[0].startswith("instruction: ")
        assert lines[1] == "page: search"
        assert lines[2] == "[button] search [/button]"

    def test_selected_option_is_marked(self, tiny_env):
        goal, state, _ = to_item_page(tiny_env)
        state, obs, _, _, _ = tiny_env.step(state, Action("choose", "red"), goal)
        assert "[selected] red [/selected]" in obs.rendered_text
        assert "[button] red [/button]" not in obs.rendered_text

    def test_results_rows_show_rank_and_price(self, tiny_env):
        goal = tiny_env.goal("g-a1")
        state, _ = tiny_env.reset(goal)
        _, obs, _, _, _ = tiny_env.step(state, Action("search", "sneaker"), goal)
        assert "[1] Zephyr Trail Sneaker Kt77 | $10.00" in obs.rendered_text

    def test_detail_tab_shows_chosen_text(self, tiny_env):
        goal, state, _ = to_item_page(tiny_env)
        state, obs, _, _, _ = tiny_env.step(state, Action("choose", DESCRIPTION), goal)
        assert "muddy trails" in obs.rendered_text
        state, _, _, _, _ = tiny_env.step(state, Action("choose", PREVIOUS), goal)
        state, obs, _, _, _ = tiny_env.step(state, Action("choose", OVERVIEW), goal)
        assert obs.rendered_text.split("\n")[1].endswith("(Overview)")

    def test_rendering_injective_on_distinct_states(self, tiny_env):
        goal = tiny_env.goal("g-a1")
        seen = {}
        state, obs = tiny_env.reset(goal)
        walk = [Action("search", "sneaker"), Action("choose", "Zephyr Trail Sneaker Kt77"),
                Action("choose", "red"), Action("choose", "blue"),
                Action("choose", "s"), Action("choose", "m"),
                Action("choose", DESCRIPTION),
                Action("choose", PREVIOUS), Action("choose", OVERVIEW),
                Action("choose", PREVIOUS), Action("choose", BACK_TO_SEARCH),
                Action("search", "jacket"), Action("search", "rain jacket"),
                Action("search", "espresso roast"),
                Action("choose", "Juniper Espresso Roast Pk40"),
                Action("choose", "8 oz"), Action("choose", DESCRIPTION),
                Action("choose", BACK_TO_SEARCH),
                Action("search", "rain jacket"),
                Action("choose", "Cobalt Rain Jacket Vq19"),
                Action("choose", "navy"), Action("choose", BUY)]
        snapshots = [(state, obs)]
        for action in walk:
            if action.kind == "search" and state.page != Page.SEARCH:
                state, _, _, _, _ = tiny_env.step(
                    state, Action("choose", BACK_TO_SEARCH), goal)
            state, obs, _, _, _ = tiny_env.step(state, action, goal)
            snapshots.append((state, obs))
        assert len(snapshots) >= 20
        for state, obs in snapshots:
            key = (state.page, state.last_query, state.result_page_index,
                   state.focused_product_id,
                   tuple(sorted(state.selected_options.items())), state.detail_tab)
            if key in seen:
                assert seen[key] == obs.rendered_text
            else:
                for other, text in seen.items():
                    assert text != obs.rendered_text, (key, other)
                seen[key] = obs.rendered_text


class TestTransitionFuzz:
    def test_short_fuzz_has_no_violations(self, small_env):
        goals = list(small_env.goals.values())
        violations, sessions = run_transition_fuzz(small_env, goals,
                                                   n_steps=5000, seed=7)
        assert violations == []
        assert sessions > 1

    def test_replay_of_recorded_actions_is_deterministic(self, small_env):
        import random as _random
        goals = list(small_env.goals.values())
        rng = _random.Random(3)
        goal = goals[2]
        state, obs = small_env.reset(goal)
        actions, texts = [], [obs.rendered_text]
        for _ in range(40):
            if state.page == Page.DONE:
                break
            legal = available_actions(state, small_env.catalog)
            action = legal[rng.randrange(len(legal))]
            if action.kind == "search":
                action = Action("search", "classic jacket")
            actions.append(action)
            state, obs, reward, done, _ = small_env.step(state, action, goal)
            texts.append(obs.rendered_text)
        state2, obs2 = small_env.reset(goal)
        texts2 = [obs2.rendered_text]
        for action in actions:
            state2, obs2, reward2, done2, _ = small_env.step(state2, action, goal)
            texts2.append(obs2.rendered_text)
        assert texts == texts2
        assert state2 == state

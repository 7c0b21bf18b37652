"""Page-typed episode state machine with deterministic transitions.

Pages: search -> results -> item -> item detail, plus a terminal done page.
Search is only legal on the search page; everywhere else the agent clicks a
button. Reward is paid exactly once, at the Buy click.
"""

from __future__ import annotations

import enum
import re
from dataclasses import dataclass, field, replace
from fractions import Fraction

from .catalog import Catalog
from .goals import Goal
from .reward import RewardBreakdown, compute_reward
from .search import (MAX_PAGES, PAGE_SIZE, ResultPage, SearchIndex, paginate,
                     search)


class Page(str, enum.Enum):
    SEARCH = "search"
    RESULTS = "results"
    ITEM = "item"
    ITEM_DETAIL = "item_detail"
    DONE = "done"


SEARCH_WILDCARD = "*"

BACK_TO_SEARCH = "Back to Search"
PREV_PAGE = "Prev"
NEXT_PAGE = "Next"
DESCRIPTION = "Description"
OVERVIEW = "Overview"
PREVIOUS = "Previous"
BUY = "Buy"

# Navigation labels match case-insensitively; titles and options are exact.
_NAV_CANONICAL = {label.lower(): label for label in
                  (BACK_TO_SEARCH, PREV_PAGE, NEXT_PAGE, DESCRIPTION,
                   OVERVIEW, PREVIOUS, BUY)}

_ACTION_RE = re.compile(r"^(search|click)\[(.*)\]$", re.DOTALL)


@dataclass(frozen=True)
class Action:
    kind: str  # "search" | "choose"
    argument: str

    def text(self) -> str:
        verb = "search" if self.kind == "search" else "click"
        return f"{verb}[{self.argument}]"


def parse_action(text: str) -> Action:
    match = _ACTION_RE.match(text)
    if not match:
        raise IllegalActionError("bad_grammar", f"cannot parse action {text!r}")
    verb, arg = match.groups()
    return Action("search" if verb == "search" else "choose", arg)


class IllegalActionError(Exception):
    """An action the current state does not accept. State is unchanged."""

    def __init__(self, code: str, message: str):
        super().__init__(message)
        self.code = code


@dataclass
class SessionState:
    goal_id: str
    page: Page = Page.SEARCH
    last_query: str | None = None
    results: tuple[str, ...] | None = None
    result_page_index: int = 1
    focused_product_id: str | None = None
    selected_options: dict[str, str] = field(default_factory=dict)
    detail_tab: str | None = None
    history: tuple = ()
    step_count: int = 0


@dataclass
class Observation:
    instruction_text: str
    page: Page
    rendered_text: str
    actions: list[Action]


def _result_page(state: SessionState, catalog: Catalog) -> ResultPage:
    return paginate(list(state.results or ()), state.result_page_index,
                    catalog, state.last_query or "")


def available_actions(state: SessionState, catalog: Catalog) -> list[Action]:
    """Legal actions, navigation first in fixed order, then content buttons."""
    if state.page == Page.DONE:
        raise IllegalActionError("session_done", "episode already ended")
    if state.page == Page.SEARCH:
        return [Action("search", SEARCH_WILDCARD)]
    if state.page == Page.RESULTS:
        page = _result_page(state, catalog)
        actions = [Action("choose", BACK_TO_SEARCH)]
        if page.has_prev:
            actions.append(Action("choose", PREV_PAGE))
        if page.has_next:
            actions.append(Action("choose", NEXT_PAGE))
        actions.extend(Action("choose", title) for _, title, _ in page.entries)
        return actions
    if state.page == Page.ITEM:
        product = catalog.by_id[state.focused_product_id]
        actions = [Action("choose", BACK_TO_SEARCH), Action("choose", DESCRIPTION),
                   Action("choose", OVERVIEW), Action("choose", BUY)]
        for values in product.option_groups.values():
            actions.extend(Action("choose", v) for v in values)
        return actions
    # item detail
    return [Action("choose", BACK_TO_SEARCH), Action("choose", PREVIOUS)]


def _advance(state: SessionState, action: Action, **changes) -> SessionState:
    new_page = changes.get("page", state.page)
    return replace(state, step_count=state.step_count + 1,
                   history=state.history + ((action, new_page),), **changes)


def step(state: SessionState, action: Action, catalog: Catalog,
         index: SearchIndex, goal: Goal,
         reward_engine=compute_reward) -> tuple[SessionState, Fraction, bool,
                                                RewardBreakdown | None]:
    """Apply one action; returns (new state, reward, done, breakdown).

    Raises IllegalActionError (leaving the input state untouched) when the
    action is not among the current page's legal actions. Reward is zero on
    every transition except Buy.
    """
    if state.page == Page.DONE:
        raise IllegalActionError("session_done", "episode already ended")

    if action.kind == "search":
        if state.page != Page.SEARCH:
            raise IllegalActionError("search_not_allowed",
                                     "search is only legal on the search page")
        results = tuple(search(index, action.argument))
        new = _advance(state, action, page=Page.RESULTS, last_query=action.argument,
                       results=results, result_page_index=1,
                       focused_product_id=None, selected_options={},
                       detail_tab=None)
        return new, Fraction(0), False, None

    if action.kind != "choose":
        raise IllegalActionError("bad_action_kind", f"unknown kind {action.kind!r}")
    if state.page == Page.SEARCH:
        raise IllegalActionError("choose_not_allowed",
                                 "only search is legal on the search page")

    label = action.argument
    nav = _NAV_CANONICAL.get(label.lower())

    if nav == BACK_TO_SEARCH:
        new = _advance(state, action, page=Page.SEARCH, last_query=None,
                       results=None, result_page_index=1, focused_product_id=None,
                       selected_options={}, detail_tab=None)
        return new, Fraction(0), False, None

    if state.page == Page.RESULTS:
        page = _result_page(state, catalog)
        if nav == PREV_PAGE or nav == NEXT_PAGE:
            if nav == PREV_PAGE and not page.has_prev:
                raise IllegalActionError("no_such_page", "no previous result page")
            if nav == NEXT_PAGE and not page.has_next:
                raise IllegalActionError("no_such_page", "no next result page")
            delta = -1 if nav == PREV_PAGE else 1
            new = _advance(state, action,
                           result_page_index=state.result_page_index + delta)
            return new, Fraction(0), False, None
        for pid, title, _ in page.entries:
            if label == title:
                new = _advance(state, action, page=Page.ITEM,
                               focused_product_id=pid, selected_options={},
                               detail_tab=None)
                return new, Fraction(0), False, None
        raise IllegalActionError("unknown_button",
                                 f"{label!r} is not on this results page")

    if state.page == Page.ITEM:
        product = catalog.by_id[state.focused_product_id]
        if nav == BUY:
            breakdown = reward_engine(goal, product, dict(state.selected_options),
                                      catalog)
            new = _advance(state, action, page=Page.DONE)
            return new, breakdown.r, True, breakdown
        if nav in (DESCRIPTION, OVERVIEW):
            new = _advance(state, action, page=Page.ITEM_DETAIL, detail_tab=nav)
            return new, Fraction(0), False, None
        for fname, values in product.option_groups.items():
            if label in values:
                selected = dict(state.selected_options)
                selected[fname] = label  # re-choosing a field overwrites it
                new = _advance(state, action, selected_options=selected)
                return new, Fraction(0), False, None
        raise IllegalActionError("unknown_button",
                                 f"{label!r} is not an option of this item")

    # item detail page
    if nav == PREVIOUS:
        new = _advance(state, action, page=Page.ITEM, detail_tab=None)
        return new, Fraction(0), False, None
    raise IllegalActionError("unknown_button",
                             f"{label!r} is not available on the detail page")


def _button(label: str) -> str:
    return f"[button] {label} [/button]"


def render_simple(state: SessionState, catalog: Catalog, goal: Goal) -> str:
    """Deterministic text rendering of the current page."""
    lines = [f"instruction: {goal.instruction_text}"]
    if state.page == Page.SEARCH:
        lines.append("page: search")
        lines.append(_button("search"))
    elif state.page == Page.RESULTS:
        page = _result_page(state, catalog)
        lines.append(f"page: results (page {page.page_index} of {MAX_PAGES}) "
                     f"query: {page.query} total: {page.total_retrieved}")
        lines.append(_button(BACK_TO_SEARCH))
        if page.has_prev:
            lines.append(_button(PREV_PAGE))
        if page.has_next:
            lines.append(_button(NEXT_PAGE))
        base = (page.page_index - 1) * PAGE_SIZE
        for rank, (_, title, price) in enumerate(page.entries, start=base + 1):
            lines.append(f"[{rank}] {title} | ${price:.2f}")
            lines.append(_button(title))
    elif state.page == Page.ITEM:
        product = catalog.by_id[state.focused_product_id]
        lines.append("page: item")
        lines.append(f"{product.title} | ${product.price:.2f}")
        for fname, values in product.option_groups.items():
            lines.append(f"{fname}:")
            for v in values:
                if state.selected_options.get(fname) == v:
                    lines.append(f"  [selected] {v} [/selected]")
                else:
                    lines.append(f"  {_button(v)}")
        lines.append(_button(BACK_TO_SEARCH))
        lines.append(_button(DESCRIPTION))
        lines.append(_button(OVERVIEW))
        lines.append(_button(BUY))
    elif state.page == Page.ITEM_DETAIL:
        product = catalog.by_id[state.focused_product_id]
        lines.append(f"page: item detail ({state.detail_tab})")
        text = (product.description if state.detail_tab == DESCRIPTION
                else product.overview)
        lines.append(text)
        lines.append(_button(BACK_TO_SEARCH))
        lines.append(_button(PREVIOUS))
    else:
        lines.append("page: done")
        lines.append("episode complete")
    return "\n".join(lines)


def observe(state: SessionState, catalog: Catalog, goal: Goal) -> Observation:
    actions = [] if state.page == Page.DONE else available_actions(state, catalog)
    return Observation(
        instruction_text=goal.instruction_text,
        page=state.page,
        rendered_text=render_simple(state, catalog, goal),
        actions=actions,
    )


def reset(catalog: Catalog, index: SearchIndex, goal: Goal) -> tuple[SessionState, Observation]:
    if goal.target_product_id not in catalog.by_id:
        raise KeyError(f"goal targets unknown product {goal.target_product_id!r}")
    state = SessionState(goal_id=goal.goal_id)
    return state, observe(state, catalog, goal)


class Env:
    """Bundles catalog, index and goals; thin reset/step wrapper for agents."""

    def __init__(self, catalog: Catalog, index: SearchIndex, goals: list[Goal],
                 reward_engine=compute_reward):
        self.catalog = catalog
        self.index = index
        self.goals = {g.goal_id: g for g in goals}
        self.reward_engine = reward_engine

    def goal(self, goal_id: str) -> Goal:
        return self.goals[goal_id]

    def reset(self, goal: Goal) -> tuple[SessionState, Observation]:
        return reset(self.catalog, self.index, goal)

    def step(self, state: SessionState, action: Action, goal: Goal):
        new_state, reward, done, breakdown = step(
            state, action, self.catalog, self.index, goal, self.reward_engine)
        return new_state, observe(new_state, self.catalog, goal), reward, done, breakdown

import { ApiError, ShopClient } from "./api.js";
import { renderPageView } from "./render.js";
import { buildPageView, buildReviewRows, fractionToFloat } from "./view.js";
const client = new ShopClient("");
const main = () => document.getElementById("main");
function el(tag, className, text) {
    const node = document.createElement(tag);
    if (className)
        node.className = className;
    if (text !== undefined)
        node.textContent = text;
    return node;
}
function setMessage(text) {
    const box = document.getElementById("message");
    box.textContent = text ?? "";
    box.style.display = text ? "block" : "none";
}
function errorView(error, retry) {
    const panel = el("div", "error-panel");
    const message = error instanceof ApiError
        ? `${error.code}: ${error.message}` : String(error);
    panel.append(el("p", "error", message));
    const button = el("button", "control", "retry");
    button.addEventListener("click", retry);
    panel.append(button);
    return panel;
}
// -- screens -------------------------------------------------------------
async function showHome() {
    setMessage(null);
    try {
        const { goals } = await client.goals();
        const panel = el("div", "home");
        panel.append(el("h2", undefined, "Pick an instruction"));
        const random = el("button", "control", "random instruction");
        random.addEventListener("click", () => startEpisode(undefined));
        panel.append(random);
        const list = el("ul", "goal-list");
        for (const goal of goals) {
            const item = el("li");
            const pick = el("button", "goal", goal.instruction);
            pick.addEventListener("click", () => startEpisode(goal.goal_id));
            item.append(pick);
            list.append(item);
        }
        panel.append(list);
        const review = el("a", undefined, "review finished episodes");
        review.href = "#/review";
        panel.append(review);
        main().replaceChildren(panel);
    }
    catch (error) {
        main().replaceChildren(errorView(error, showHome));
    }
}
async function startEpisode(goalId) {
    try {
        const obs = await client.createSession(goalId);
        location.hash = `#/episode/${obs.session_id}`;
    }
    catch (error) {
        main().replaceChildren(errorView(error, () => startEpisode(goalId)));
    }
}
function renderObservation(obs) {
    const view = buildPageView(obs);
    main().replaceChildren(renderPageView(view, {
        submit: (action) => submitAction(obs.session_id, action),
        newEpisode: () => { location.hash = "#/"; },
    }));
}
async function showEpisode(sessionId) {
    setMessage(null);
    try {
        renderObservation(await client.observation(sessionId));
    }
    catch (error) {
        main().replaceChildren(errorView(error, () => showEpisode(sessionId)));
    }
}
async function submitAction(sessionId, action) {
    try {
        setMessage(null);
        renderObservation(await client.step(sessionId, action));
    }
    catch (error) {
        if (error instanceof ApiError && error.status > 0) {
            // rejected action: state is unchanged, surface the reason inline
            setMessage(`${error.code}: ${error.message}`);
        }
        else {
            main().replaceChildren(errorView(error, () => showEpisode(sessionId)));
        }
    }
}
async function showReview() {
    setMessage(null);
    try {
        const { records } = await client.logs();
        const rows = buildReviewRows(records);
        const panel = el("div", "review");
        panel.append(el("h2", undefined, `Finished episodes (${rows.length})`));
        const table = el("table", "review-table");
        const head = el("tr");
        for (const name of ["session", "actor", "score", "steps", "searches", ""]) {
            head.append(el("th", undefined, name));
        }
        table.append(head);
        for (const row of rows) {
            const tr = el("tr");
            tr.append(el("td", undefined, row.sessionId.slice(0, 8)));
            tr.append(el("td", undefined, row.actor));
            tr.append(el("td", undefined, row.score === null ? "—" : (row.scoreFloat * 100).toFixed(1)));
            tr.append(el("td", undefined, String(row.length)));
            tr.append(el("td", undefined, String(row.searches)));
            const link = el("a", undefined, "replay");
            link.href = `#/replay/${row.sessionId}`;
            const td = el("td");
            td.append(link);
            tr.append(td);
            table.append(tr);
        }
        panel.append(table);
        const back = el("a", undefined, "back");
        back.href = "#/";
        panel.append(back);
        main().replaceChildren(panel);
    }
    catch (error) {
        main().replaceChildren(errorView(error, showReview));
    }
}
async function showReplay(sessionId) {
    setMessage(null);
    try {
        const payload = await client.replay(sessionId);
        const panel = el("div", "replay");
        const reward = payload.record.breakdown?.r ?? "0";
        panel.append(el("h2", undefined, `Replay ${sessionId.slice(0, 8)} — reward ${reward} `
            + `(${(fractionToFloat(reward) * 100).toFixed(1)} / 100)`));
        panel.append(el("p", undefined, payload.replay_ok ? "replay verified against the engine"
            : `replay drift: ${payload.mismatches.join("; ")}`));
        for (const [i, step] of payload.steps.entries()) {
            const block = el("div", "replay-step");
            block.append(el("h3", undefined, `${i + 1}. ${step.action}`));
            block.append(el("pre", undefined, step.rendered_text));
            panel.append(block);
        }
        const back = el("a", undefined, "back to review");
        back.href = "#/review";
        panel.append(back);
        main().replaceChildren(panel);
    }
    catch (error) {
        main().replaceChildren(errorView(error, () => showReplay(sessionId)));
    }
}
function route() {
    const hash = location.hash || "#/";
    const episode = /^#\/episode\/([0-9a-f]+)$/.exec(hash);
    const replay = /^#\/replay\/([0-9a-f-]+)$/.exec(hash);
    if (episode) {
        void showEpisode(episode[1]);
    }
    else if (replay) {
        void showReplay(replay[1]);
    }
    else if (hash === "#/review") {
        void showReview();
    }
    else {
        void showHome();
    }
}
window.addEventListener("hashchange", route);
window.addEventListener("DOMContentLoaded", route);

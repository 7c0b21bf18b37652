const CONTROL_LABELS = new Set(["back to search", "prev", "next", "previous", "buy"]);
const TAB_LABELS = new Set(["description", "overview"]);
const RESULT_ROW = /^\[(\d+)\] (.*) \| \$(\d+\.\d\d)$/;
const ITEM_HEAD = /^(.*) \| \$(\d+\.\d\d)$/;
const OPTION_ROW = /^ {2}\[(button|selected)\] (.*) \[\/(?:button|selected)\]$/;
function parseRendered(obs) {
    const meta = { prices: new Map(), options: new Map() };
    const lines = obs.rendered_text.split("\n");
    let group = "";
    for (let i = 2; i < lines.length; i++) {
        const line = lines[i];
        const row = RESULT_ROW.exec(line);
        if (row && !meta.prices.has(row[2])) {
            meta.prices.set(row[2], { rank: Number(row[1]), price: row[3] });
            continue;
        }
        if (obs.page === "item") {
            const head = ITEM_HEAD.exec(line);
            if (i === 2 && head) {
                meta.headline = line;
                continue;
            }
            if (line.endsWith(":")) {
                group = line.slice(0, -1);
                continue;
            }
            const opt = OPTION_ROW.exec(line);
            if (opt && !meta.options.has(opt[2])) {
                meta.options.set(opt[2], { group, selected: opt[1] === "selected" });
            }
        }
        if (obs.page === "item_detail" && i === 2) {
            meta.detailText = line;
        }
    }
    return meta;
}
/**
 * Build the page view straight off the observation. Clickable widgets are
 * derived one-for-one from the server's action list, so the clickable set
 * can never drift from what the environment accepts.
 */
export function buildPageView(obs) {
    const meta = parseRendered(obs);
    const widgets = obs.actions.map((text) => {
        if (text.startsWith("search[")) {
            return { kind: "search", label: "search", action: text };
        }
        const label = text.slice("click[".length, -1);
        const low = label.toLowerCase();
        if (TAB_LABELS.has(low)) {
            return { kind: "tab", label, action: text };
        }
        if (CONTROL_LABELS.has(low)) {
            return { kind: "control", label, action: text };
        }
        if (obs.page === "results") {
            const info = meta.prices.get(label);
            return { kind: "result", label, action: text,
                price: info?.price, rank: info?.rank };
        }
        const opt = meta.options.get(label);
        return { kind: "option", label, action: text,
            group: opt?.group ?? "", selected: opt?.selected ?? false };
    });
    const view = {
        sessionId: obs.session_id,
        goalId: obs.goal_id,
        page: obs.page,
        banner: obs.instruction,
        widgets,
        headline: meta.headline,
        detailText: meta.detailText,
        done: obs.done,
    };
    if (obs.done && obs.reward !== undefined && obs.breakdown !== undefined) {
        view.reward = { value: obs.reward, float: obs.reward_float ?? 0,
            breakdown: obs.breakdown };
    }
    return view;
}
/** The action texts a user could trigger from this view, in widget order. */
export function clickableActions(view) {
    return view.widgets.flatMap((w) => (w.action === null ? [] : [w.action]));
}
export function buildReviewRows(records, actor) {
    return records
        .filter((r) => actor === undefined || r.actor === actor)
        .map((r) => {
        const score = r.breakdown === null ? null : r.breakdown.r;
        return {
            sessionId: r.session_id,
            goalId: r.goal_id,
            actor: r.actor,
            score,
            scoreFloat: score === null ? 0 : fractionToFloat(score),
            length: r.steps.length,
            searches: r.steps.filter((s) => s.action.startsWith("search[")).length,
            truncated: r.truncated,
        };
    });
}
export function fractionToFloat(fraction) {
    const [num, den] = fraction.split("/");
    return den === undefined ? Number(num) : Number(num) / Number(den);
}

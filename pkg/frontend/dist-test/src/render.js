function el(tag, className, text) {
    const node = document.createElement(tag);
    if (className)
        node.className = className;
    if (text !== undefined)
        node.textContent = text;
    return node;
}
function actionButton(widget, handlers, className) {
    const button = el("button", className, widget.label);
    button.dataset.action = widget.action ?? "";
    button.addEventListener("click", () => {
        if (widget.action !== null)
            handlers.submit(widget.action);
    });
    return button;
}
function searchForm(widget, handlers) {
    const form = el("form", "search-form");
    const input = el("input");
    input.type = "text";
    input.placeholder = "what are you shopping for?";
    input.autofocus = true;
    const button = el("button", "control", "search");
    button.type = "submit";
    button.dataset.action = widget.action ?? "";
    form.append(input, button);
    form.addEventListener("submit", (event) => {
        event.preventDefault();
        handlers.submit(`search[${input.value}]`);
    });
    return form;
}
/** One clickable element per clickable widget, nothing else clickable. */
export function renderPageView(view, handlers) {
    const root = el("section", `page page-${view.page}`);
    root.append(el("p", "banner", view.banner));
    if (view.done) {
        root.append(renderCompletion(view, handlers));
        return root;
    }
    const controls = el("div", "controls");
    const results = el("div", "results");
    const groups = new Map();
    for (const widget of view.widgets) {
        if (widget.kind === "search") {
            controls.append(searchForm(widget, handlers));
        }
        else if (widget.kind === "control" || widget.kind === "tab") {
            controls.append(actionButton(widget, handlers, widget.kind === "tab" ? "tab" : "control"));
        }
        else if (widget.kind === "result") {
            const card = el("article", "result-card");
            card.append(actionButton(widget, handlers, "result-title"));
            card.append(el("span", "price", widget.price === undefined ? "" : `$${widget.price}`));
            if (widget.rank !== undefined) {
                card.append(el("span", "rank", `#${widget.rank}`));
            }
            results.append(card);
        }
        else {
            const name = widget.group ?? "";
            let fieldset = groups.get(name);
            if (fieldset === undefined) {
                fieldset = el("fieldset", "option-group");
                fieldset.append(el("legend", undefined, name));
                groups.set(name, fieldset);
            }
            const button = actionButton(widget, handlers, "option");
            if (widget.selected)
                button.classList.add("selected");
            fieldset.append(button);
        }
    }
    root.append(controls);
    if (view.headline)
        root.append(el("h2", "headline", view.headline));
    for (const fieldset of groups.values())
        root.append(fieldset);
    if (results.childElementCount > 0)
        root.append(results);
    if (view.detailText)
        root.append(el("p", "detail", view.detailText));
    return root;
}
function renderCompletion(view, handlers) {
    const panel = el("div", "completion");
    panel.append(el("h2", undefined, "Purchase complete"));
    if (view.reward) {
        const { breakdown } = view.reward;
        panel.append(el("p", "score", `reward ${view.reward.value} (${(view.reward.float * 100).toFixed(1)} / 100)`));
        const table = el("table", "breakdown");
        const rows = [
            ["attribute", `${breakdown.matched_att} of ${breakdown.n_att}`],
            ["option", breakdown.opt_score === null
                    ? "not required" : `${breakdown.matched_opt} of ${breakdown.n_opt}`],
            ["price", breakdown.price_score ? "under cap" : "over cap"],
            ["type", breakdown.r_type],
        ];
        for (const [name, value] of rows) {
            const tr = el("tr");
            tr.append(el("td", undefined, name), el("td", undefined, value));
            table.append(tr);
        }
        panel.append(table);
    }
    const again = el("button", "control", "new episode");
    again.addEventListener("click", () => handlers.newEpisode());
    panel.append(again);
    return panel;
}

// DOM layer: renders the store snapshot and routes events back into it.
// Rendering is a full redraw of each dynamic section; sessions are a few
// hundred rows at most, so simplicity wins over diffing.

import type { Store } from "./store.js";
import { PAGE_SIZE } from "./store.js";
import { isEditableTarget, shortcutFor } from "./shortcuts.js";
import type { CandidateRef, CandidateView } from "./types.js";
import { refOf, sameRef } from "./types.js";

function el(tag: string, className?: string, text?: string): HTMLElement {
  const node = document.createElement(tag);
  if (className) node.className = className;
  if (text !== undefined) node.textContent = text;
  return node;
}

function fmt(value: number | null): string {
  return value === null ? "—" : String(value);
}

export class App {
  private root: HTMLElement;

  constructor(
    root: HTMLElement,
    readonly store: Store,
  ) {
    this.root = root;
    this.root.innerHTML = `
      <header class="top">
        <h1>ontoforge review</h1>
        <span data-field="session-label" class="session-label"></span>
      </header>
      <div class="banner" data-panel="banner" hidden></div>
      <div class="notice" data-panel="notice" hidden></div>
      <section class="metrics" data-panel="metrics"></section>
      <section class="filters" data-panel="filters"></section>
      <section class="table-wrap">
        <table class="candidates">
          <thead>
            <tr><th>#</th><th>subject</th><th>relation</th><th>object</th>
            <th>flags</th><th>status</th><th>actions</th></tr>
          </thead>
          <tbody data-panel="rows"></tbody>
        </table>
        <div class="pager" data-panel="pager"></div>
      </section>
      <section class="clusters" data-panel="clusters" hidden></section>
      <footer>
        <button type="button" data-action="export">export accepted facts</button>
        <span class="hint">shortcuts: a accept · r reject · e edit · j/k move · [/] page</span>
      </footer>
    `;
    this.wireEvents();
    store.subscribe(() => this.render());
    this.render();
  }

  private panel(name: string): HTMLElement {
    return this.root.querySelector(`[data-panel="${name}"]`) as HTMLElement;
  }

  private keyHandler = (event: KeyboardEvent): void => {
    if (isEditableTarget(event.target)) return;
    const shortcut = shortcutFor(event.key);
    if (!shortcut) return;
    event.preventDefault();
    const selected = this.store.selectedCandidate();
    switch (shortcut.kind) {
      case "move":
        this.store.moveSelection(shortcut.delta);
        break;
      case "page":
        this.store.setPage(shortcut.delta);
        break;
      case "decide":
        if (selected) void this.store.decide(refOf(selected), shortcut.action);
        break;
      case "edit":
        if (selected && selected.status === "candidate") this.store.beginEdit(refOf(selected));
        break;
      case "cancel":
        this.store.cancelEdit();
        break;
    }
  };

  destroy(): void {
    document.removeEventListener("keydown", this.keyHandler);
    this.store.stopPolling();
  }

  private wireEvents(): void {
    document.addEventListener("keydown", this.keyHandler);

    this.root.addEventListener("click", (event) => {
      const target = event.target as HTMLElement;
      const button = target.closest("[data-action]") as HTMLElement | null;
      if (button) {
        this.handleAction(button);
        return;
      }
      const row = target.closest("tr[data-index]") as HTMLElement | null;
      if (row) {
        const index = Number(row.dataset.index);
        this.store.moveSelection(index - this.store.state.selected);
      }
    });
  }

  private rowRef(node: HTMLElement): CandidateRef {
    return [node.dataset.t as string, Number(node.dataset.l)];
  }

  private handleAction(button: HTMLElement): void {
    const action = button.dataset.action;
    if (action === "retry") {
      void this.store.refresh();
    } else if (action === "accept" || action === "reject") {
      void this.store.decide(this.rowRef(button), action);
    } else if (action === "edit") {
      this.store.beginEdit(this.rowRef(button));
    } else if (action === "keep-first") {
      void this.store.keepFirst(Number(button.dataset.cluster));
    } else if (action === "export") {
      void this.store.api
        .exportSession()
        .then((result) => {
          this.showNotice(`exported ${result.triples} facts`);
        })
        .catch((error: Error) => {
          this.showNotice(`export refused: ${error.message}`);
        });
    } else if (action === "save-edit") {
      const row = button.closest("tr[data-index]") as HTMLElement;
      const subject = (row.querySelector('[data-edit="subject"]') as HTMLInputElement).value;
      const relation = (
        row.querySelector('[data-edit="relation"]') as HTMLInputElement | HTMLSelectElement
      ).value;
      const object = (row.querySelector('[data-edit="object"]') as HTMLInputElement).value;
      void this.store.decide(this.rowRef(button), "edit", [subject, relation, object]);
    } else if (action === "cancel-edit") {
      this.store.cancelEdit();
    }
  }

  private showNotice(text: string): void {
    const notice = this.panel("notice");
    notice.textContent = text;
    notice.hidden = false;
  }

  render(): void {
    const state = this.store.state;
    const label = this.root.querySelector('[data-field="session-label"]') as HTMLElement;
    label.textContent = state.session
      ? `${state.session.session_id} · ${state.session.mode}`
      : "connecting…";

    const banner = this.panel("banner");
    if (state.banner) {
      banner.hidden = false;
      banner.innerHTML = "";
      banner.append(el("span", "", state.banner), " ");
      const retry = el("button", "", "retry") as HTMLButtonElement;
      retry.type = "button";
      retry.dataset.action = "retry";
      banner.append(retry);
    } else {
      banner.hidden = true;
    }

    const notice = this.panel("notice");
    if (state.notice) {
      notice.hidden = false;
      notice.textContent = state.notice;
    } else if (!notice.textContent?.startsWith("export")) {
      notice.hidden = true;
      notice.textContent = "";
    }

    this.renderMetrics();
    this.renderFilters();
    this.renderRows();
    this.renderPager();
    this.renderClusters();
  }

  private renderMetrics(): void {
    const metrics = this.store.state.metrics;
    const panel = this.panel("metrics");
    panel.innerHTML = "";
    if (!metrics) return;
    const fields: Array<[string, number | null]> = [
      ["generated", metrics.generated_count],
      ["correct", metrics.correct_count],
      ["remaining", metrics.remaining_count],
      ["precision", metrics.precision],
    ];
    if (metrics.mode === "extraction") {
      fields.push(["gold", metrics.gold_count], ["extracted", metrics.extracted_count]);
      fields.push(["recall", metrics.recall]);
    }
    for (const [name, value] of fields) {
      const item = el("span", "metric");
      item.append(el("label", "", name), " ");
      const valueNode = el("strong", "", fmt(value));
      valueNode.dataset.field = name;
      item.append(valueNode);
      panel.append(item);
    }
  }

  private renderFilters(): void {
    const panel = this.panel("filters");
    const state = this.store.state;
    panel.innerHTML = "";

    const statusSelect = el("select") as HTMLSelectElement;
    statusSelect.dataset.filter = "status";
    for (const value of ["all", "candidate", "accepted", "rejected", "edited"]) {
      const option = el("option", "", value) as HTMLOptionElement;
      option.value = value;
      statusSelect.append(option);
    }
    statusSelect.value = state.statusFilter;
    statusSelect.addEventListener("change", () => {
      this.store.setStatusFilter(statusSelect.value as never);
    });

    const violationSelect = el("select") as HTMLSelectElement;
    violationSelect.dataset.filter = "violations";
    for (const value of ["all", "unknown_relation", "domain_mismatch", "range_mismatch"]) {
      const option = el("option", "", value) as HTMLOptionElement;
      option.value = value;
      violationSelect.append(option);
    }
    violationSelect.value = state.violationFilter;
    violationSelect.addEventListener("change", () => {
      this.store.setViolationFilter(violationSelect.value as never);
    });

    panel.append(el("label", "", "status "), statusSelect, el("label", "", " violations "), violationSelect);
  }

  private badgeSpans(candidate: CandidateView): HTMLElement[] {
    const badges: HTMLElement[] = [];
    for (const violation of candidate.violations) {
      const badge = el("span", `badge violation ${violation.kind}`, violation.kind);
      badge.title = violation.expected
        ? `expected ${violation.expected}, found ${violation.found}`
        : violation.relation;
      badges.push(badge);
    }
    if (candidate.cluster_id !== null) {
      badges.push(el("span", "badge duplicate", `dup c${candidate.cluster_id}`));
    }
    if (candidate.negation_warning) {
      const badge = el("span", "badge negation", "needs review");
      badge.title = candidate.negation_warning.sentence;
      badges.push(badge);
    }
    return badges;
  }

  private renderRows(): void {
    const tbody = this.panel("rows");
    tbody.innerHTML = "";
    const state = this.store.state;
    const visible = this.store.visible();
    visible.forEach((candidate, index) => {
      const row = el("tr") as HTMLTableRowElement;
      row.dataset.index = String(index);
      row.dataset.t = candidate.transcript_id;
      row.dataset.l = String(candidate.line_number);
      row.className = `status-${candidate.status}${index === state.selected ? " selected" : ""}`;

      if (state.editing && sameRef(state.editing, refOf(candidate))) {
        this.renderEditRow(row, candidate);
      } else {
        row.append(el("td", "", String(candidate.line_number)));
        const display = candidate.edited_value ?? [
          candidate.subject,
          candidate.relation,
          candidate.object,
        ];
        const subjectCell = el("td", "", display[0]);
        if (candidate.provenance.model_line) subjectCell.title = candidate.provenance.model_line;
        row.append(subjectCell);
        row.append(el("td", "", display[1]));
        row.append(el("td", "", display[2]));
        const flags = el("td", "flags");
        flags.append(...this.badgeSpans(candidate));
        row.append(flags);
        row.append(el("td", "status", candidate.status));
        const actions = el("td", "actions");
        for (const [action, glyph] of [["accept", "✓"], ["reject", "✗"], ["edit", "✎"]] as const) {
          const button = el("button", action, glyph) as HTMLButtonElement;
          button.type = "button";
          button.dataset.action = action;
          button.dataset.t = candidate.transcript_id;
          button.dataset.l = String(candidate.line_number);
          button.disabled = candidate.status !== "candidate";
          actions.append(button);
        }
        row.append(actions);
      }
      tbody.append(row);
    });
  }

  private renderEditRow(row: HTMLTableRowElement, candidate: CandidateView): void {
    row.append(el("td", "", String(candidate.line_number)));
    const subjectCell = el("td");
    const subjectInput = el("input") as HTMLInputElement;
    subjectInput.value = candidate.subject;
    subjectInput.dataset.edit = "subject";
    subjectCell.append(subjectInput);
    row.append(subjectCell);

    const relationCell = el("td");
    const relations = this.store.state.session?.relations ?? [];
    if (relations.length > 0) {
      // Picklist prevents the curator from introducing undeclared relations.
      const select = el("select") as HTMLSelectElement;
      select.dataset.edit = "relation";
      for (const name of relations) {
        const option = el("option", "", name) as HTMLOptionElement;
        option.value = name;
        select.append(option);
      }
      if (relations.includes(candidate.relation)) select.value = candidate.relation;
      relationCell.append(select);
    } else {
      const relationInput = el("input") as HTMLInputElement;
      relationInput.value = candidate.relation;
      relationInput.dataset.edit = "relation";
      relationCell.append(relationInput);
    }
    row.append(relationCell);

    const objectCell = el("td");
    const objectInput = el("input") as HTMLInputElement;
    objectInput.value = candidate.object;
    objectInput.dataset.edit = "object";
    objectCell.append(objectInput);
    row.append(objectCell);

    row.append(el("td"));
    row.append(el("td", "status", "editing"));
    const actions = el("td", "actions");
    for (const [action, label] of [["save-edit", "save"], ["cancel-edit", "cancel"]] as const) {
      const button = el("button", action, label) as HTMLButtonElement;
      button.type = "button";
      button.dataset.action = action;
      button.dataset.t = candidate.transcript_id;
      button.dataset.l = String(candidate.line_number);
      actions.append(button);
    }
    row.append(actions);
  }

  private renderPager(): void {
    const pager = this.panel("pager");
    const total = this.store.filtered().length;
    const page = this.store.state.page;
    pager.textContent =
      total > PAGE_SIZE ? `page ${page + 1}/${this.store.pageCount()} (${total} rows)` : "";
  }

  private renderClusters(): void {
    const panel = this.panel("clusters");
    const clusters = this.store.clusters();
    if (clusters.size === 0) {
      panel.hidden = true;
      panel.innerHTML = "";
      return;
    }
    panel.hidden = false;
    panel.innerHTML = "<h2>duplicate clusters</h2>";
    for (const clusterId of [...clusters.keys()].sort((a, b) => a - b)) {
      const members = clusters.get(clusterId) as CandidateView[];
      const card = el("div", "cluster");
      card.dataset.cluster = String(clusterId);
      const list = el("ul");
      for (const member of members) {
        list.append(
          el(
            "li",
            `status-${member.status}`,
            `${member.line_number}. (${member.subject}, ${member.relation}, ${member.object}) — ${member.status}`,
          ),
        );
      }
      const keep = el("button", "keep-first", "keep first, reject rest") as HTMLButtonElement;
      keep.type = "button";
      keep.dataset.action = "keep-first";
      keep.dataset.cluster = String(clusterId);
      card.append(el("h3", "", `cluster ${clusterId}`), list, keep);
      panel.append(card);
    }
  }
}

export function mountApp(root: HTMLElement, store: Store): App {
  return new App(root, store);
}

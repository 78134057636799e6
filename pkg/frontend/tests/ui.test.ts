import { afterEach, describe, expect, it } from "vitest";

import { ReviewApi } from "../src/api.js";
import { Store } from "../src/store.js";
import { App, mountApp } from "../src/ui.js";
import { FakeApi, makeCandidate } from "./fakeApi.js";

const apps: App[] = [];

afterEach(() => {
  for (const app of apps.splice(0)) app.destroy();
  document.body.innerHTML = "";
});

async function mount(api: FakeApi): Promise<{ store: Store; root: HTMLElement }> {
  const root = document.createElement("div");
  document.body.append(root);
  const store = new Store(api as unknown as ReviewApi);
  apps.push(mountApp(root, store));
  await store.refresh();
  return { store, root };
}

function key(k: string): void {
  document.dispatchEvent(new KeyboardEvent("keydown", { key: k, bubbles: true }));
}

describe("candidate table", () => {
  it("renders rows with violation, duplicate, and negation badges", async () => {
    const api = new FakeApi([
      makeCandidate({
        line_number: 1,
        violations: [
          {
            transcript_id: "t1",
            line_number: 1,
            kind: "domain_mismatch",
            relation: "r",
            expected: "Symptom",
            found: "Disease",
          },
        ],
      }),
      makeCandidate({ line_number: 2, cluster_id: 0 }),
      makeCandidate({
        line_number: 3,
        cluster_id: 0,
        negation_warning: {
          transcript_id: "t1",
          line_number: 3,
          cue: "not",
          sentence: "it was not associated with mortality",
        },
      }),
    ]);
    const { root } = await mount(api);
    const rows = root.querySelectorAll("tbody tr");
    expect(rows).toHaveLength(3);
    expect(root.querySelector(".badge.violation")?.textContent).toBe("domain_mismatch");
    expect(root.querySelectorAll(".badge.duplicate")).toHaveLength(2);
    expect(root.querySelector(".badge.negation")?.textContent).toBe("needs review");
  });

  it("keyboard a accepts the selected row and restyles it", async () => {
    const api = new FakeApi([
      makeCandidate({ line_number: 1 }),
      makeCandidate({ line_number: 2 }),
    ]);
    const { store, root } = await mount(api);
    key("a");
    await store.waitIdle();
    const first = root.querySelector("tbody tr") as HTMLElement;
    expect(first.className).toContain("status-accepted");
    expect(api.calls).toContain("decision:1:accept");
  });

  it("keyboard j moves selection, r rejects the new row", async () => {
    const api = new FakeApi([
      makeCandidate({ line_number: 1 }),
      makeCandidate({ line_number: 2 }),
    ]);
    const { store, root } = await mount(api);
    key("j");
    key("r");
    await store.waitIdle();
    expect(api.calls).toContain("decision:2:reject");
    const rows = root.querySelectorAll("tbody tr");
    expect((rows[1] as HTMLElement).className).toContain("status-rejected");
  });

  it("action buttons decide their own row regardless of selection", async () => {
    const api = new FakeApi([
      makeCandidate({ line_number: 1 }),
      makeCandidate({ line_number: 2 }),
    ]);
    const { store, root } = await mount(api);
    const rejectSecond = root.querySelector(
      'tbody tr:nth-child(2) button[data-action="reject"]',
    ) as HTMLElement;
    rejectSecond.click();
    await store.waitIdle();
    expect(api.calls).toContain("decision:2:reject");
  });

  it("status filter hides non-matching rows", async () => {
    const api = new FakeApi([
      makeCandidate({ line_number: 1 }),
      makeCandidate({ line_number: 2 }),
    ]);
    const { store, root } = await mount(api);
    key("a");
    await store.waitIdle();
    store.setStatusFilter("candidate");
    const rows = root.querySelectorAll("tbody tr");
    expect(rows).toHaveLength(1);
    expect((rows[0] as HTMLElement).dataset.l).toBe("2");
  });
});

describe("edit flow", () => {
  it("offers the ontology relations as a picklist and submits the edit", async () => {
    const api = new FakeApi(
      [makeCandidate({ line_number: 1, relation: "hasSymptom" })],
      ["hasSymptom", "treatedBy"],
    );
    const { store, root } = await mount(api);
    key("e");
    const select = root.querySelector('select[data-edit="relation"]') as HTMLSelectElement;
    expect(select).not.toBeNull();
    expect([...select.options].map((o) => o.value)).toEqual(["hasSymptom", "treatedBy"]);
    select.value = "treatedBy";
    const objectInput = root.querySelector('input[data-edit="object"]') as HTMLInputElement;
    objectInput.value = "rest";
    (root.querySelector('button[data-action="save-edit"]') as HTMLElement).click();
    await store.waitIdle();
    expect(api.candidates[0]?.status).toBe("edited");
    expect(api.candidates[0]?.edited_value).toEqual(["subject", "treatedBy", "rest"]);
  });

  it("escape cancels editing", async () => {
    const api = new FakeApi([makeCandidate({ line_number: 1 })]);
    const { store, root } = await mount(api);
    key("e");
    expect(root.querySelector("[data-edit]")).not.toBeNull();
    key("Escape");
    expect(root.querySelector("[data-edit]")).toBeNull();
    expect(store.state.editing).toBeNull();
  });
});

describe("metrics panel", () => {
  it("displays the service metrics verbatim", async () => {
    const api = new FakeApi([
      makeCandidate({ line_number: 1 }),
      makeCandidate({ line_number: 2 }),
    ]);
    const { store, root } = await mount(api);
    key("a");
    await store.waitIdle();
    const metrics = await api.getMetrics();
    const shown = root.querySelector('[data-field="precision"]') as HTMLElement;
    expect(shown.textContent).toBe(String(metrics.precision));
  });
});

describe("cluster panel", () => {
  it("is hidden when the report has no clusters", async () => {
    const api = new FakeApi([makeCandidate({ line_number: 1 })]);
    const { root } = await mount(api);
    expect((root.querySelector('[data-panel="clusters"]') as HTMLElement).hidden).toBe(true);
  });

  it("keep-first rejects later members and conflicts show inline", async () => {
    const api = new FakeApi([
      makeCandidate({ line_number: 1, cluster_id: 0, object: "Reduction in tourism spending" }),
      makeCandidate({ line_number: 2, cluster_id: 0, object: "Decrease in tourism spending" }),
    ]);
    const { store, root } = await mount(api);
    const button = root.querySelector('button[data-action="keep-first"]') as HTMLElement;
    button.click();
    await store.waitIdle();
    expect(api.candidates[1]?.status).toBe("rejected");
    expect(api.candidates[0]?.status).toBe("candidate");

    (root.querySelector('button[data-action="keep-first"]') as HTMLElement).click();
    await store.waitIdle();
    const notice = root.querySelector('[data-panel="notice"]') as HTMLElement;
    expect(notice.hidden).toBe(false);
    expect(notice.textContent).toContain("already resolved");
  });
});

describe("connectivity banner", () => {
  it("shows a retry banner when the service is unreachable and recovers", async () => {
    const api = new FakeApi([makeCandidate({ line_number: 1 })]);
    api.offline = true;
    const { store, root } = await mount(api);
    const banner = root.querySelector('[data-panel="banner"]') as HTMLElement;
    expect(banner.hidden).toBe(false);
    expect(banner.textContent).toContain("unreachable");

    api.offline = false;
    (banner.querySelector('button[data-action="retry"]') as HTMLElement).click();
    await store.waitIdle();
    expect((root.querySelector('[data-panel="banner"]') as HTMLElement).hidden).toBe(true);
    expect(store.state.candidates).toHaveLength(1);
  });
});

// Secondary acceptance: one click resolves the tourism redundancy cluster,
// leaving exactly one member still eligible for acceptance.

import { afterAll, beforeAll, expect, it } from "vitest";

import { ReviewApi } from "../src/api.js";
import { Store } from "../src/store.js";
import { App, mountApp } from "../src/ui.js";
import type { CandidateView } from "../src/types.js";
import { startService, type ServiceInfo } from "./helpers/service.js";

let service: ServiceInfo;
let app: App;
let store: Store;
let root: HTMLElement;

beforeAll(async () => {
  service = await startService("tourism");
  // Make the service our origin; the app itself is served from it.
  (window as unknown as { happyDOM: { setURL: (url: string) => void } }).happyDOM.setURL(
    service.url,
  );
  root = document.createElement("div");
  document.body.append(root);
  store = new Store(new ReviewApi(service.url));
  app = mountApp(root, store);
  await store.refresh();
});

afterAll(async () => {
  app.destroy();
  await service.stop();
});

it("keep-first resolves the redundancy cluster with one click", async () => {
  const panel = root.querySelector('[data-panel="clusters"]') as HTMLElement;
  expect(panel.hidden).toBe(false);

  // The cluster containing the reported redundancy pair.
  const cards = [...root.querySelectorAll(".cluster")] as HTMLElement[];
  const card = cards.find((c) => c.textContent?.includes("Reduction in tourism spending"));
  expect(card).toBeDefined();
  expect(card?.textContent).toContain("Decrease in tourism spending");
  const clusterId = Number(card?.dataset.cluster);

  (card?.querySelector('button[data-action="keep-first"]') as HTMLElement).click();
  await store.waitIdle();

  const response = await fetch(`${service.url}/api/candidates`);
  const candidates = (await response.json()) as CandidateView[];
  const members = candidates.filter((c) => c.cluster_id === clusterId);
  expect(members).toHaveLength(2);
  const eligible = members.filter((c) => c.status === "candidate");
  const rejected = members.filter((c) => c.status === "rejected");
  expect(eligible).toHaveLength(1);
  expect(rejected).toHaveLength(1);
  expect(eligible[0]?.object).toBe("Reduction in tourism spending");
  expect(eligible[0]?.line_number).toBeLessThan(rejected[0]?.line_number ?? 0);

  // The panel reflects the resolution and a second click reports a conflict.
  const again = [...root.querySelectorAll(".cluster")] as HTMLElement[];
  const updated = again.find((c) => Number(c.dataset.cluster) === clusterId);
  expect(updated?.querySelectorAll("li.status-rejected")).toHaveLength(1);

  (updated?.querySelector('button[data-action="keep-first"]') as HTMLElement).click();
  await store.waitIdle();
  const notice = root.querySelector('[data-panel="notice"]') as HTMLElement;
  expect(notice.hidden).toBe(false);
  expect(notice.textContent).toContain("already resolved");
});

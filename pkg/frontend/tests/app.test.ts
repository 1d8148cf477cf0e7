/**
 * Scripted browser run against a live backend (spawned by global-setup):
 * create a session, flag the bad step on the timeline, ask "what if we
 * begged instead of lying", check both verdicts and the explanation
 * sentence, commit, and watch the timeline switch to the adopted plan.
 */

import { readFileSync } from "node:fs";
import { join } from "node:path";
import { beforeEach, describe, expect, it } from "vitest";

import { Client } from "../src/api.js";
import { classifySteps, dedupeHistory, ModeratorApp } from "../src/app.js";
import { suggestionText } from "../src/api.js";

const BASE_URL = process.env.PLANETHICS_TEST_URL ?? "http://127.0.0.1:8791";
const FIXTURES = join(__dirname, "..", "..", "src", "planethics", "fixtures");
const DOMAIN = readFileSync(join(FIXTURES, "robot_frank.dom"), "utf-8");
const PROBLEM = readFileSync(join(FIXTURES, "robot_frank.prob"), "utf-8");

const REFERENCE_SENTENCE =
  "The original plan is impermissible because lying to Frank is bad, " +
  "whereas the HPlan is permissible because begging Frank is not bad";

function mount(): ModeratorApp {
  document.body.innerHTML = '<div id="app"></div>';
  const root = document.getElementById("app")!;
  return new ModeratorApp(root, new Client(BASE_URL));
}

async function waitFor<T>(probe: () => T | null | undefined, what: string): Promise<T> {
  const deadline = Date.now() + 15_000;
  while (Date.now() < deadline) {
    const value = probe();
    if (value !== null && value !== undefined && value !== false) return value as T;
    await new Promise((resolve) => setTimeout(resolve, 50));
  }
  throw new Error(`timed out waiting for ${what}`);
}

function byTestId(id: string): HTMLElement | null {
  return document.querySelector<HTMLElement>(`[data-testid="${id}"]`);
}

function setSelect(id: string, value: string): void {
  const el = document.querySelector<HTMLSelectElement>(`#${id}`);
  expect(el, `#${id} present`).toBeTruthy();
  el!.value = value;
  el!.dispatchEvent(new Event("change", { bubbles: true }));
}

function click(testid: string): void {
  const el = byTestId(testid);
  expect(el, `[data-testid=${testid}] present`).toBeTruthy();
  el!.dispatchEvent(new MouseEvent("click", { bubbles: true }));
}

describe("pure view helpers", () => {
  it("classifies diff steps as multisets", () => {
    expect(classifySteps(["a", "a", "b"], ["a"], "removed")).toEqual([
      { name: "a", cls: "removed" },
      { name: "a", cls: "common" },
      { name: "b", cls: "common" },
    ]);
  });

  it("builds suggestion text per the grammar", () => {
    expect(suggestionText("forbid", "x", "")).toBe("forbid x");
    expect(suggestionText("replace", "x", "y")).toBe("replace x with y");
    expect(suggestionText("order", "x", "y")).toBe("order x before y");
  });

  it("dedupes history by suggestion id, keeping the latest", () => {
    const entry = (index: number, suggestion: string) => ({
      index,
      suggestion,
      principle: "deontology",
      status: "ok" as const,
      committed: false,
      error: null,
      explanation: null,
    });
    const deduped = dedupeHistory([
      entry(0, "forbid a"),
      entry(1, "force b"),
      entry(2, "forbid a"),
    ]);
    expect(deduped.map((e) => e.index)).toEqual([1, 2]);
  });
});

describe("moderator console against the live service", () => {
  beforeEach(() => {
    document.body.innerHTML = "";
  });

  it("runs the full moderation loop", async () => {
    const app = mount();

    // create a session through the UI form
    (document.getElementById("domain-input") as HTMLTextAreaElement).value = DOMAIN;
    (document.getElementById("problem-input") as HTMLTextAreaElement).value = PROBLEM;
    document
      .querySelector<HTMLElement>('[data-action="create"]')!
      .dispatchEvent(new MouseEvent("click", { bubbles: true }));

    await waitFor(() => byTestId("timeline"), "session timeline");

    // timeline: two steps, the lying one visibly flagged bad
    const steps = document.querySelectorAll('[data-testid="timeline-step"]');
    expect([...steps].map((s) => s.querySelector(".name")!.textContent)).toEqual([
      "lie_frank",
      "exercise",
    ]);
    expect(steps[0]!.className).toContain("intrinsic-bad");
    expect(steps[0]!.querySelector(".badge")!.textContent).toBe("bad");

    // structured suggestion builder: replace lie_frank with beg_frank
    setSelect("kind-select", "replace");
    setSelect("action-a-select", "lie_frank");
    setSelect("action-b-select", "beg_frank");
    setSelect("principle-select", "deontology");
    click("suggest");

    await waitFor(() => byTestId("explanation"), "explanation panel");

    // both verdicts and the sentence, straight from the API payload
    expect(byTestId("original-verdict")!.textContent!.trim()).toBe("impermissible");
    expect(byTestId("hplan-verdict")!.textContent!.trim()).toBe("permissible");
    expect(byTestId("nl")!.textContent).toBe(REFERENCE_SENTENCE);

    // diff highlighting: lie removed on the left, beg added on the right
    const removed = document.querySelectorAll('[data-testid="original"] li.diff-removed');
    const added = document.querySelectorAll('[data-testid="hplan"] li.diff-added');
    expect([...removed].map((li) => li.textContent)).toEqual(["lie_frank"]);
    expect([...added].map((li) => li.textContent)).toEqual(["beg_frank"]);

    // commit: the timeline switches to the hypothetical plan
    click("commit");
    await waitFor(() => {
      const names = [...document.querySelectorAll('[data-testid="timeline-step"] .name')];
      return names.length === 2 && names[0]!.textContent === "beg_frank" ? true : null;
    }, "timeline to switch to the committed plan");

    const names = [...document.querySelectorAll('[data-testid="timeline-step"] .name')];
    expect(names.map((n) => n.textContent)).toEqual(["beg_frank", "exercise"]);
    expect(byTestId("provenance")!.textContent).toContain("replace lie_frank with beg_frank");

    // the committed entry's button is gone; the history row shows committed
    const history = byTestId("history")!;
    expect(history.textContent).toContain("replace lie_frank with beg_frank");
    expect(history.querySelector(".tag.committed")).toBeTruthy();

    expect(app.state.session!.plan.steps).toEqual(["beg_frank", "exercise"]);
  });

  it("renders an unsolvable card on 422 and keeps the form", async () => {
    const app = mount();
    const client = new Client(BASE_URL);
    const session = await client.createSession(DOMAIN, PROBLEM);
    await app.loadSession(session.id);

    setSelect("kind-select", "forbid");
    setSelect("action-a-select", "exercise");
    click("suggest");

    await waitFor(() => byTestId("unsolvable"), "unsolvable card");
    expect(byTestId("unsolvable")!.textContent).toContain("No plan satisfies this suggestion");
    // form preserved
    expect(document.querySelector<HTMLSelectElement>("#kind-select")!.value).toBe("forbid");
    expect(document.querySelector<HTMLSelectElement>("#action-a-select")!.value).toBe("exercise");
    // the failed attempt is visible in history and has no commit button
    const history = byTestId("history")!;
    expect(history.textContent).toContain("forbid exercise");
    expect(history.querySelector(".tag.failed")).toBeTruthy();
  });

  it("shows a not-found banner with retry for unknown sessions", async () => {
    const app = mount();
    await app.loadSession("does-not-exist");
    const banner = byTestId("banner");
    expect(banner).toBeTruthy();
    expect(banner!.textContent).toContain("No session does-not-exist");
    expect(byTestId("retry")).toBeTruthy();
  });

  it("rejects a double commit without changing the view", async () => {
    const app = mount();
    const client = new Client(BASE_URL);
    const session = await client.createSession(DOMAIN, PROBLEM);
    await app.loadSession(session.id);

    setSelect("kind-select", "replace");
    setSelect("action-a-select", "lie_frank");
    setSelect("action-b-select", "beg_frank");
    click("suggest");
    await waitFor(() => byTestId("commit"), "commit button");

    // two rapid clicks: the second lands while the first is in flight
    click("commit");
    click("commit");
    await waitFor(
      () => (app.state.session!.provenance.length === 1 ? true : null),
      "single committed suggestion",
    );
    expect(app.state.session!.plan.steps).toEqual(["beg_frank", "exercise"]);
    // a later stale commit through the API path is rejected and explained
    await app.commitIteration(0);
    expect(byTestId("commit-note")!.textContent).toContain("Commit rejected");
  });
});

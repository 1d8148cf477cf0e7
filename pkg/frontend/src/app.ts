/**
 * Moderator console. All state is whatever the API said last; rendering is
 * a pure function of that state, and no ethical judgment is computed here.
 */

import {
  ApiError,
  Client,
  ExplanationPayload,
  HistoryEntry,
  PlanPayload,
  Principle,
  PRINCIPLES,
  SessionSummary,
  SuggestionKind,
  suggestionText,
} from "./api.js";

interface Banner {
  kind: "error" | "notice";
  text: string;
  retry: boolean;
}

interface FormState {
  principle: Principle;
  kind: SuggestionKind;
  actionA: string;
  actionB: string;
}

interface AppState {
  sessionId: string | null;
  session: SessionSummary | null;
  plan: PlanPayload | null;
  history: HistoryEntry[];
  explanation: ExplanationPayload | null;
  explanationIndex: number | null; // history index of the shown explanation
  unsolvable: string | null; // inline card text for 422 suggest outcomes
  commitNote: string | null; // inline note for rejected commits
  banner: Banner | null;
  form: FormState;
  busy: boolean; // one in-flight mutation per session
}

function esc(text: string): string {
  return text
    .replace(/&/g, "&amp;")
    .replace(/</g, "&lt;")
    .replace(/>/g, "&gt;")
    .replace(/"/g, "&quot;");
}

/** Classify each step of one side of the diff, consuming multiset counts. */
export function classifySteps(
  steps: string[],
  changed: string[],
  changedClass: "removed" | "added",
): { name: string; cls: "removed" | "added" | "common" }[] {
  const budget = new Map<string, number>();
  for (const name of changed) {
    budget.set(name, (budget.get(name) ?? 0) + 1);
  }
  return steps.map((name) => {
    const left = budget.get(name) ?? 0;
    if (left > 0) {
      budget.set(name, left - 1);
      return { name, cls: changedClass };
    }
    return { name, cls: "common" as const };
  });
}

/** Latest entry per suggestion id, oldest-first; the UI list dedupes on this. */
export function dedupeHistory(entries: HistoryEntry[]): HistoryEntry[] {
  const byId = new Map<string, HistoryEntry>();
  for (const entry of entries) {
    byId.set(entry.suggestion, entry);
  }
  return [...byId.values()].sort((a, b) => a.index - b.index);
}

export class ModeratorApp {
  readonly state: AppState = {
    sessionId: null,
    session: null,
    plan: null,
    history: [],
    explanation: null,
    explanationIndex: null,
    unsolvable: null,
    commitNote: null,
    banner: null,
    form: { principle: "deontology", kind: "replace", actionA: "", actionB: "" },
    busy: false,
  };

  constructor(
    readonly root: HTMLElement,
    readonly client: Client,
  ) {
    this.root.addEventListener("click", (ev) => this.onClick(ev));
    this.root.addEventListener("change", (ev) => this.onChange(ev));
    this.render();
  }

  // ------------------------------------------------------------ actions

  async loadSession(id: string): Promise<void> {
    this.state.sessionId = id;
    this.state.banner = null;
    try {
      const [session, plan, history] = await Promise.all([
        this.client.getSession(id),
        this.client.getPlan(id),
        this.client.history(id),
      ]);
      this.state.session = session;
      this.state.plan = plan;
      this.state.history = history.entries;
      this.state.explanation = null;
      this.state.explanationIndex = null;
      this.state.unsolvable = null;
      this.state.commitNote = null;
      const names = session.actions.map((a) => a.name);
      if (!names.includes(this.state.form.actionA)) {
        this.state.form.actionA = names[0] ?? "";
      }
      if (!names.includes(this.state.form.actionB)) {
        this.state.form.actionB = names[1] ?? names[0] ?? "";
      }
    } catch (err) {
      this.state.session = null;
      this.state.plan = null;
      this.state.history = [];
      this.state.banner = {
        kind: "error",
        text:
          err instanceof ApiError && err.status === 404
            ? `No session ${id} on the service`
            : `Cannot load session: ${(err as Error).message}`,
        retry: true,
      };
    }
    this.render();
  }

  async createSession(domain: string, problem: string): Promise<void> {
    try {
      const session = await this.client.createSession(domain, problem);
      await this.loadSession(session.id);
    } catch (err) {
      this.state.banner = {
        kind: "error",
        text: `Cannot create session: ${(err as Error).message}`,
        retry: false,
      };
      this.render();
    }
  }

  async submitSuggestion(): Promise<void> {
    const { sessionId, form, busy } = this.state;
    if (!sessionId || busy) return;
    const text = suggestionText(form.kind, form.actionA, form.actionB);
    this.state.busy = true;
    this.state.commitNote = null;
    this.render();
    try {
      const explanation = await this.client.suggest(sessionId, text, form.principle);
      const history = await this.client.history(sessionId);
      this.state.history = history.entries;
      this.state.explanation = explanation;
      this.state.explanationIndex = history.entries.length - 1;
      this.state.unsolvable = null;
    } catch (err) {
      if (err instanceof ApiError && err.status === 422) {
        // keep the form; show the inline card and the recorded failed attempt
        this.state.explanation = null;
        this.state.explanationIndex = null;
        this.state.unsolvable = `No plan satisfies this suggestion (${text}): ${err.message}`;
        const history = await this.client.history(sessionId).catch(() => null);
        if (history) this.state.history = history.entries;
      } else {
        this.state.banner = {
          kind: "error",
          text: `Suggestion failed: ${(err as Error).message}`,
          retry: false,
        };
      }
    }
    this.state.busy = false;
    this.render();
  }

  async commitIteration(index: number): Promise<void> {
    const { sessionId, busy } = this.state;
    if (!sessionId || busy) return; // second click while in flight: rejected, UI unchanged
    this.state.busy = true;
    this.render();
    try {
      await this.client.commit(sessionId, index);
      this.state.busy = false;
      await this.loadSession(sessionId); // timeline switches to the adopted HPlan
      return;
    } catch (err) {
      if (err instanceof ApiError && err.status === 409) {
        this.state.commitNote = `Commit rejected: ${err.message}`;
        const history = await this.client.history(sessionId).catch(() => null);
        if (history) this.state.history = history.entries;
      } else {
        this.state.banner = {
          kind: "error",
          text: `Commit failed: ${(err as Error).message}`,
          retry: false,
        };
      }
    }
    this.state.busy = false;
    this.render();
  }

  // ------------------------------------------------------------- events

  private onClick(ev: Event): void {
    const target = (ev.target as HTMLElement).closest("[data-action]");
    if (!target) return;
    const action = target.getAttribute("data-action");
    if (action === "load") {
      const input = this.root.querySelector<HTMLInputElement>("#session-id-input");
      if (input && input.value.trim()) void this.loadSession(input.value.trim());
    } else if (action === "retry") {
      if (this.state.sessionId) void this.loadSession(this.state.sessionId);
    } else if (action === "create") {
      const domain = this.root.querySelector<HTMLTextAreaElement>("#domain-input");
      const problem = this.root.querySelector<HTMLTextAreaElement>("#problem-input");
      if (domain && problem) void this.createSession(domain.value, problem.value);
    } else if (action === "suggest") {
      void this.submitSuggestion();
    } else if (action === "commit") {
      const index = Number(target.getAttribute("data-index"));
      if (!Number.isNaN(index)) void this.commitIteration(index);
    }
  }

  private onChange(ev: Event): void {
    const el = ev.target as HTMLElement;
    const form = this.state.form;
    if (el.id === "principle-select") {
      form.principle = (el as HTMLSelectElement).value as Principle;
    } else if (el.id === "kind-select") {
      form.kind = (el as HTMLSelectElement).value as SuggestionKind;
      this.render(); // the second action dropdown appears/disappears
    } else if (el.id === "action-a-select") {
      form.actionA = (el as HTMLSelectElement).value;
    } else if (el.id === "action-b-select") {
      form.actionB = (el as HTMLSelectElement).value;
    }
  }

  // ------------------------------------------------------------- render

  render(): void {
    const { session } = this.state;
    this.root.innerHTML = `
      <header class="topbar">
        <h1>Plan ethics moderator</h1>
        ${this.renderLoader()}
      </header>
      ${this.renderBanner()}
      ${session ? this.renderSession() : this.renderWelcome()}
    `;
  }

  private renderLoader(): string {
    return `
      <div class="loader">
        <input id="session-id-input" placeholder="session id"
               value="${esc(this.state.sessionId ?? "")}" />
        <button data-action="load">Load session</button>
      </div>
    `;
  }

  private renderBanner(): string {
    const banner = this.state.banner;
    if (!banner) return "";
    const retry = banner.retry
      ? `<button data-action="retry" data-testid="retry">Retry</button>`
      : "";
    return `
      <div class="banner ${banner.kind}" data-testid="banner">
        <span>${esc(banner.text)}</span> ${retry}
      </div>
    `;
  }

  private renderWelcome(): string {
    return `
      <section class="welcome">
        <p>Load an existing session above, or paste a domain and problem to start one.</p>
        <details open>
          <summary>New session</summary>
          <textarea id="domain-input" rows="6" placeholder="(define (domain ...) ...)"></textarea>
          <textarea id="problem-input" rows="6" placeholder="(define (problem ...) ...)"></textarea>
          <button data-action="create">Create session</button>
        </details>
      </section>
    `;
  }

  private renderSession(): string {
    const session = this.state.session!;
    return `
      <section class="session" data-testid="session">
        <div class="meta">
          <span class="sid">session ${esc(session.id)}</span>
          ${this.renderProvenance(session)}
        </div>
        ${this.renderTimeline()}
        ${this.renderControls(session)}
        ${this.renderExplanation()}
        ${this.renderHistory()}
      </section>
    `;
  }

  private renderProvenance(session: SessionSummary): string {
    const crumbs = ["original", ...session.provenance]
      .map((p) => `<span class="crumb">${esc(p)}</span>`)
      .join(" → ");
    return `<nav class="provenance" data-testid="provenance">${crumbs}</nav>`;
  }

  private renderTimeline(): string {
    const plan = this.state.plan;
    if (!plan) return "";
    if (plan.steps.length === 0) {
      return `<div class="timeline empty" data-testid="timeline">
        <em>Goal already satisfied: the empty plan suffices.</em>
      </div>`;
    }
    const steps = plan.details
      .map(
        (a, i) => `
        <li class="step intrinsic-${a.intrinsic}" data-testid="timeline-step">
          <span class="ordinal">${i + 1}</span>
          <span class="name">${esc(a.name)}</span>
          <span class="badge">${a.intrinsic}</span>
          <span class="cost">cost ${a.cost}</span>
        </li>`,
      )
      .join("");
    return `
      <div class="timeline" data-testid="timeline">
        <ol class="steps">${steps}</ol>
        <div class="total">total cost ${plan.cost}</div>
      </div>
    `;
  }

  private renderControls(session: SessionSummary): string {
    const { form, busy } = this.state;
    const principles = PRINCIPLES.map(
      (p) =>
        `<option value="${p}" ${p === form.principle ? "selected" : ""}>${p.replaceAll("_", " ")}</option>`,
    ).join("");
    const kinds: SuggestionKind[] = ["forbid", "force", "replace", "order"];
    const kindOptions = kinds
      .map((k) => `<option value="${k}" ${k === form.kind ? "selected" : ""}>${k}</option>`)
      .join("");
    const actionOption = (selected: string) =>
      session.actions
        .map(
          (a) =>
            `<option value="${esc(a.name)}" ${a.name === selected ? "selected" : ""}>${esc(a.name)}</option>`,
        )
        .join("");
    const two = form.kind === "replace" || form.kind === "order";
    const joiner = form.kind === "replace" ? "with" : "before";
    const second = two
      ? `<span class="joiner">${joiner}</span>
         <select id="action-b-select" data-testid="action-b">${actionOption(form.actionB)}</select>`
      : "";
    return `
      <div class="controls" data-testid="controls">
        <label>principle
          <select id="principle-select" data-testid="principle">${principles}</select>
        </label>
        <label>suggestion
          <select id="kind-select" data-testid="kind">${kindOptions}</select>
        </label>
        <select id="action-a-select" data-testid="action-a">${actionOption(form.actionA)}</select>
        ${second}
        <button data-action="suggest" data-testid="suggest" ${busy ? "disabled" : ""}>
          What if?
        </button>
      </div>
    `;
  }

  private renderExplanation(): string {
    if (this.state.unsolvable) {
      return `
        <div class="card unsolvable" data-testid="unsolvable">
          ${esc(this.state.unsolvable)}
        </div>
      `;
    }
    const explanation = this.state.explanation;
    if (!explanation) return "";
    const original = classifySteps(
      explanation.original.steps,
      explanation.diff.removed,
      "removed",
    );
    const hplan = classifySteps(explanation.hplan.steps, explanation.diff.added, "added");
    const column = (
      title: string,
      side: typeof explanation.original,
      classed: { name: string; cls: string }[],
      testid: string,
    ) => {
      const verdictCls = side.verdict.permissible ? "permissible" : "impermissible";
      const verdictWord = side.verdict.permissible ? "permissible" : "impermissible";
      const items = classed
        .map((s) => `<li class="diff-${s.cls}">${esc(s.name)}</li>`)
        .join("");
      return `
        <div class="column" data-testid="${testid}">
          <h3>${title}</h3>
          <div class="verdict ${verdictCls}" data-testid="${testid}-verdict">${verdictWord}</div>
          <ul class="plan-steps">${items || "<li class='diff-common'>(empty plan)</li>"}</ul>
        </div>
      `;
    };
    const index = this.state.explanationIndex;
    const entry = index !== null ? this.state.history[index] : undefined;
    const committable = entry !== undefined && entry.status === "ok" && !entry.committed;
    return `
      <div class="card explanation" data-testid="explanation">
        <div class="columns">
          ${column("Current plan", explanation.original, original, "original")}
          ${column("Hypothetical plan", explanation.hplan, hplan, "hplan")}
        </div>
        <p class="nl" data-testid="nl">${esc(explanation.nl)}</p>
        ${
          committable
            ? `<button data-action="commit" data-index="${index}" data-testid="commit"
                 ${this.state.busy ? "disabled" : ""}>Commit this iteration</button>`
            : ""
        }
        ${this.state.commitNote ? `<p class="commit-note" data-testid="commit-note">${esc(this.state.commitNote)}</p>` : ""}
      </div>
    `;
  }

  private renderHistory(): string {
    const entries = dedupeHistory(this.state.history);
    if (entries.length === 0) return "";
    const rows = entries
      .map((entry) => {
        const state = entry.committed
          ? `<span class="tag committed">committed</span>`
          : entry.status === "failed"
            ? `<span class="tag failed">${esc(entry.error?.code ?? "failed")}</span>`
            : `<button data-action="commit" data-index="${entry.index}"
                 data-testid="history-commit-${entry.index}"
                 ${this.state.busy ? "disabled" : ""}>commit</button>`;
        return `
          <li data-testid="history-entry">
            <code>${esc(entry.suggestion)}</code>
            <span class="principle">${esc(entry.principle)}</span>
            ${state}
          </li>`;
      })
      .join("");
    return `
      <div class="card history" data-testid="history">
        <h3>Explored suggestions</h3>
        <ul>${rows}</ul>
        ${this.state.commitNote && !this.state.explanation ? `<p class="commit-note" data-testid="commit-note">${esc(this.state.commitNote)}</p>` : ""}
      </div>
    `;
  }
}

// DOM wiring for the dictionary game. All rule decisions come back from the
// server; this file only renders state and relays input. The session id
// lives in the URL hash so a game can be shared or reloaded.

import { ApiError, GameClient, RuleViolationError, splitTokens } from "./api.js";
import type { AnalysisView, SessionView } from "./api.js";
import { renderGraphSvg } from "./graph.js";
import {
  LABEL_COLORS,
  MGS_BADGE_COLOR,
  componentCounts,
  countsDisagreements,
  definitionArcs,
  groupByLabel,
  parseExport,
  progressOf,
  shouldRenderGraph,
} from "./state.js";

const client = new GameClient();
let currentView: SessionView | null = null;
let busy = false;

function el<T extends HTMLElement>(id: string): T {
  const node = document.getElementById(id);
  if (!node) throw new Error(`missing element #${id}`);
  return node as T;
}

function setStatus(message: string, isError = false): void {
  const status = el<HTMLDivElement>("status");
  status.textContent = message;
  status.className = isError ? "status error" : "status";
}

function sessionIdFromHash(): string | null {
  const match = window.location.hash.match(/^#\/s\/(.+)$/);
  return match ? (match[1] ?? null) : null;
}

async function guard(action: () => Promise<void>): Promise<void> {
  if (busy) return; // one in-flight mutation per session
  busy = true;
  try {
    await action();
    setStatus("");
  } catch (err) {
    if (err instanceof RuleViolationError) {
      setStatus(friendlyRule(err), true);
    } else if (err instanceof ApiError) {
      setStatus(`request failed (${err.status}): ${err.message}`, true);
    } else {
      setStatus(`network problem: ${String(err)}`, true);
    }
  } finally {
    busy = false;
  }
}

function friendlyRule(err: RuleViolationError): string {
  switch (err.rule) {
    case "min-content-words":
      return "need at least 2 content words";
    case "self-reference":
      return "a word may not appear in its own definition";
    case "out-of-turn":
      return "that word is not waiting for a definition";
    default:
      return err.detail;
  }
}

function renderSession(view: SessionView): void {
  currentView = view;
  el("start-screen").hidden = true;
  el("session-screen").hidden = false;
  el("analysis-screen").hidden = view.status !== "complete";

  const progress = progressOf(view);
  el("progress").textContent = `${progress.defined}/${progress.totalSeen} defined`;
  el<HTMLProgressElement>("progress-bar").value = progress.fraction;

  const pendingList = el<HTMLUListElement>("pending");
  pendingList.replaceChildren(
    ...view.pending.map((word, i) => {
      const item = document.createElement("li");
      item.textContent = word;
      if (i === 0) item.className = "current";
      return item;
    }),
  );

  const definedList = el<HTMLUListElement>("defined");
  definedList.replaceChildren(
    ...Object.entries(view.defined).map(([word, bag]) => {
      const item = document.createElement("li");
      item.textContent = `${word}: ${bag.join(" ")}`;
      return item;
    }),
  );

  if (view.status === "complete") {
    el("define-form").hidden = true;
    el("banner").hidden = false;
    void guard(async () => renderAnalysis(await client.fetchAnalysis(view.id), view));
  } else {
    el("define-form").hidden = false;
    el("banner").hidden = true;
    el("current-word").textContent = view.pending[0] ?? "";
    const preview = splitTokens(el<HTMLInputElement>("definition").value);
    el("token-hint").textContent = preview.length ? `${preview.length} words` : "";
  }
}

async function renderAnalysis(analysis: AnalysisView, view: SessionView): Promise<void> {
  const groups = groupByLabel(analysis);
  const counts = componentCounts(analysis);
  const report = analysis.report;

  el("analysis-summary").textContent =
    `${report.total_words} words: kernel ${report.kernel_words}, ` +
    `core ${counts.core}, satellites ${counts.satellite}, ` +
    `outside ${counts.outside}, minimal grounding set ${counts.mgs}`;

  const disagreements = countsDisagreements(analysis);
  if (disagreements.length) {
    setStatus(`count mismatch against the server report: ${disagreements.join("; ")}`, true);
  }

  const listNode = el<HTMLDivElement>("analysis-groups");
  listNode.replaceChildren(
    groupSection("Core", groups.core, LABEL_COLORS.CORE ?? "", groups.mgs),
    groupSection("Satellites", groups.satellite, LABEL_COLORS.SATELLITE ?? "", groups.mgs),
    groupSection("Outside the kernel", groups.outside, LABEL_COLORS.OUTSIDE ?? "", groups.mgs),
  );

  const graphNode = el<HTMLDivElement>("graph");
  if (shouldRenderGraph(report.total_words)) {
    const entries = parseExport(await client.exportSession(view.id));
    graphNode.innerHTML = renderGraphSvg({
      words: entries.map((e) => e.word),
      arcs: definitionArcs(entries),
      labels: analysis.labels,
      mgs: new Set(analysis.mgs),
    });
    graphNode.hidden = false;
  } else {
    graphNode.hidden = true;
    graphNode.innerHTML = "";
  }
}

function groupSection(title: string, words: string[], color: string, mgs: Set<string>): HTMLElement {
  const section = document.createElement("section");
  const heading = document.createElement("h3");
  const swatch = document.createElement("span");
  swatch.className = "swatch";
  swatch.style.backgroundColor = color;
  heading.append(swatch, ` ${title} (${words.length})`);
  const list = document.createElement("ul");
  list.className = "word-list";
  for (const word of words) {
    const item = document.createElement("li");
    item.textContent = word;
    if (mgs.has(word)) {
      item.style.borderColor = MGS_BADGE_COLOR;
      item.classList.add("mgs");
      item.title = "member of the minimal grounding set";
    }
    list.append(item);
  }
  section.append(heading, list);
  return section;
}

function wireEvents(): void {
  el<HTMLFormElement>("start-form").addEventListener("submit", (event) => {
    event.preventDefault();
    const word = el<HTMLInputElement>("start-word").value.trim();
    if (!word) return;
    void guard(async () => {
      const view = await client.startSession(word);
      window.location.hash = `#/s/${view.id}`;
      renderSession(view);
    });
  });

  el<HTMLFormElement>("define-form").addEventListener("submit", (event) => {
    event.preventDefault();
    const view = currentView;
    if (!view || view.status !== "active") return;
    const word = view.pending[0];
    if (!word) return;
    const input = el<HTMLInputElement>("definition");
    void guard(async () => {
      const updated = await client.submitDefinition(view.id, word, input.value);
      input.value = "";
      renderSession(updated);
    });
  });

  el<HTMLInputElement>("definition").addEventListener("input", () => {
    const preview = splitTokens(el<HTMLInputElement>("definition").value);
    el("token-hint").textContent = preview.length ? `${preview.length} words` : "";
  });

  window.addEventListener("hashchange", () => void restore());
}

async function restore(): Promise<void> {
  const id = sessionIdFromHash();
  if (!id) {
    el("start-screen").hidden = false;
    el("session-screen").hidden = true;
    el("analysis-screen").hidden = true;
    return;
  }
  await guard(async () => renderSession(await client.getSession(id)));
}

wireEvents();
void restore();

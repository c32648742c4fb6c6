// Pure view-state derivations, kept free of the DOM so they are testable.

import type { AnalysisView, SessionView } from "./api.js";

export interface Progress {
  defined: number;
  totalSeen: number;
  fraction: number;
}

export function progressOf(view: SessionView): Progress {
  const totalSeen = view.defined_count + view.pending.length;
  return {
    defined: view.defined_count,
    totalSeen,
    fraction: totalSeen === 0 ? 0 : view.defined_count / totalSeen,
  };
}

// Words drawn beyond this stop getting a graph; a list reads better.
export const GRAPH_WORD_LIMIT = 100;

export function shouldRenderGraph(wordCount: number): boolean {
  return wordCount <= GRAPH_WORD_LIMIT;
}

export const LABEL_COLORS: Record<string, string> = {
  CORE: "#e8833a",
  SATELLITE: "#7fb3d5",
  OUTSIDE: "#d5d5d5",
};

export const MGS_BADGE_COLOR = "#2e9e5b";

export interface AnalysisGroups {
  core: string[];
  satellite: string[];
  outside: string[];
  mgs: Set<string>;
}

export function groupByLabel(analysis: AnalysisView): AnalysisGroups {
  const groups: AnalysisGroups = {
    core: [],
    satellite: [],
    outside: [],
    mgs: new Set(analysis.mgs),
  };
  for (const word of Object.keys(analysis.labels).sort()) {
    const label = analysis.labels[word];
    if (label === "CORE") groups.core.push(word);
    else if (label === "SATELLITE") groups.satellite.push(word);
    else groups.outside.push(word);
  }
  return groups;
}

export interface ComponentCounts {
  core: number;
  satellite: number;
  outside: number;
  mgs: number;
}

export function componentCounts(analysis: AnalysisView): ComponentCounts {
  const groups = groupByLabel(analysis);
  return {
    core: groups.core.length,
    satellite: groups.satellite.length,
    outside: groups.outside.length,
    mgs: groups.mgs.size,
  };
}

// The displayed counts must agree with the server's structure report; any
// mismatch is surfaced instead of silently trusting either side.
export function countsDisagreements(analysis: AnalysisView): string[] {
  const counts = componentCounts(analysis);
  const report = analysis.report;
  const problems: string[] = [];
  if (counts.core !== report.core_words) {
    problems.push(`core: labels say ${counts.core}, report says ${report.core_words}`);
  }
  if (counts.satellite !== report.satellite_words) {
    problems.push(
      `satellite: labels say ${counts.satellite}, report says ${report.satellite_words}`,
    );
  }
  const outsideFromReport = report.total_words - report.kernel_words;
  if (counts.outside !== outsideFromReport) {
    problems.push(`outside: labels say ${counts.outside}, report says ${outsideFromReport}`);
  }
  if (report.mgs_words !== undefined && counts.mgs !== report.mgs_words) {
    problems.push(`grounding set: badges say ${counts.mgs}, report says ${report.mgs_words}`);
  }
  return problems;
}

export interface MiniDictEntry {
  word: string;
  tokens: string[];
}

// The export endpoint emits the jsonl dictionary format; the graph view
// needs the definitional links back out of it.
export function parseExport(text: string): MiniDictEntry[] {
  const entries: MiniDictEntry[] = [];
  for (const line of text.split("\n")) {
    if (!line.trim()) continue;
    const record = JSON.parse(line) as {
      word: string;
      senses: { rank: number; tokens: string[] }[];
    };
    const first = record.senses.find((s) => s.rank === 1);
    entries.push({ word: record.word, tokens: first ? first.tokens : [] });
  }
  return entries;
}

export function definitionArcs(entries: MiniDictEntry[]): [string, string][] {
  const arcs: [string, string][] = [];
  for (const entry of entries) {
    for (const definer of entry.tokens) {
      arcs.push([definer, entry.word]);
    }
  }
  return arcs.sort((a, b) => a[0].localeCompare(b[0]) || a[1].localeCompare(b[1]));
}

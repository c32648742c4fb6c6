// Drives a real game service through the same client modules the browser
// bundle uses: start, submissions, completion, then checks that the
// analysis view's component counts equal what the decompose command reports
// for the exported mini-dictionary.

import { spawn, spawnSync } from "node:child_process";
import { mkdtempSync, readFileSync, writeFileSync } from "node:fs";
import { tmpdir } from "node:os";
import { join } from "node:path";
import { afterAll, beforeAll, describe, expect, it } from "vitest";

import { GameClient, RuleViolationError } from "../src/api.js";
import { componentCounts, countsDisagreements, progressOf } from "../src/state.js";

const PORT = 8946;
const BASE = `http://127.0.0.1:${PORT}`;

let server: ReturnType<typeof spawn> | null = null;
let workDir: string;

async function waitForHealth(): Promise<void> {
  const deadline = Date.now() + 30_000;
  while (Date.now() < deadline) {
    try {
      const response = await fetch(`${BASE}/health`);
      if (response.ok) return;
    } catch {
      // not up yet
    }
    await new Promise((resolve) => setTimeout(resolve, 250));
  }
  throw new Error("game service did not become healthy");
}

beforeAll(async () => {
  workDir = mkdtempSync(join(tmpdir(), "lexikernel-ui-"));
  server = spawn(
    "lexikernel",
    ["serve", "--port", String(PORT), "--sessions", join(workDir, "sessions")],
    { stdio: "ignore" },
  );
  await waitForHealth();
}, 40_000);

afterAll(() => {
  server?.kill();
});

describe("live session flow", () => {
  const client = new GameClient(BASE);

  it("start, submissions, completion, analysis counts", { timeout: 60_000 }, async () => {
    let view = await client.startSession("walk");
    expect(view.status).toBe("active");
    expect(view.pending).toEqual(["walk"]);

    // The server is the rule authority; a one-word definition bounces.
    await expect(client.submitDefinition(view.id, "walk", "move")).rejects.toBeInstanceOf(
      RuleViolationError,
    );

    const script: [string, string][] = [
      ["walk", "move legs"],
      ["move", "walk legs"],
      ["legs", "walk move"],
    ];
    for (const [word, text] of script) {
      view = await client.submitDefinition(view.id, word, text);
      // after every round trip the rendered pending list mirrors the server
      const fresh = await client.getSession(view.id);
      expect(view.pending).toEqual(fresh.pending);
      expect(view.defined_count).toBe(fresh.defined_count);
    }
    expect(view.status).toBe("complete");
    expect(progressOf(view).fraction).toBe(1);

    const analysis = await client.fetchAnalysis(view.id);
    expect(countsDisagreements(analysis)).toEqual([]);
    const counts = componentCounts(analysis);

    // Compare against the decompose command run on the exported dictionary.
    const exported = await client.exportSession(view.id);
    const dictPath = join(workDir, "mini.jsonl");
    const labelsPath = join(workDir, "labels.tsv");
    writeFileSync(dictPath, exported);
    const decompose = spawnSync("lexikernel", ["decompose", dictPath, "--out", labelsPath], {
      encoding: "utf-8",
    });
    expect(decompose.status).toBe(0);

    const labelCounts = { CORE: 0, SATELLITE: 0, OUTSIDE: 0 };
    for (const line of readFileSync(labelsPath, "utf-8").split("\n")) {
      if (!line.trim()) continue;
      const label = line.split("\t")[1] as keyof typeof labelCounts;
      labelCounts[label] += 1;
    }
    expect(counts.core).toBe(labelCounts.CORE);
    expect(counts.satellite).toBe(labelCounts.SATELLITE);
    expect(counts.outside).toBe(labelCounts.OUTSIDE);
  });

  it("restores a session by id, the reload path", { timeout: 30_000 }, async () => {
    const created = await client.startSession("river");
    const restored = await client.getSession(created.id);
    expect(restored.pending).toEqual(created.pending);
    expect(restored.start_word).toBe("river");
  });

  it("passes stop-word rejections through", { timeout: 30_000 }, async () => {
    await expect(client.startSession("the")).rejects.toMatchObject({ rule: "start-word" });
  });
});

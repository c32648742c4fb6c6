import { describe, expect, it } from "vitest";

import { ApiError, GameClient, RuleViolationError } from "../src/api.js";

type Call = { url: string; init: RequestInit | undefined };

function stubFetch(status: number, body: unknown, calls: Call[]): typeof fetch {
  return (async (url: RequestInfo | URL, init?: RequestInit) => {
    calls.push({ url: String(url), init });
    return new Response(JSON.stringify(body), {
      status,
      headers: { "Content-Type": "application/json" },
    });
  }) as typeof fetch;
}

describe("GameClient", () => {
  it("posts the start word", async () => {
    const calls: Call[] = [];
    const client = new GameClient(
      "http://x",
      stubFetch(201, { id: "s1", pending: ["walk"], status: "active" }, calls),
    );
    const session = await client.startSession("walk");
    expect(session.pending).toEqual(["walk"]);
    expect(calls[0]?.url).toBe("http://x/sessions");
    expect(JSON.parse(String(calls[0]?.init?.body))).toEqual({ start_word: "walk" });
  });

  it("splits definition text into whitespace tokens", async () => {
    const calls: Call[] = [];
    const client = new GameClient("", stubFetch(200, { pending: [] }, calls));
    await client.submitDefinition("s1", "walk", "to move  using legs");
    expect(JSON.parse(String(calls[0]?.init?.body))).toEqual({
      word: "walk",
      tokens: ["to", "move", "using", "legs"],
    });
  });

  it("surfaces 409 bodies as rule violations", async () => {
    const client = new GameClient(
      "",
      stubFetch(409, { rule: "min-content-words", detail: "too short" }, []),
    );
    const failure = client.submitDefinition("s1", "walk", "move");
    await expect(failure).rejects.toBeInstanceOf(RuleViolationError);
    await expect(failure).rejects.toMatchObject({ rule: "min-content-words" });
  });

  it("wraps other failures with their status", async () => {
    const client = new GameClient("", stubFetch(404, { detail: "no session x" }, []));
    const failure = client.getSession("x");
    await expect(failure).rejects.toBeInstanceOf(ApiError);
    await expect(failure).rejects.toMatchObject({ status: 404 });
  });
});

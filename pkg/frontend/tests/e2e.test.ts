/** End-to-end: the real HTTP server, the real client, the real renderers.
 *
 * Spawns `python3 -m negdetect serve` against the freshly built dist/ and
 * drives the same code paths the browser would: fetch via src/api, parse via
 * src/conllu, render via src/render. Asserts on the resulting HTML.
 */

import { type ChildProcess, spawn } from "node:child_process";
import net from "node:net";
import path from "node:path";
import { fileURLToPath } from "node:url";

import { afterAll, beforeAll, describe, expect, it } from "vitest";

import { getJson, getText, postJson } from "../src/api.js";
import { parseConllu } from "../src/conllu.js";
import { renderAnnotatePanel, renderPatternPanel } from "../src/render.js";
import type {
  AnnotateResponse,
  FixtureEntry,
  MatchResponse,
  TriggersResponse,
} from "../src/types.js";

const FRONTEND_DIR = path.dirname(path.dirname(fileURLToPath(import.meta.url)));
const PATTERN_FREI = "{lemma:/frei/}=gov > /nmod:von/ {}=dep";

let server: ChildProcess;
let base: string;

function freePort(): Promise<number> {
  return new Promise((resolve, reject) => {
    const probe = net.createServer();
    probe.once("error", reject);
    probe.listen(0, "127.0.0.1", () => {
      const address = probe.address();
      if (address === null || typeof address === "string") {
        reject(new Error("no port assigned"));
        return;
      }
      probe.close(() => resolve(address.port));
    });
  });
}

async function waitForServer(timeoutMs: number): Promise<void> {
  const deadline = Date.now() + timeoutMs;
  let lastDetail = "never reached";
  while (Date.now() < deadline) {
    if (server.exitCode !== null) {
      throw new Error(`server exited early with code ${server.exitCode}`);
    }
    const probe = await getJson<TriggersResponse>(base, "/api/triggers");
    if (probe.ok) {
      return;
    }
    lastDetail = probe.failure.detail;
    await new Promise((resolve) => setTimeout(resolve, 200));
  }
  throw new Error(`server not ready after ${timeoutMs}ms: ${lastDetail}`);
}

beforeAll(async () => {
  const port = await freePort();
  base = `http://127.0.0.1:${port}`;
  const resources = path.join(FRONTEND_DIR, "..", "src", "negdetect", "resources");
  server = spawn(
    "python3",
    [
      "-m",
      "negdetect",
      "serve",
      "--port",
      String(port),
      "--host",
      "127.0.0.1",
      "--static-dir",
      "dist",
      "--patterns",
      path.join(resources, "patterns.tsv"),
      "--conllu-dir",
      path.join(resources, "conllu"),
    ],
    { cwd: FRONTEND_DIR, stdio: ["ignore", "inherit", "inherit"] },
  );
  await waitForServer(20000);
}, 30000);

afterAll(() => {
  if (server && server.exitCode === null) {
    server.kill();
  }
});

async function fixtureConllu(id: string): Promise<string> {
  const manifest = await getJson<FixtureEntry[]>(base, "/fixtures/manifest.json");
  if (!manifest.ok) {
    throw new Error(`manifest: ${manifest.failure.detail}`);
  }
  const entry = manifest.value.find((f) => f.id === id);
  expect(entry, `fixture ${id} in manifest`).toBeDefined();
  const body = await getText(base, `/fixtures/${entry!.file}`);
  if (!body.ok) {
    throw new Error(`fixture body: ${body.failure.detail}`);
  }
  return body.value;
}

describe("workbench against the live server", () => {
  it("serves the built UI at the root", async () => {
    const page = await getText(base, "/");
    expect(page.ok).toBe(true);
    if (page.ok) {
      expect(page.value).toContain('id="panel-annotate"');
      expect(page.value).toContain('<script type="module" src="./app.js">');
    }
  });

  it("negates the concept in 'Keine Infektion erkennbar' and badges it", async () => {
    const result = await postJson<AnnotateResponse>(base, "/api/annotate", {
      text: "Keine Infektion erkennbar",
      window: "inf",
    });
    expect(result.ok).toBe(true);
    if (!result.ok) return;
    const html = renderAnnotatePanel(result.value, null);
    expect(html).toContain("Infektion");
    expect(html).toContain('<sup class="badge">−</sup>');
    // Hover text carries the trigger and whichever component asserted it.
    expect(html).toContain('title="Keine (');
  });

  it("matches the frei-von pattern once on its fixture parse", async () => {
    const conllu = await fixtureConllu("patient_frei_von_schmerzen");
    const result = await postJson<MatchResponse>(base, "/api/match", {
      conllu,
      pattern: PATTERN_FREI,
    });
    expect(result.ok).toBe(true);
    if (!result.ok) return;
    expect(result.value.matches).toHaveLength(1);
    expect(result.value.matches[0].bindings).toEqual({ gov: 2, dep: 4 });
    const html = renderPatternPanel(PATTERN_FREI, result.value, null, parseConllu(conllu));
    expect(html).toContain('<span class="binding-gov">gov: frei</span>');
    expect(html).toContain('<span class="binding-dep">dep: Schmerzen</span>');
    expect(html.match(/match-row/g)).toHaveLength(1);
  });

  it("reports the syntax error for '{' with a caret at offset 1", async () => {
    const conllu = await fixtureConllu("patient_frei_von_schmerzen");
    const result = await postJson<MatchResponse>(base, "/api/match", {
      conllu,
      pattern: "{",
    });
    expect(result.ok).toBe(false);
    if (result.ok) return;
    expect(result.failure.status).toBe(422);
    expect(result.failure.error).toBe("pattern_syntax");
    expect(result.failure.offset).toBe(1);
    const html = renderPatternPanel("{", null, result.failure, []);
    expect(html).toContain("pattern-error");
    expect(html).toContain("{\n ^\nexpected an attribute name at offset 1");
  });

  it("ships the contrastive pair in the fixture manifest", async () => {
    const manifest = await getJson<FixtureEntry[]>(base, "/fixtures/manifest.json");
    expect(manifest.ok).toBe(true);
    if (!manifest.ok) return;
    const entry = manifest.value.find((f) => f.id === "weder_husten_noch_fieber");
    expect(entry?.pairWith).toBe("neither_fever_nor_dizziness");
    expect(manifest.value.length).toBeGreaterThanOrEqual(15);
  });

  it("lists predefined patterns with their kinds", async () => {
    const result = await getJson<{ patterns: { text: string; kind: string | null }[] }>(
      base,
      "/api/patterns",
    );
    expect(result.ok).toBe(true);
    if (!result.ok) return;
    expect(result.value.patterns.length).toBeGreaterThan(0);
    const kinds = new Set(result.value.patterns.map((p) => p.kind));
    expect(kinds.has("NEG")).toBe(true);
    expect(kinds.has("POS")).toBe(true);
  });
});

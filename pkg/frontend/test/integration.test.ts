// Drives the UI core against a live instance of the review service:
// upload two fixture papers, watch progress reach 2/2, and check that the
// review text and the "Done" indicator are rendered. Also covers the
// blocked no-file submit and the server-down error phase.
//
// Runs in the node environment so fetch/File/FormData are the native
// implementations; rendering goes into an explicit jsdom document.

import { ChildProcess, spawn } from "node:child_process";
import { readFileSync } from "node:fs";
import { dirname, join } from "node:path";
import { fileURLToPath } from "node:url";

import { JSDOM } from "jsdom";
import { afterAll, beforeAll, describe, expect, it } from "vitest";

import { AppElements, findElements, render } from "../src/dom.js";
import { ReviewSession } from "../src/state.js";

const here = dirname(fileURLToPath(import.meta.url));
const repoRoot = join(here, "..", "..");
const pageHtml = readFileSync(join(here, "..", "index.html"), "utf-8");

const PORT = 8000 + Math.floor(Math.random() * 1000);
const BASE_URL = `http://127.0.0.1:${PORT}`;

let server: ChildProcess;

function freshPage(): AppElements {
  const dom = new JSDOM(pageHtml);
  return findElements(dom.window.document);
}

async function waitForHealthy(timeoutMs = 20000): Promise<void> {
  const deadline = Date.now() + timeoutMs;
  while (Date.now() < deadline) {
    try {
      const resp = await fetch(`${BASE_URL}/healthz`);
      if (resp.ok) return;
    } catch {
      // not up yet
    }
    await new Promise((r) => setTimeout(r, 200));
  }
  throw new Error("service did not become healthy in time");
}

function fixtureFile(name: string): File {
  const body = readFileSync(join(repoRoot, "tests", "fixtures", "papers", name));
  return new File([body], name, { type: "text/plain" });
}

beforeAll(async () => {
  server = spawn(
    "python3",
    ["-m", "litreview.app", "serve", "--port", String(PORT)],
    {
      cwd: repoRoot,
      env: { ...process.env, PYTHONPATH: join(repoRoot, "src") },
      stdio: "ignore",
    },
  );
  await waitForHealthy();
}, 30000);

afterAll(() => {
  server?.kill("SIGTERM");
});

describe("upload-and-review flow against the live service", () => {
  it("uploads 2 files, reaches 2/2, renders review text and Done", async () => {
    const el = freshPage();
    const progressReadings: number[] = [];
    const session = new ReviewSession({
      baseUrl: BASE_URL,
      backend: "freq",
      pollIntervalMs: 50,
      onChange: (view) => {
        progressReadings.push(view.processed);
        render(view, el);
      },
    });

    const view = await session.submit([
      fixtureFile("paper_a.txt"),
      fixtureFile("paper_b.txt"),
    ]);

    expect(view.phase).toBe("done");
    expect(view.processed).toBe(2);
    expect(view.total).toBe(2);
    // progress never goes backwards and ends at 2/2
    for (let i = 1; i < progressReadings.length; i++) {
      expect(progressReadings[i]).toBeGreaterThanOrEqual(progressReadings[i - 1]);
    }
    expect(el.progressText.textContent).toBe("2/2 papers processed");
    // rendered review and the Done indicator
    expect(el.reviewArticle.hidden).toBe(false);
    expect(el.reviewArticle.textContent).toContain("Ramos");
    expect(el.reviewArticle.textContent).toContain("Okonkwo");
    expect(el.doneIndicator.hidden).toBe(false);
    expect(el.doneIndicator.textContent).toBe("Done");
    // per-file rows all done
    const rows = Array.from(el.fileList.querySelectorAll("li"));
    expect(rows.map((r) => r.dataset.status)).toEqual(["done", "done"]);
  }, 30000);

  it("blocks a no-file submit", async () => {
    const el = freshPage();
    const session = new ReviewSession({ baseUrl: BASE_URL });
    render(session.current(), el);
    expect(el.submitButton.disabled).toBe(true);
    const view = await session.submit([]);
    expect(view.phase).toBe("idle");
  });

  it("shows the error phase when the server is down", async () => {
    const el = freshPage();
    const downUrl = `http://127.0.0.1:${PORT + 1}`; // nothing listens here
    const session = new ReviewSession({
      baseUrl: downUrl,
      pollIntervalMs: 50,
      onChange: (view) => render(view, el),
    });
    const view = await session.submit([fixtureFile("paper_a.txt")]);
    expect(view.phase).toBe("error");
    expect(el.errorBox.hidden).toBe(false);
    expect(el.errorBox.textContent).toBe("cannot reach the server");
  }, 15000);
});

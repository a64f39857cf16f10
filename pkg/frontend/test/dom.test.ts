// @vitest-environment jsdom
import { readFileSync } from "node:fs";
import { dirname, join } from "node:path";
import { fileURLToPath } from "node:url";

import { beforeEach, describe, expect, it } from "vitest";

import { AppElements, findElements, render } from "../src/dom.js";
import { initialView, UiJobView } from "../src/state.js";

const here = dirname(fileURLToPath(import.meta.url));
const pageHtml = readFileSync(join(here, "..", "index.html"), "utf-8");

let el: AppElements;

beforeEach(() => {
  document.documentElement.innerHTML = pageHtml;
  el = findElements(document);
});

function doneView(): UiJobView {
  return {
    jobId: "j1",
    files: [
      { name: "a.txt", status: "done", error: null },
      { name: "b.txt", status: "done", error: null },
    ],
    processed: 2,
    total: 2,
    reviewText: "First paragraph.\n\nSecond paragraph.",
    phase: "done",
    message: null,
  };
}

describe("render", () => {
  it("hides review and Done indicator while processing", () => {
    const view: UiJobView = {
      ...doneView(),
      phase: "processing",
      reviewText: null,
      processed: 1,
    };
    render(view, el);
    expect(el.reviewArticle.hidden).toBe(true);
    expect(el.doneIndicator.hidden).toBe(true);
    expect(el.progressText.textContent).toBe("1/2 papers processed");
    expect(el.progressBar.style.width).toBe("50%");
  });

  it("shows review text and the Done indicator when done", () => {
    render(doneView(), el);
    expect(el.reviewArticle.hidden).toBe(false);
    expect(el.reviewArticle.textContent).toContain("First paragraph.");
    expect(el.doneIndicator.hidden).toBe(false);
    expect(el.doneIndicator.textContent).toBe("Done");
    expect(el.copyButton.hidden).toBe(false);
    expect(el.downloadButton.hidden).toBe(false);
  });

  it("lists every file with a status mark", () => {
    const view = doneView();
    view.files[1] = { name: "b.txt", status: "failed", error: "empty input" };
    render(view, el);
    const items = Array.from(el.fileList.querySelectorAll("li"));
    expect(items).toHaveLength(2);
    expect(items[0].textContent).toContain("a.txt");
    expect(items[1].dataset.status).toBe("failed");
    expect(items[1].title).toBe("empty input");
  });

  it("disables submit when no files are selected", () => {
    render(initialView(), el);
    expect(el.submitButton.disabled).toBe(true);
  });

  it("disables submit while a job is running", () => {
    const view = { ...doneView(), phase: "processing" as const, reviewText: null };
    render(view, el);
    expect(el.submitButton.disabled).toBe(true);
    expect(el.submitButton.textContent).toBe("Working…");
  });

  it("shows the error box only in the error phase", () => {
    render(initialView(), el);
    expect(el.errorBox.hidden).toBe(true);
    render({ ...initialView(), phase: "error", message: "server offline" }, el);
    expect(el.errorBox.hidden).toBe(false);
    expect(el.errorBox.textContent).toBe("server offline");
  });
});

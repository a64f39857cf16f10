/** Thin DOM layer: renders a UiJobView into the page and wires controls. */

import { ReviewSession, UiJobView } from "./state.js";

export interface AppElements {
  fileInput: HTMLInputElement;
  submitButton: HTMLButtonElement;
  backendSelect: HTMLSelectElement;
  progressText: HTMLElement;
  progressBar: HTMLElement;
  fileList: HTMLUListElement;
  reviewArticle: HTMLElement;
  doneIndicator: HTMLElement;
  errorBox: HTMLElement;
  copyButton: HTMLButtonElement;
  downloadButton: HTMLButtonElement;
}

const STATUS_MARKS: Record<string, string> = {
  pending: "…",
  done: "✓",
  failed: "✗",
};

export function render(view: UiJobView, el: AppElements): void {
  el.progressText.textContent =
    view.total > 0 ? `${view.processed}/${view.total} papers processed` : "";
  const percent = view.total > 0 ? Math.round((100 * view.processed) / view.total) : 0;
  el.progressBar.style.width = `${percent}%`;
  el.progressBar.setAttribute("aria-valuenow", String(percent));

  const doc = el.fileList.ownerDocument;
  el.fileList.replaceChildren(
    ...view.files.map((f) => {
      const item = doc.createElement("li");
      item.dataset.status = f.status;
      item.textContent = `${STATUS_MARKS[f.status] ?? "?"} ${f.name}`;
      if (f.error) item.title = f.error;
      return item;
    }),
  );

  // A review is shown only once the job is done.
  if (view.phase === "done" && view.reviewText) {
    el.reviewArticle.textContent = view.reviewText;
    el.reviewArticle.hidden = false;
    el.doneIndicator.textContent = "Done";
    el.doneIndicator.hidden = false;
    el.copyButton.hidden = false;
    el.downloadButton.hidden = false;
  } else {
    el.reviewArticle.textContent = "";
    el.reviewArticle.hidden = true;
    el.doneIndicator.hidden = true;
    el.copyButton.hidden = true;
    el.downloadButton.hidden = true;
  }

  if (view.phase === "error" && view.message) {
    el.errorBox.textContent = view.message;
    el.errorBox.hidden = false;
  } else {
    el.errorBox.hidden = true;
    el.errorBox.textContent = "";
  }

  const busy = view.phase === "uploading" || view.phase === "processing";
  const hasFiles = (el.fileInput.files?.length ?? 0) > 0;
  el.submitButton.disabled = busy || !hasFiles;
  el.submitButton.textContent = busy ? "Working…" : "Generate review";
}

export function wire(session: ReviewSession, el: AppElements): void {
  el.fileInput.addEventListener("change", () => {
    render(session.current(), el);
  });

  el.submitButton.addEventListener("click", () => {
    const files = Array.from(el.fileInput.files ?? []);
    if (files.length === 0) return; // no-file submit is blocked
    void session.submit(files);
  });

  el.copyButton.addEventListener("click", () => {
    const text = session.current().reviewText;
    if (text) void navigator.clipboard.writeText(text);
  });

  el.downloadButton.addEventListener("click", () => {
    const text = session.current().reviewText;
    if (!text) return;
    const blob = new Blob([text], { type: "text/markdown" });
    const url = URL.createObjectURL(blob);
    const link = el.downloadButton.ownerDocument.createElement("a");
    link.href = url;
    link.download = "literature-review.md";
    link.click();
    URL.revokeObjectURL(url);
  });
}

export function findElements(root: Document): AppElements {
  const pick = <T extends HTMLElement>(id: string): T => {
    const node = root.getElementById(id);
    if (!node) throw new Error(`missing element #${id}`);
    return node as T;
  };
  return {
    fileInput: pick<HTMLInputElement>("file-input"),
    submitButton: pick<HTMLButtonElement>("submit-button"),
    backendSelect: pick<HTMLSelectElement>("backend-select"),
    progressText: pick<HTMLElement>("progress-text"),
    progressBar: pick<HTMLElement>("progress-bar"),
    fileList: pick<HTMLUListElement>("file-list"),
    reviewArticle: pick<HTMLElement>("review-article"),
    doneIndicator: pick<HTMLElement>("done-indicator"),
    errorBox: pick<HTMLElement>("error-box"),
    copyButton: pick<HTMLButtonElement>("copy-button"),
    downloadButton: pick<HTMLButtonElement>("download-button"),
  };
}

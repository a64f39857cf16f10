import { findElements, render, wire } from "./dom.js";
import { ReviewSession } from "./state.js";

window.addEventListener("DOMContentLoaded", () => {
  const elements = findElements(document);
  const session = new ReviewSession({
    baseUrl: "",
    backend: elements.backendSelect.value || "freq",
    onChange: (view) => render(view, elements),
  });
  wire(session, elements);
  render(session.current(), elements);
});

// Page wiring: load form, direction/hop toggles, stats badge, banner, grid.

import { TraceServiceClient } from "./api.js";
import { GridView } from "./grid.js";
import { TraceView } from "./state.js";

const params = new URLSearchParams(location.search);
const serviceUrl = params.get("service") ?? "http://127.0.0.1:8760";

const client = new TraceServiceClient(serviceUrl);
const store = new TraceView(client);

function el<K extends keyof HTMLElementTagNameMap>(
  tag: K,
  cls?: string,
  text?: string,
): HTMLElementTagNameMap[K] {
  const node = document.createElement(tag);
  if (cls) node.className = cls;
  if (text) node.textContent = text;
  return node;
}

const app = document.getElementById("app")!;
const toolbar = el("div", "toolbar");
const bannerBox = el("div", "banner-box");
const gridBox = el("div", "grid-box");
app.append(toolbar, bannerBox, gridBox);

// -- load form ----------------------------------------------------------------

const dumpInput = el("textarea", "dump-input") as HTMLTextAreaElement;
dumpInput.placeholder = "Paste a sheet dump (A1<TAB>content per line) ...";
const loadBtn = el("button", "", "Load");
const fileInput = el("input") as HTMLInputElement;
fileInput.type = "file";
loadBtn.addEventListener("click", () => {
  void store.loadSheet(dumpInput.value).then(() => grid.reset());
});
fileInput.addEventListener("change", async () => {
  const file = fileInput.files?.[0];
  if (file) {
    dumpInput.value = await file.text();
  }
});

// -- trace controls -------------------------------------------------------------

const dirBtn = el("button", "", "direction: deps");
dirBtn.addEventListener("click", () => {
  void store.setDirection(store.direction === "deps" ? "precs" : "deps");
});
const hopBtn = el("button", "", "mode: transitive");
hopBtn.addEventListener("click", () => {
  void store.setHopMode(store.hopMode === "transitive" ? "stepwise" : "transitive");
});
const stepBtn = el("button", "", "Step");
stepBtn.addEventListener("click", () => void store.step());
const backBtn = el("button", "", "Back");
backBtn.addEventListener("click", () => void store.back());
const statsBadge = el("span", "stats-badge");
const selectionLabel = el("span", "selection-label");

toolbar.append(
  dumpInput,
  loadBtn,
  fileInput,
  dirBtn,
  hopBtn,
  stepBtn,
  backBtn,
  selectionLabel,
  statsBadge,
);

const grid = new GridView(gridBox, store, client);

store.onChange(() => {
  dirBtn.textContent = `direction: ${store.direction}`;
  hopBtn.textContent = `mode: ${store.hopMode}`;
  stepBtn.style.display = store.hopMode === "stepwise" ? "" : "none";
  backBtn.disabled = store.history.length === 0;
  selectionLabel.textContent = store.selectedRange
    ? `selected ${store.selectedRange}` +
      (store.lastElapsedUs !== null ? ` (${store.lastElapsedUs} us)` : "")
    : "";
  statsBadge.textContent = store.stats
    ? `|E|=${store.stats.edges} |E'|=${store.stats.rawEdges} ratio=${store.stats.edgeRatio.toFixed(1)}`
    : "";

  bannerBox.innerHTML = "";
  if (store.banner) {
    const note = el("div", `banner ${store.banner.kind}`, store.banner.text);
    const close = el("button", "banner-close", "x");
    close.addEventListener("click", () => store.dismissBanner());
    note.appendChild(close);
    bannerBox.appendChild(note);
  }
});

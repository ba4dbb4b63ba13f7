/** Wiring: one in-flight request at a time, server responses drive the view. */

import { ApiError, SessionApi, resolveBaseUrl } from "./api.js";
import { EXAMPLES } from "./examples.js";
import {
  applyConflict,
  applyFailure,
  applySession,
  clearSession,
  editSource,
  initialState,
  requestStarted,
  type AnimatorState,
} from "./state.js";
import { renderView, type Handlers } from "./ui.js";

const api = new SessionApi(resolveBaseUrl(window.location.search));

let state: AnimatorState = initialState;

const viewRoot = document.getElementById("view") as HTMLElement;
const sourceBox = document.getElementById("source") as HTMLTextAreaElement;
const processBox = document.getElementById("process") as HTMLInputElement;
const gallery = document.getElementById("gallery") as HTMLSelectElement;
const loadButton = document.getElementById("load") as HTMLButtonElement;
const serviceNote = document.getElementById("service") as HTMLElement;

function set(next: AnimatorState): void {
  state = next;
  renderView(viewRoot, state, handlers);
  loadButton.disabled = state.pending;
}

async function run(action: () => Promise<AnimatorState>): Promise<void> {
  if (state.pending) return; // one request at a time
  set(requestStarted(state));
  try {
    set(await action());
  } catch (error) {
    if (error instanceof ApiError && error.status === 409) {
      set(applyConflict(state, error.offered ?? []));
    } else if (error instanceof ApiError) {
      set(applyFailure(state, error.message));
    } else {
      set(applyFailure(state, "network failure"));
    }
  }
}

const handlers: Handlers = {
  onStep(event) {
    const id = state.sessionId;
    if (!id) return;
    void run(async () => applySession(state, await api.stepSession(id, event)));
  },
  onReset() {
    const id = state.sessionId;
    if (!id) return;
    void run(async () => applySession(state, await api.resetSession(id)));
  },
  onDelete() {
    const id = state.sessionId;
    if (!id) return;
    void run(async () => {
      await api.deleteSession(id);
      return clearSession(state);
    });
  },
};

loadButton.addEventListener("click", () => {
  state = editSource(state, sourceBox.value, processBox.value.trim());
  void run(async () =>
    applySession(state, await api.createSession(state.source, state.processName)),
  );
});

for (const [index, example] of EXAMPLES.entries()) {
  const option = document.createElement("option");
  option.value = String(index);
  option.textContent = example.name;
  gallery.appendChild(option);
}

gallery.addEventListener("change", () => {
  const example = EXAMPLES[Number(gallery.value)];
  if (example) {
    sourceBox.value = example.source;
    processBox.value = example.process;
  }
});

// preload the first example so the narrative is one click away
const first = EXAMPLES[0];
if (first) {
  sourceBox.value = first.source;
  processBox.value = first.process;
}

void api.health().then((up) => {
  serviceNote.textContent = up
    ? `service: ${api.baseUrl}`
    : `service unreachable at ${api.baseUrl} — start it with: nilcsp serve`;
  serviceNote.className = up ? "service-ok" : "service-down";
});

set(state);

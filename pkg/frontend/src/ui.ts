/** DOM rendering: the whole view is rebuilt from the state on each change. */

import { bannerFor, canStep, type AnimatorState } from "./state.js";

export interface Handlers {
  onStep(event: string): void;
  onReset(): void;
  onDelete(): void;
}

export function renderView(root: HTMLElement, state: AnimatorState, handlers: Handlers): void {
  root.replaceChildren();

  if (state.error) {
    root.appendChild(el("div", "banner banner-error", state.error));
  }

  const banner = bannerFor(state.status);
  if (banner) {
    const kind = state.status === "quiescent" ? "banner-stopped" : "banner-term";
    root.appendChild(el("div", `banner ${kind}`, banner));
  }

  if (state.status) {
    const statusLine = el("div", "status-line", "");
    statusLine.appendChild(el("span", "status-label", "status:"));
    statusLine.appendChild(el("span", `status status-${state.status}`, state.status));
    root.appendChild(statusLine);
  }

  const traceRow = el("div", "trace", "");
  traceRow.appendChild(el("span", "status-label", "trace:"));
  if (state.trace.length === 0) {
    traceRow.appendChild(el("span", "chip chip-empty", "<>"));
  }
  for (const label of state.trace) {
    traceRow.appendChild(el("span", "chip", label));
  }
  root.appendChild(traceRow);

  const menu = el("div", "menu", "");
  for (const event of state.offered) {
    const button = el("button", "event", event) as HTMLButtonElement;
    button.disabled = !canStep(state);
    button.addEventListener("click", () => handlers.onStep(event));
    menu.appendChild(button);
  }
  root.appendChild(menu);

  if (state.conflict) {
    const hint =
      state.conflict.length > 0
        ? `not offered — currently offered: ${state.conflict.join(", ")}`
        : "not offered — nothing is offered";
    root.appendChild(el("div", "hint", hint));
  }

  if (state.sessionId) {
    const controls = el("div", "controls", "");
    const reset = el("button", "control", "reset") as HTMLButtonElement;
    reset.disabled = state.pending;
    reset.addEventListener("click", handlers.onReset);
    const remove = el("button", "control", "delete session") as HTMLButtonElement;
    remove.disabled = state.pending;
    remove.addEventListener("click", handlers.onDelete);
    controls.appendChild(reset);
    controls.appendChild(remove);
    root.appendChild(controls);
  }
}

function el(tag: string, className: string, text: string): HTMLElement {
  const node = document.createElement(tag);
  node.className = className;
  if (text) node.textContent = text;
  return node;
}

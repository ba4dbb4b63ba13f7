/** Animator state and its pure transitions.
 *
 * The server is the single source of truth: every state change that
 * concerns the process (status, trace, offered events) comes from a
 * session view returned by the service, verbatim. The reducers here only
 * decide which banner or hint to show around it.
 */

import type { SessionView, Status } from "./api.js";

export interface AnimatorState {
  source: string;
  processName: string;
  sessionId: string | null;
  status: Status | null;
  trace: string[];
  offered: string[];
  /** Inline hint after a 409: the events that were actually offered. */
  conflict: string[] | null;
  /** Network/service failure banner; suggests retrying. */
  error: string | null;
  /** True while a request is in flight; clicks are disabled. */
  pending: boolean;
}

export const initialState: AnimatorState = {
  source: "",
  processName: "",
  sessionId: null,
  status: null,
  trace: [],
  offered: [],
  conflict: null,
  error: null,
  pending: false,
};

export function editSource(state: AnimatorState, source: string, processName: string): AnimatorState {
  return { ...state, source, processName };
}

export function requestStarted(state: AnimatorState): AnimatorState {
  return { ...state, pending: true, error: null };
}

/** Adopt a session view from the server verbatim. */
export function applySession(state: AnimatorState, view: SessionView): AnimatorState {
  return {
    ...state,
    sessionId: view.id,
    status: view.status,
    trace: view.trace,
    offered: view.events,
    conflict: null,
    error: null,
    pending: false,
  };
}

/** A 409: keep the current view, surface the offered list as a hint. */
export function applyConflict(state: AnimatorState, offered: string[]): AnimatorState {
  return { ...state, conflict: offered, pending: false };
}

export function applyFailure(state: AnimatorState, message: string): AnimatorState {
  return { ...state, error: `${message} — retry?`, pending: false };
}

export function clearSession(state: AnimatorState): AnimatorState {
  return {
    ...state,
    sessionId: null,
    status: null,
    trace: [],
    offered: [],
    conflict: null,
    pending: false,
  };
}

/** The status banner; empty string when nothing special is happening. */
export function bannerFor(status: Status | null): string {
  if (status === "quiescent") return "STOPPED — only nil remains";
  if (status === "terminating") return "✓ terminating";
  return "";
}

export function canStep(state: AnimatorState): boolean {
  return state.sessionId !== null && !state.pending && state.offered.length > 0;
}

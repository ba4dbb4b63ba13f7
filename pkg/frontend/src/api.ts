/** Client for the nilcsp session service (HTTP+JSON). */

export type Status = "live" | "quiescent" | "terminating";

export interface SessionView {
  id: string;
  status: Status;
  trace: string[];
  events: string[];
}

/** A non-2xx response; carries the offered events on a 409 conflict. */
export class ApiError extends Error {
  constructor(
    readonly status: number,
    message: string,
    readonly offered?: string[],
  ) {
    super(message);
    this.name = "ApiError";
  }
}

async function decode(response: Response): Promise<SessionView> {
  const body = await response.json().catch(() => ({}));
  if (!response.ok) {
    throw new ApiError(
      response.status,
      typeof body.error === "string" ? body.error : `HTTP ${response.status}`,
      Array.isArray(body.offered) ? body.offered : undefined,
    );
  }
  return body as SessionView;
}

export class SessionApi {
  constructor(readonly baseUrl: string) {}

  async health(): Promise<boolean> {
    try {
      const response = await fetch(`${this.baseUrl}/health`);
      return response.ok;
    } catch {
      return false;
    }
  }

  createSession(source: string, process: string): Promise<SessionView> {
    return fetch(`${this.baseUrl}/sessions`, {
      method: "POST",
      headers: { "content-type": "application/json" },
      body: JSON.stringify({ source, process }),
    }).then(decode);
  }

  getSession(id: string): Promise<SessionView> {
    return fetch(`${this.baseUrl}/sessions/${id}`).then(decode);
  }

  stepSession(id: string, event: string): Promise<SessionView> {
    return fetch(`${this.baseUrl}/sessions/${id}/step`, {
      method: "POST",
      headers: { "content-type": "application/json" },
      body: JSON.stringify({ event }),
    }).then(decode);
  }

  resetSession(id: string): Promise<SessionView> {
    return fetch(`${this.baseUrl}/sessions/${id}/reset`, { method: "POST" }).then(decode);
  }

  async deleteSession(id: string): Promise<void> {
    const response = await fetch(`${this.baseUrl}/sessions/${id}`, { method: "DELETE" });
    if (!response.ok && response.status !== 404) {
      throw new ApiError(response.status, `HTTP ${response.status}`);
    }
  }
}

/** Service base URL: `?api=...` query parameter, else the default port. */
export function resolveBaseUrl(search: string): string {
  const fromQuery = new URLSearchParams(search).get("api");
  return (fromQuery ?? "http://127.0.0.1:7420").replace(/\/+$/, "");
}

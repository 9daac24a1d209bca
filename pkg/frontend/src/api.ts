/** HTTP client for the game host. Only the documented endpoints are used;
 * the fetch function is injectable so tests run without a server. */

import type {
  BidAck,
  EventPage,
  JoinInfo,
  StateView,
} from "./types.js";

export class ApiError extends Error {
  constructor(
    readonly status: number,
    message: string,
  ) {
    super(message);
    this.name = "ApiError";
  }
}

type FetchLike = (input: string, init?: RequestInit) => Promise<Response>;

async function parseError(response: Response): Promise<never> {
  let message = `HTTP ${response.status}`;
  try {
    const body = (await response.json()) as { error?: string };
    if (body.error) {
      message = body.error;
    }
  } catch {
    // non-JSON error body: keep the status line
  }
  throw new ApiError(response.status, message);
}

export class GameApi {
  constructor(
    private readonly baseUrl: string,
    private readonly fetchFn: FetchLike = (input, init) => fetch(input, init),
  ) {}

  private async request<T>(path: string, init?: RequestInit): Promise<T> {
    const response = await this.fetchFn(`${this.baseUrl}${path}`, init);
    if (!response.ok) {
      await parseError(response);
    }
    return (await response.json()) as T;
  }

  join(sessionId: string, token: string): Promise<JoinInfo> {
    return this.request<JoinInfo>(`/sessions/${sessionId}/join`, {
      method: "POST",
      headers: { "content-type": "application/json" },
      body: JSON.stringify({ token }),
    });
  }

  state(sessionId: string, token?: string): Promise<StateView> {
    const query = token ? `?token=${encodeURIComponent(token)}` : "";
    return this.request<StateView>(`/sessions/${sessionId}/state${query}`);
  }

  submitBid(
    sessionId: string,
    token: string,
    amount: number | null,
  ): Promise<BidAck> {
    return this.request<BidAck>(`/sessions/${sessionId}/bid`, {
      method: "POST",
      headers: { "content-type": "application/json" },
      body: JSON.stringify({ token, amount }),
    });
  }

  events(sessionId: string, since: number): Promise<EventPage> {
    return this.request<EventPage>(`/sessions/${sessionId}/events?since=${since}`);
  }

  /** ws:// or wss:// address of the push channel for this session. */
  wsUrl(sessionId: string, since: number, origin: string): string {
    const base = this.baseUrl || origin;
    const scheme = base.startsWith("https") ? "wss" : "ws";
    const host = base.replace(/^https?:\/\//, "");
    return `${scheme}://${host}/sessions/${sessionId}/ws?since=${since}`;
  }
}

/** Entry point: join with ?session=...&token=..., subscribe to the push
 * channel (polling fallback), and re-render on every server push. */

import { ApiError, GameApi } from "./api.js";
import {
  formatCountdown,
  remainingSeconds,
  takeSnapshot,
  type CountdownSnapshot,
} from "./countdown.js";
import { advanceCursor, shouldRefresh } from "./model.js";
import { BidForm, renderApp, renderErrorScreen, updateCountdown } from "./ui.js";
import type { StateView } from "./types.js";

const POLL_INTERVAL_MS = 2000;
const TICK_INTERVAL_MS = 250;

interface Session {
  api: GameApi;
  sessionId: string;
  token: string;
}

class App {
  private readonly root: HTMLElement;
  private readonly form: BidForm;
  private state: StateView | null = null;
  private snapshot: CountdownSnapshot | null = null;
  private cursor = 0;
  private pollTimer: number | null = null;

  constructor(private readonly session: Session) {
    this.root = document.getElementById("app") as HTMLElement;
    this.form = new BidForm({
      submit: (amount) => void this.sendBid(amount),
      abstain: () => void this.sendBid(null),
    });
    window.setInterval(() => this.tick(), TICK_INTERVAL_MS);
  }

  async start(): Promise<void> {
    await this.session.api.join(this.session.sessionId, this.session.token);
    await this.refresh();
    this.subscribe();
  }

  private async refresh(): Promise<void> {
    const state = await this.session.api.state(
      this.session.sessionId,
      this.session.token,
    );
    this.state = state;
    this.snapshot = takeSnapshot(state.seconds_remaining, Date.now());
    renderApp(this.root, state, this.form);
    this.tick();
  }

  private tick(): void {
    if (!this.state) {
      return;
    }
    if (this.state.phase !== "bidding") {
      updateCountdown(this.root, "");
      return;
    }
    const left = remainingSeconds(this.snapshot, Date.now());
    if (left === null) {
      return;
    }
    updateCountdown(this.root, `Bids close in ${formatCountdown(left)}`);
    if (left === 0) {
      // deadline passed: the server settles; pick up the announcement
      void this.refresh();
    }
  }

  private async sendBid(amount: number | null): Promise<void> {
    try {
      await this.session.api.submitBid(
        this.session.sessionId,
        this.session.token,
        amount,
      );
      this.form.clearInput();
      await this.refresh();
    } catch (error) {
      if (error instanceof ApiError) {
        this.form.showError(error.message);
        return;
      }
      throw error;
    }
  }

  private subscribe(): void {
    let socket: WebSocket;
    try {
      socket = new WebSocket(
        this.session.api.wsUrl(
          this.session.sessionId,
          this.cursor,
          window.location.origin,
        ),
      );
    } catch {
      this.startPolling();
      return;
    }
    socket.addEventListener("message", (message) => {
      const event = JSON.parse(message.data as string) as { seq: number };
      if (event.seq >= this.cursor) {
        this.cursor = event.seq + 1;
        void this.refresh();
      }
    });
    socket.addEventListener("close", () => this.startPolling());
    socket.addEventListener("error", () => socket.close());
  }

  private startPolling(): void {
    if (this.pollTimer !== null || this.state?.phase === "finished") {
      return;
    }
    this.pollTimer = window.setInterval(async () => {
      try {
        const page = await this.session.api.events(
          this.session.sessionId,
          this.cursor,
        );
        if (shouldRefresh(this.cursor, page.events)) {
          this.cursor = advanceCursor(this.cursor, page.events);
          await this.refresh();
        }
        if (this.state?.phase === "finished" && this.pollTimer !== null) {
          window.clearInterval(this.pollTimer);
          this.pollTimer = null;
        }
      } catch {
        // transient poll failure: keep trying
      }
    }, POLL_INTERVAL_MS);
  }
}

function readParams(): Session | null {
  const params = new URLSearchParams(window.location.search);
  const sessionId = params.get("session");
  const token = params.get("token");
  if (!sessionId || !token) {
    return null;
  }
  const server = params.get("server") ?? "";
  return { api: new GameApi(server), sessionId, token };
}

async function boot(): Promise<void> {
  const root = document.getElementById("app") as HTMLElement;
  const session = readParams();
  if (!session) {
    renderErrorScreen(
      root,
      "Open this page with ?session=<id>&token=<seat token> from your invite.",
    );
    return;
  }
  const app = new App(session);
  try {
    await app.start();
  } catch (error) {
    const message =
      error instanceof ApiError
        ? error.message
        : "The game server is unreachable.";
    renderErrorScreen(root, message);
  }
}

void boot();

/** DOM rendering. Renders are idempotent: every server push rebuilds the
 * status, roster, and announcement sections from the latest state. The bid
 * form is a persistent element so typing survives re-renders. */

import {
  canBid,
  checkBidInput,
  hpBar,
  nwdWarning,
  phaseLabel,
  sealedIndicator,
  survivors,
} from "./model.js";
import type { StateView } from "./types.js";

function el<K extends keyof HTMLElementTagNameMap>(
  tag: K,
  className?: string,
  text?: string,
): HTMLElementTagNameMap[K] {
  const node = document.createElement(tag);
  if (className) {
    node.className = className;
  }
  if (text !== undefined) {
    node.textContent = text;
  }
  return node;
}

export interface BidHandlers {
  submit(amount: number): void;
  abstain(): void;
}

export class BidForm {
  readonly element: HTMLElement;
  private readonly input: HTMLInputElement;
  private readonly bidButton: HTMLButtonElement;
  private readonly abstainButton: HTMLButtonElement;
  private readonly error: HTMLElement;
  private readonly sealed: HTMLElement;
  private balance = 0;

  constructor(handlers: BidHandlers) {
    this.element = el("div", "bid-form");
    this.input = el("input");
    this.input.type = "text";
    this.input.inputMode = "numeric";
    this.input.placeholder = "your sealed bid in $";
    this.bidButton = el("button", "", "Bid");
    this.abstainButton = el("button", "secondary", "Abstain today");
    this.error = el("p", "error");
    this.sealed = el("p", "sealed");
    this.element.append(
      this.input,
      this.bidButton,
      this.abstainButton,
      this.error,
      this.sealed,
    );

    const submit = () => {
      const check = checkBidInput(this.input.value, this.balance);
      if (!check.ok || check.amount === undefined) {
        this.showError(check.error ?? "Invalid bid.");
        return;
      }
      this.showError("");
      handlers.submit(check.amount);
    };
    this.bidButton.addEventListener("click", submit);
    this.input.addEventListener("keydown", (event) => {
      if (event.key === "Enter") {
        submit();
      }
    });
    this.abstainButton.addEventListener("click", () => {
      this.showError("");
      handlers.abstain();
    });
  }

  update(state: StateView): void {
    const open = canBid(state);
    this.balance = state.you?.balance ?? 0;
    this.input.disabled = !open;
    this.bidButton.disabled = !open;
    this.abstainButton.disabled = !open;
    const indicator = sealedIndicator(state);
    this.sealed.textContent = indicator.text;
    if (!open) {
      this.showError("");
    }
  }

  /** Server rejections land here too, verbatim. */
  showError(message: string): void {
    this.error.textContent = message;
  }

  clearInput(): void {
    this.input.value = "";
  }
}

function renderStatus(state: StateView): HTMLElement {
  const section = el("section", "status");
  section.append(el("h2", "", phaseLabel(state)));
  const facts = el("p", "facts");
  const parts: string[] = [];
  if (state.day > 0 && state.supply !== null) {
    parts.push(`Today's supply: ${state.supply} units`);
  }
  parts.push(`Session ${state.session_id}`);
  facts.textContent = parts.join("  ·  ");
  section.append(facts);
  const countdown = el("p", "countdown");
  countdown.dataset.countdown = "";
  section.append(countdown);
  if (state.phase === "finished") {
    const names = survivors(state);
    section.append(
      el(
        "p",
        "survivors",
        names.length
          ? `Survivors: ${names.join(", ")}`
          : "No one survived.",
      ),
    );
  }
  return section;
}

function renderPlayers(state: StateView): HTMLElement {
  const section = el("section", "players");
  for (const player of state.players) {
    const row = el("div", player.alive ? "player" : "player eliminated");
    const isYou = state.you?.player_id === player.id;
    const title = el(
      "p",
      "name",
      `${player.name}${isYou ? " (you)" : ""} · needs ${player.requirement} units · $${player.salary}/day · ${player.control}`,
    );
    row.append(title);

    const bar = hpBar(player.hp);
    const barOuter = el("div", "hp-bar");
    const barInner = el("div", "hp-fill");
    barInner.style.width = `${bar.fraction * 100}%`;
    barOuter.append(barInner);
    barOuter.title = `${bar.filled}/${bar.max} HP`;
    row.append(barOuter);

    const stats = el(
      "p",
      "stats",
      player.alive
        ? `HP ${player.hp}/10 · balance $${player.balance}`
        : "eliminated",
    );
    row.append(stats);

    const warning = nwdWarning(player.no_water_days);
    if (player.alive && warning.level !== "none") {
      row.append(el("p", `nwd ${warning.level}`, warning.message));
    }
    section.append(row);
  }
  return section;
}

function renderAnnouncements(state: StateView): HTMLElement {
  const section = el("section", "announcements");
  if (state.announcements.length) {
    section.append(el("h3", "", "Announcements"));
  }
  // verbatim server text, newest first
  for (let i = state.announcements.length - 1; i >= 0; i -= 1) {
    section.append(el("pre", "announcement", state.announcements[i]));
  }
  return section;
}

export function renderApp(
  root: HTMLElement,
  state: StateView,
  form: BidForm | null,
): void {
  root.textContent = "";
  root.append(renderStatus(state));
  if (form) {
    form.update(state);
    if (canBid(state)) {
      root.append(form.element);
    }
  }
  root.append(renderPlayers(state));
  root.append(renderAnnouncements(state));
}

export function renderErrorScreen(root: HTMLElement, message: string): void {
  root.textContent = "";
  const section = el("section", "fatal");
  section.append(el("h2", "", "Could not join"));
  section.append(el("p", "", message));
  root.append(section);
}

export function updateCountdown(root: HTMLElement, text: string): void {
  const node = root.querySelector<HTMLElement>("[data-countdown]");
  if (node) {
    node.textContent = text;
  }
}

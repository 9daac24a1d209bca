/** Pure view-model helpers: everything here is a function of server data,
 * testable without a DOM. */

import type { GameEvent, StateView } from "./types.js";

export const HP_BAR_MAX = 10;

export interface HpBar {
  filled: number;
  max: number;
  fraction: number;
}

/** Clamp HP into the 0..max bar range (a death day can record negative HP). */
export function hpBar(hp: number, max: number = HP_BAR_MAX): HpBar {
  const filled = Math.min(Math.max(hp, 0), max);
  return { filled, max, fraction: filled / max };
}

export type NwdLevel = "none" | "notice" | "warning" | "danger";

export interface NwdWarning {
  level: NwdLevel;
  message: string;
}

/** Escalating no-water warning: the penalty grows with the streak, so the
 * styling does too. The numbers come from the server; this only labels them. */
export function nwdWarning(noWaterDays: number): NwdWarning {
  if (noWaterDays <= 0) {
    return { level: "none", message: "" };
  }
  const base = `${noWaterDays} day${noWaterDays === 1 ? "" : "s"} without water`;
  if (noWaterDays === 1) {
    return { level: "notice", message: base };
  }
  if (noWaterDays === 2) {
    return { level: "warning", message: `${base} - the HP penalty is growing` };
  }
  return { level: "danger", message: `${base} - elimination is close` };
}

export interface BidCheck {
  ok: boolean;
  amount?: number;
  error?: string;
}

/** Client-side gate for the bid form. Mirrors the server's checks so the
 * common mistakes get inline feedback, but the server re-validates. */
export function checkBidInput(raw: string, balance: number): BidCheck {
  const text = raw.trim();
  if (text === "") {
    return { ok: false, error: "Enter an amount or abstain." };
  }
  if (!/^\d+$/.test(text)) {
    return { ok: false, error: "Whole dollar amounts only." };
  }
  const amount = Number(text);
  if (amount < 1) {
    return { ok: false, error: "Bids start at $1." };
  }
  if (amount > balance) {
    return { ok: false, error: `That exceeds your balance of $${balance}.` };
  }
  return { ok: true, amount };
}

export function phaseLabel(state: StateView): string {
  switch (state.phase) {
    case "lobby":
      return "Waiting for all human players to join";
    case "bidding":
      return `Day ${state.day}: bidding open`;
    case "announcing":
      return `Day ${state.day}: results`;
    case "finished":
      return "Game over";
    default:
      return state.phase;
  }
}

export function survivors(state: StateView): string[] {
  return state.players.filter((p) => p.alive).map((p) => p.name);
}

/** True when the bid form should accept input for this view. */
export function canBid(state: StateView): boolean {
  return state.phase === "bidding" && state.you !== undefined && state.you.alive;
}

export interface SealedIndicator {
  sealed: boolean;
  text: string;
}

export function sealedIndicator(state: StateView): SealedIndicator {
  const bid = state.you?.your_bid;
  if (!bid) {
    return { sealed: false, text: "" };
  }
  if (bid.amount === null) {
    return { sealed: true, text: "Abstaining today (sealed)" };
  }
  return { sealed: true, text: `Bid $${bid.amount} sealed until the deadline` };
}

/** Advance the event cursor past everything seen; events may repeat across
 * reconnects, so already-seen sequence numbers are ignored. */
export function advanceCursor(cursor: number, events: GameEvent[]): number {
  let next = cursor;
  for (const event of events) {
    if (event.seq >= next) {
      next = event.seq + 1;
    }
  }
  return next;
}

/** Every event can change visible state, so each push triggers one state
 * refetch; this only filters out pages that carried nothing new. */
export function shouldRefresh(cursor: number, events: GameEvent[]): boolean {
  return events.some((event) => event.seq >= cursor);
}

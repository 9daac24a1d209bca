/** Server payload shapes. The client renders these verbatim: every rule
 * lives server-side, so nothing here is computed locally. */

export type SeatControl = "human" | "scripted" | "llm";

export interface PlayerRow {
  id: string;
  name: string;
  requirement: number;
  salary: number;
  control: SeatControl;
  hp: number;
  balance: number;
  no_water_days: number;
  alive: boolean;
}

export interface OwnSeat {
  player_id: string;
  hp: number;
  balance: number;
  no_water_days: number;
  alive: boolean;
  /** null until something was submitted; amount null means explicit abstain. */
  your_bid: { amount: number | null } | null;
}

export interface StateView {
  session_id: string;
  phase: string;
  day: number;
  supply: number | null;
  players: PlayerRow[];
  announcements: string[];
  seconds_remaining: number | null;
  you?: OwnSeat;
}

export interface JoinInfo {
  player_id: string;
  name: string;
  requirement: number;
  salary: number;
  phase: string;
  day: number;
}

export interface BidAck {
  recorded: boolean;
  day: number;
  amount: number | null;
}

export interface GameEvent {
  seq: number;
  type: string;
  [key: string]: unknown;
}

export interface EventPage {
  events: GameEvent[];
  next: number;
}

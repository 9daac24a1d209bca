// @vitest-environment happy-dom
import { beforeEach, describe, expect, it } from "vitest";

import { BidForm, renderApp, renderErrorScreen, updateCountdown } from "../src/ui.js";
import type { PlayerRow, StateView } from "../src/types.js";

function roster(): PlayerRow[] {
  return [
    {
      id: "alex",
      name: "Alex",
      requirement: 8,
      salary: 70,
      control: "human",
      hp: 8,
      balance: 70,
      no_water_days: 0,
      alive: true,
    },
    {
      id: "bob",
      name: "Bob",
      requirement: 9,
      salary: 75,
      control: "scripted",
      hp: 5,
      balance: 150,
      no_water_days: 2,
      alive: true,
    },
    {
      id: "cindy",
      name: "Cindy",
      requirement: 10,
      salary: 100,
      control: "scripted",
      hp: -1,
      balance: 0,
      no_water_days: 4,
      alive: false,
    },
  ];
}

function biddingState(): StateView {
  return {
    session_id: "s1",
    phase: "bidding",
    day: 2,
    supply: 17,
    players: roster(),
    announcements: ["WATER ALLOCATION - DAY 1\n\nfirst day text"],
    seconds_remaining: 42,
    you: {
      player_id: "alex",
      hp: 8,
      balance: 70,
      no_water_days: 0,
      alive: true,
      your_bid: null,
    },
  };
}

let root: HTMLElement;

beforeEach(() => {
  document.body.innerHTML = "";
  root = document.createElement("div");
  document.body.append(root);
});

describe("renderApp", () => {
  it("shows phase, supply, roster, and announcements from server data", () => {
    renderApp(root, biddingState(), null);
    expect(root.querySelector("h2")?.textContent).toBe("Day 2: bidding open");
    expect(root.querySelector(".facts")?.textContent).toContain(
      "Today's supply: 17 units",
    );
    const names = Array.from(root.querySelectorAll(".player .name")).map(
      (node) => node.textContent,
    );
    expect(names[0]).toBe("Alex (you) · needs 8 units · $70/day · human");
    expect(names).toHaveLength(3);
    expect(root.querySelector("pre.announcement")?.textContent).toContain(
      "WATER ALLOCATION - DAY 1",
    );
  });

  it("drives the HP bar width from current HP and clamps the dead at zero", () => {
    renderApp(root, biddingState(), null);
    const fills = root.querySelectorAll<HTMLElement>(".hp-fill");
    expect(fills[0]?.style.width).toBe("80%");
    expect(fills[1]?.style.width).toBe("50%");
    expect(fills[2]?.style.width).toBe("0%");
  });

  it("escalates the no-water warning and drops it for the eliminated", () => {
    renderApp(root, biddingState(), null);
    const rows = root.querySelectorAll(".players > div");
    expect(rows[0]?.querySelector(".nwd")).toBeNull();
    expect(rows[1]?.querySelector(".nwd.warning")).not.toBeNull();
    expect(rows[2]?.querySelector(".nwd")).toBeNull();
    expect(rows[2]?.textContent).toContain("eliminated");
  });

  it("renders announcements newest first, verbatim", () => {
    const state = biddingState();
    state.announcements = ["day 1 text", "day 2 text\nwith lines"];
    renderApp(root, state, null);
    const blocks = root.querySelectorAll("pre.announcement");
    expect(blocks[0]?.textContent).toBe("day 2 text\nwith lines");
    expect(blocks[1]?.textContent).toBe("day 1 text");
  });

  it("is idempotent under repeated pushes of the same state", () => {
    const form = new BidForm({ submit: () => {}, abstain: () => {} });
    renderApp(root, biddingState(), form);
    const first = root.innerHTML;
    renderApp(root, biddingState(), form);
    renderApp(root, biddingState(), form);
    expect(root.innerHTML).toBe(first);
    expect(root.querySelectorAll(".bid-form")).toHaveLength(1);
  });

  it("lists survivors once the game is over and hides the bid form", () => {
    const form = new BidForm({ submit: () => {}, abstain: () => {} });
    const state = biddingState();
    state.phase = "finished";
    state.seconds_remaining = null;
    renderApp(root, state, form);
    expect(root.querySelector(".survivors")?.textContent).toBe(
      "Survivors: Alex, Bob",
    );
    expect(root.querySelector(".bid-form")).toBeNull();
  });
});

describe("BidForm", () => {
  it("validates locally before calling the submit handler", () => {
    const submitted: number[] = [];
    const form = new BidForm({
      submit: (amount) => submitted.push(amount),
      abstain: () => {},
    });
    renderApp(root, biddingState(), form);
    const input = form.element.querySelector("input")!;
    const bid = form.element.querySelectorAll("button")[0]!;

    input.value = "500";
    bid.click();
    expect(submitted).toEqual([]);
    expect(form.element.querySelector(".error")?.textContent).toContain(
      "$70",
    );

    input.value = "45";
    bid.click();
    expect(submitted).toEqual([45]);
    expect(form.element.querySelector(".error")?.textContent).toBe("");
  });

  it("offers an explicit abstain that skips validation", () => {
    let abstained = 0;
    const form = new BidForm({
      submit: () => {},
      abstain: () => {
        abstained += 1;
      },
    });
    renderApp(root, biddingState(), form);
    const abstain = form.element.querySelectorAll("button")[1]!;
    abstain.click();
    expect(abstained).toBe(1);
  });

  it("shows the sealed confirmation after a submission", () => {
    const form = new BidForm({ submit: () => {}, abstain: () => {} });
    const state = biddingState();
    state.you = { ...state.you!, your_bid: { amount: 45 } };
    renderApp(root, state, form);
    expect(form.element.querySelector(".sealed")?.textContent).toContain(
      "$45",
    );
  });

  it("disables controls outside the bidding window", () => {
    const form = new BidForm({ submit: () => {}, abstain: () => {} });
    const state = biddingState();
    state.phase = "announcing";
    state.seconds_remaining = null;
    form.update(state);
    expect(form.element.querySelector("input")?.disabled).toBe(true);
    const buttons = form.element.querySelectorAll("button");
    expect(buttons[0]?.disabled).toBe(true);
    expect(buttons[1]?.disabled).toBe(true);
  });

  it("relays server rejections verbatim", () => {
    const form = new BidForm({ submit: () => {}, abstain: () => {} });
    form.showError("bid exceeds balance of $70");
    expect(form.element.querySelector(".error")?.textContent).toBe(
      "bid exceeds balance of $70",
    );
  });
});

describe("chrome", () => {
  it("updates the countdown node in place", () => {
    renderApp(root, biddingState(), null);
    updateCountdown(root, "Bids close in 0:41");
    expect(root.querySelector("[data-countdown]")?.textContent).toBe(
      "Bids close in 0:41",
    );
  });

  it("renders a join failure screen", () => {
    renderErrorScreen(root, "unknown or expired token");
    expect(root.querySelector("h2")?.textContent).toBe("Could not join");
    expect(root.textContent).toContain("unknown or expired token");
  });
});

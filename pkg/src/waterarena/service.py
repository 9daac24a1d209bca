"""Long-running game host for mixed human / scripted / LLM rosters.

One authoritative state machine per session, guarded by a lock and advanced
lazily: every request first calls poll(), which settles any bidding phase
whose deadline has passed against an injectable clock. Human bids are held
sealed until settlement; scripted and LLM seat decisions are computed at
settlement time, so during bidding they do not exist anywhere. An optional
background ticker keeps sessions moving when no client is polling.

Phases: lobby -> bidding(day) -> announcing(day) -> bidding(day+1) ... ->
finished. Sessions with no human seats run to completion at creation.
"""

from __future__ import annotations

import asyncio
import json
import secrets
import threading
import time
import uuid
from dataclasses import dataclass, field
from pathlib import Path
from typing import Callable, Dict, List, Mapping, Optional

from fastapi import Body, FastAPI, Query, WebSocket, WebSocketDisconnect
from fastapi.responses import JSONResponse

from .agents.base import Agent, AgentView
from .agents.prompts import (
    render_participants_info,
    render_results_announcement,
)
from .agents.scripted import ScriptedAgent, make_strategy
from .engine import (
    Bid,
    ConfigError,
    Game,
    GameConfig,
    GameRecord,
    ProtocolError,
    config_for_abundance,
    default_roster,
)
from .records import dumps_canonical

DEFAULT_BIDDING_WINDOW = 120.0
DEFAULT_ANNOUNCE_WINDOW = 10.0


class ServiceError(Exception):
    def __init__(self, status: int, message: str):
        super().__init__(message)
        self.status = status
        self.message = message


@dataclass(frozen=True)
class Seat:
    player_id: str
    kind: str  # human | scripted | llm
    strategy: Optional[str] = None


ABSTAIN = None


@dataclass
class _HumanBid:
    amount: Optional[int]
    explicit: bool


class LiveSession:
    def __init__(
        self,
        config: GameConfig,
        seats: Mapping[str, Seat],
        clock: Callable[[], float],
        bidding_window: float = DEFAULT_BIDDING_WINDOW,
        announce_window: float = DEFAULT_ANNOUNCE_WINDOW,
        agent_builder: Optional[Callable[[GameConfig, Seat], Agent]] = None,
    ):
        roster_ids = {spec.id for spec in config.roster}
        if set(seats) != roster_ids:
            raise ConfigError("seat plan must cover every roster player exactly once")
        self.session_id = uuid.uuid4().hex[:12]
        self.config = config
        self.seats = dict(seats)
        self.clock = clock
        self.bidding_window = bidding_window
        self.announce_window = announce_window
        self.game = Game(config)
        self.lock = threading.RLock()
        self.phase = "lobby"
        self.day = 0
        self.supply: Optional[int] = None
        self.deadline: Optional[float] = None
        self.announce_until: Optional[float] = None
        self.events: List[dict] = []
        self.announcements: List[str] = []
        self.tokens: Dict[str, str] = {}
        self.joined: set = set()
        self.pending: Dict[str, _HumanBid] = {}
        self.record: Optional[GameRecord] = None
        self._names = {spec.id: spec.name for spec in config.roster}

        self.agents: Dict[str, Agent] = {}
        for pid, seat in self.seats.items():
            if seat.kind == "human":
                self.tokens[secrets.token_urlsafe(12)] = pid
            elif seat.kind == "scripted":
                self.agents[pid] = ScriptedAgent(pid, make_strategy(seat.strategy or ""))
            elif seat.kind == "llm":
                if agent_builder is None:
                    raise ConfigError("llm seats need a configured gateway")
                self.agents[pid] = agent_builder(config, seat)
            else:
                raise ConfigError(f"unknown seat kind {seat.kind!r}")

        self._emit("session_created", seats={pid: s.kind for pid, s in seats.items()})
        if not self.tokens:
            self._run_headless()

    # -- events -----------------------------------------------------------

    def _emit(self, kind: str, **payload):
        self.events.append({"seq": len(self.events), "type": kind, **payload})

    def events_since(self, since: int) -> List[dict]:
        with self.lock:
            self.poll()
            return self.events[since:]

    # -- seat helpers -------------------------------------------------------

    def _seat_for_token(self, token: str) -> str:
        pid = self.tokens.get(token or "")
        if pid is None:
            raise ServiceError(403, "invalid seat token")
        return pid

    def _human_ids(self) -> List[str]:
        return [pid for pid, seat in self.seats.items() if seat.kind == "human"]

    def _living_humans(self) -> List[str]:
        living = set(self.game.living)
        return [pid for pid in self._human_ids() if pid in living]

    # -- phase machine ------------------------------------------------------

    def _run_headless(self):
        while not self.game.finished:
            self._begin_bidding()
        self._finish()

    def join(self, token: str) -> dict:
        with self.lock:
            self.poll()
            pid = self._seat_for_token(token)
            self.joined.add(pid)
            self._emit("seat_joined", player_id=pid)
            if self.phase == "lobby" and self.joined == set(self._human_ids()):
                self._begin_bidding()
                if self.game.finished:
                    self._finish()
            spec = next(s for s in self.config.roster if s.id == pid)
            return {
                "player_id": pid,
                "name": spec.name,
                "requirement": spec.requirement,
                "salary": spec.salary,
                "phase": self.phase,
                "day": self.day,
            }

    def _begin_bidding(self):
        start = self.game.begin_day()
        self.day = start.day
        self.supply = start.supply
        self.pending = {}
        if self._living_humans():
            self.phase = "bidding"
            self.deadline = self.clock() + self.bidding_window
            self._emit(
                "day_started", day=self.day, supply=self.supply, deadline=self.deadline
            )
        else:
            self.phase = "bidding"
            self.deadline = self.clock()
            self._emit("day_started", day=self.day, supply=self.supply, deadline=self.deadline)
            self._settle()

    def _settle(self):
        start_states = self.game.states
        living = list(self.game.living)
        bids: List[Bid] = []
        for pid in living:
            seat = self.seats[pid]
            if seat.kind == "human":
                held = self.pending.get(pid)
                if held is None:
                    bids.append(Bid(pid, ABSTAIN, "missed deadline"))
                elif held.amount is None:
                    bids.append(Bid(pid, ABSTAIN, "declined"))
                else:
                    bids.append(Bid(pid, held.amount, "human"))
            else:
                state = start_states[pid]
                view = AgentView(
                    player_id=pid,
                    name=self._names[pid],
                    day=self.day,
                    supply=self.supply,
                    hp=state.hp,
                    balance=state.balance,
                    no_water_days=state.no_water_days,
                )
                decision = self.agents[pid].decide(view)
                bids.append(Bid(pid, decision.amount, decision.reason))
        round_record = self.game.step_day(bids)
        announcement = render_results_announcement(round_record, self.config.roster)
        info = render_participants_info(self.game.states, self.config.roster)
        self.announcements.append(announcement)
        for pid in self.game.living:
            if self.seats[pid].kind != "human":
                self.agents[pid].observe_round(self.day, announcement, info)
        self._emit(
            "announcement",
            day=self.day,
            text=announcement,
            participants_info=info,
            eliminated=list(round_record.eliminated),
        )
        self.phase = "announcing"
        self.announce_until = self.clock() + self.announce_window
        self._advance_if_due()

    def _advance_if_due(self):
        while True:
            if self.phase == "bidding" and self.clock() >= self.deadline:
                self._settle()
                continue
            if self.phase == "announcing" and self.clock() >= self.announce_until:
                if self.game.finished:
                    self._finish()
                else:
                    self._begin_bidding()
                continue
            return

    def _finish(self):
        self.phase = "finished"
        self.record = self.game.record()
        survivors = [pid for pid, s in self.record.final_states.items() if s.alive]
        self._emit("finished", day=self.day, survivors=sorted(survivors))

    def poll(self):
        with self.lock:
            if self.phase in ("lobby", "finished"):
                return
            self._advance_if_due()

    # -- client operations ----------------------------------------------------

    def submit_bid(self, token: str, amount) -> dict:
        with self.lock:
            self.poll()
            pid = self._seat_for_token(token)
            if self.phase != "bidding":
                raise ServiceError(409, f"not accepting bids in phase {self.phase!r}")
            if pid not in self.game.living:
                raise ServiceError(403, "seat is eliminated")
            if amount is not None:
                if not isinstance(amount, int) or isinstance(amount, bool):
                    raise ServiceError(400, "amount must be an integer or null")
                balance = self.game.states[pid].balance
                if amount < 1:
                    raise ServiceError(400, "bid must be a positive amount")
                if amount > balance:
                    raise ServiceError(
                        400, f"bid ${amount} exceeds your balance ${balance}"
                    )
            self.pending[pid] = _HumanBid(amount=amount, explicit=True)
            return {"recorded": True, "day": self.day, "amount": amount}

    def state_view(self, token: Optional[str] = None) -> dict:
        with self.lock:
            self.poll()
            states = self.game.states
            players = [
                {
                    "id": spec.id,
                    "name": spec.name,
                    "requirement": spec.requirement,
                    "salary": spec.salary,
                    "control": self.seats[spec.id].kind,
                    "hp": states[spec.id].hp,
                    "balance": states[spec.id].balance,
                    "no_water_days": states[spec.id].no_water_days,
                    "alive": states[spec.id].alive,
                }
                for spec in self.config.roster
            ]
            view = {
                "session_id": self.session_id,
                "phase": self.phase,
                "day": self.day,
                "supply": self.supply,
                "players": players,
                "announcements": list(self.announcements),
                "seconds_remaining": (
                    max(0.0, self.deadline - self.clock())
                    if self.phase == "bidding"
                    else None
                ),
            }
            if token:
                pid = self._seat_for_token(token)
                own = states[pid]
                held = self.pending.get(pid)
                view["you"] = {
                    "player_id": pid,
                    "hp": own.hp,
                    "balance": own.balance,
                    "no_water_days": own.no_water_days,
                    "alive": own.alive,
                    "your_bid": (
                        {"amount": held.amount} if held is not None else None
                    ),
                }
            return view


class SessionManager:
    def __init__(
        self,
        records_dir: Optional[Path] = None,
        clock: Callable[[], float] = time.monotonic,
        agent_builder: Optional[Callable[[GameConfig, Seat], Agent]] = None,
    ):
        self.sessions: Dict[str, LiveSession] = {}
        self.records_dir = Path(records_dir) if records_dir else None
        self.clock = clock
        self.agent_builder = agent_builder
        self._ticker: Optional[threading.Thread] = None
        self._stop = threading.Event()
        self._persisted: set = set()
        self._persist_lock = threading.Lock()

    def create_session(
        self,
        seats: Mapping[str, Seat],
        abundance: str = "low",
        seed: int = 0,
        days: int = 20,
        bidding_window: float = DEFAULT_BIDDING_WINDOW,
        announce_window: float = DEFAULT_ANNOUNCE_WINDOW,
    ) -> LiveSession:
        config = config_for_abundance(abundance, default_roster(), seed=seed, days=days)
        session = LiveSession(
            config,
            seats,
            clock=self.clock,
            bidding_window=bidding_window,
            announce_window=announce_window,
            agent_builder=self.agent_builder,
        )
        self.sessions[session.session_id] = session
        if session.record is not None:
            self._persist(session)
        return session

    def get(self, session_id: str) -> LiveSession:
        session = self.sessions.get(session_id)
        if session is None:
            raise ServiceError(404, f"no session {session_id!r}")
        return session

    def _persist(self, session: LiveSession):
        # Called after any request that may have finished the session;
        # appends each finished record exactly once.
        if self.records_dir is None or session.record is None:
            return
        with self._persist_lock:
            if session.session_id in self._persisted:
                return
            self._persisted.add(session.session_id)
            self.records_dir.mkdir(parents=True, exist_ok=True)
            with (self.records_dir / "sessions.jsonl").open("a") as handle:
                handle.write(dumps_canonical(session.record) + "\n")

    def poll_all(self):
        for session in list(self.sessions.values()):
            session.poll()
            self._persist(session)

    def start_ticker(self, interval: float = 1.0):
        if self._ticker is not None:
            return

        def run():
            while not self._stop.wait(interval):
                self.poll_all()

        self._ticker = threading.Thread(target=run, daemon=True)
        self._ticker.start()

    def stop_ticker(self):
        self._stop.set()
        if self._ticker is not None:
            self._ticker.join(timeout=2)
            self._ticker = None


def _parse_seats(body: dict) -> Dict[str, Seat]:
    seats_body = body.get("seats")
    if not isinstance(seats_body, dict) or not seats_body:
        raise ServiceError(400, "body must include a seats object")
    seats: Dict[str, Seat] = {}
    for pid, entry in seats_body.items():
        if pid in seats:
            raise ServiceError(400, f"duplicate seat for {pid!r}")
        if isinstance(entry, str):
            entry = {"kind": entry}
        kind = entry.get("kind")
        if kind not in ("human", "scripted", "llm"):
            raise ServiceError(400, f"seat {pid!r} has unknown kind {kind!r}")
        seats[pid] = Seat(player_id=pid, kind=kind, strategy=entry.get("strategy"))
    return seats


def create_app(
    manager: Optional[SessionManager] = None,
    static_dir: Optional[Path] = None,
):
    manager = manager or SessionManager()
    app = FastAPI(title="water auction live service")
    app.state.manager = manager

    if static_dir is not None:
        from fastapi.staticfiles import StaticFiles

        app.mount("/app", StaticFiles(directory=static_dir, html=True), name="app")

    @app.exception_handler(ServiceError)
    async def service_error_handler(request, exc: ServiceError):
        return JSONResponse(status_code=exc.status, content={"error": exc.message})

    @app.exception_handler(ConfigError)
    async def config_error_handler(request, exc: ConfigError):
        return JSONResponse(status_code=400, content={"error": str(exc)})

    @app.exception_handler(ProtocolError)
    async def protocol_error_handler(request, exc: ProtocolError):
        return JSONResponse(status_code=400, content={"error": str(exc)})

    @app.post("/sessions")
    def create_session(body: dict = Body(...)):
        seats = _parse_seats(body)
        session = manager.create_session(
            seats,
            abundance=body.get("abundance", "low"),
            seed=body.get("seed", 0),
            days=body.get("days", 20),
            bidding_window=body.get("bidding_window", DEFAULT_BIDDING_WINDOW),
            announce_window=body.get("announce_window", DEFAULT_ANNOUNCE_WINDOW),
        )
        return {
            "session_id": session.session_id,
            "phase": session.phase,
            "tokens": {pid: token for token, pid in session.tokens.items()},
        }

    @app.post("/sessions/{session_id}/join")
    def join(session_id: str, body: dict = Body(...)):
        session = manager.get(session_id)
        result = session.join(body.get("token", ""))
        manager._persist(session)
        return result

    @app.get("/sessions/{session_id}/state")
    def state(session_id: str, token: Optional[str] = Query(default=None)):
        session = manager.get(session_id)
        result = session.state_view(token)
        manager._persist(session)
        return result

    @app.post("/sessions/{session_id}/bid")
    def bid(session_id: str, body: dict = Body(...)):
        session = manager.get(session_id)
        result = session.submit_bid(body.get("token", ""), body.get("amount"))
        manager._persist(session)
        return result

    @app.get("/sessions/{session_id}/events")
    def events(session_id: str, since: int = Query(default=0)):
        session = manager.get(session_id)
        items = session.events_since(since)
        manager._persist(session)
        return {"events": items, "next": since + len(items)}

    @app.get("/sessions/{session_id}/record")
    def record(session_id: str):
        live = manager.get(session_id)
        live.poll()
        manager._persist(live)
        if live.record is None:
            raise ServiceError(409, "session not finished")
        return json.loads(dumps_canonical(live.record))

    @app.websocket("/sessions/{session_id}/ws")
    async def websocket(ws: WebSocket, session_id: str, since: int = 0):
        await ws.accept()
        cursor = since
        try:
            session = manager.get(session_id)
        except ServiceError as exc:
            await ws.close(code=4404, reason=exc.message)
            return
        try:
            while True:
                items = session.events_since(cursor)
                for item in items:
                    await ws.send_json(item)
                cursor += len(items)
                if session.phase == "finished" and not items:
                    await ws.close()
                    return
                await asyncio.sleep(0.05)
        except WebSocketDisconnect:
            return

    return app

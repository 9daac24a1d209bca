"""Chat-model-backed player.

Each decision sends the full per-player context (system rules, all finished
rounds, current call). Unparseable or unaffordable responses get up to two
corrective re-asks appended to the same context; the round never blocks on
parsing. Only the final response of a round enters the transcript.
"""

from __future__ import annotations

from typing import Optional

from ..engine import GameConfig, PlayerSpec
from ..gateway import ChatGateway, ChatMessage, ChatRequest, GatewayError, RequestTag
from .base import Agent, AgentDecision, AgentView
from .context import AgentTranscript, RoundHistoryEntry, assemble_context
from .parsing import ParseFailure, parse_decision
from .prompts import render_bid_call, render_status, render_system_prompt

MAX_PARSE_RETRIES = 2


def _corrective_message(failure: ParseFailure) -> str:
    return (
        f"Your previous response could not be accepted: {failure.reason}. "
        "Please reply with a single bid as a dollar amount within your "
        "balance (for example: I bid $50), or state clearly that you will "
        "not participate today."
    )


class LLMAgent(Agent):
    def __init__(
        self,
        spec: PlayerSpec,
        config: GameConfig,
        gateway: ChatGateway,
        model: str,
        persona_enabled: bool = False,
        temperature: float = 0.7,
        max_tokens: int = 512,
        experiment: str = "",
        game_index: int = 0,
    ):
        super().__init__(spec.id)
        self.spec = spec
        self.gateway = gateway
        self.model = model
        self.temperature = temperature
        self.max_tokens = max_tokens
        self.experiment = experiment
        self.game_index = game_index
        self.transcript = AgentTranscript(
            player_id=spec.id,
            system_message=render_system_prompt(spec, config, persona_enabled),
        )
        self._pending_response: Optional[str] = None

    def _request(self, messages, day: int, attempt: int) -> ChatRequest:
        return ChatRequest(
            model=self.model,
            messages=tuple(ChatMessage(role, content) for role, content in messages),
            temperature=self.temperature,
            max_tokens=self.max_tokens,
            request_tag=RequestTag(
                experiment=self.experiment,
                game=self.game_index,
                round=day,
                player=self.player_id,
                attempt=attempt,
            ),
        )

    def decide(self, view: AgentView) -> AgentDecision:
        status = render_status(view.hp, view.balance, view.no_water_days)
        call = render_bid_call(view.name, view.day, view.supply, status)
        context = assemble_context(self.transcript, view.day, call)
        messages = context.to_messages()

        raw = ""
        try:
            raw = self.gateway.complete(self._request(messages, view.day, attempt=0))
            outcome = parse_decision(raw, view.balance)
            attempt = 0
            while isinstance(outcome, ParseFailure) and attempt < MAX_PARSE_RETRIES:
                attempt += 1
                messages = messages + [
                    ("assistant", raw),
                    ("user", _corrective_message(outcome)),
                ]
                raw = self.gateway.complete(
                    self._request(messages, view.day, attempt=attempt)
                )
                outcome = parse_decision(raw, view.balance)
        except GatewayError:
            self._pending_response = raw
            return AgentDecision.abstain(reason="gateway failure", raw_response=raw)

        self._pending_response = raw
        if isinstance(outcome, ParseFailure):
            return AgentDecision.abstain(reason="unparseable", raw_response=raw)
        return outcome

    def observe_round(self, day: int, announcement: str, participants_info: str) -> None:
        self.transcript.append(
            RoundHistoryEntry(
                day=day,
                own_response=self._pending_response or "",
                results_announcement=announcement,
                participants_info=participants_info,
            )
        )
        self._pending_response = None

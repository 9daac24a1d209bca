"""Per-player transcript and chat-context assembly.

The context for round n is the fixed message list
[S, r_1, b_1, i_1, ..., r_{n-1}, b_{n-1}, i_{n-1}, call_n]: the system
rules, then for each finished round the player's own response, the public
results announcement, and everyone's status, then the current bid call.
Nothing from the current round's other bidders ever enters the list.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import List, Tuple


class TranscriptCorruptionError(RuntimeError):
    """The stored history is not the contiguous range of finished rounds."""


@dataclass(frozen=True)
class RoundHistoryEntry:
    day: int
    own_response: str
    results_announcement: str
    participants_info: str


@dataclass
class AgentTranscript:
    player_id: str
    system_message: str
    entries: List[RoundHistoryEntry] = field(default_factory=list)

    def append(self, entry: RoundHistoryEntry) -> None:
        expected = self.entries[-1].day + 1 if self.entries else 1
        if entry.day != expected:
            raise TranscriptCorruptionError(
                f"player {self.player_id}: expected day {expected}, got {entry.day}"
            )
        self.entries.append(entry)


@dataclass(frozen=True)
class AgentContext:
    system_message: str
    history: Tuple[RoundHistoryEntry, ...]
    current_call: str

    def to_messages(self) -> List[Tuple[str, str]]:
        messages: List[Tuple[str, str]] = [("system", self.system_message)]
        for entry in self.history:
            messages.append(("assistant", entry.own_response))
            messages.append(("user", entry.results_announcement))
            messages.append(("user", entry.participants_info))
        messages.append(("user", self.current_call))
        return messages


def assemble_context(
    transcript: AgentTranscript, round_n: int, current_call: str
) -> AgentContext:
    days = [entry.day for entry in transcript.entries]
    if days != list(range(1, round_n)):
        raise TranscriptCorruptionError(
            f"player {transcript.player_id}: history days {days} do not cover"
            f" 1..{round_n - 1}"
        )
    return AgentContext(
        system_message=transcript.system_message,
        history=tuple(transcript.entries),
        current_call=current_call,
    )

"""Extract a bid or an abstention from free-form response text.

Responses often discuss several candidate numbers before settling, so the
last stated amount wins. A response with refusal language and no amount is
an abstention; anything else without an amount, or with an unaffordable or
non-positive amount, asks the caller to retry.
"""

from __future__ import annotations

import re
from dataclasses import dataclass

from .base import AgentDecision

# "$300", "$ 1,200"
_DOLLAR = re.compile(r"\$\s*(\d[\d,]*)")
# "bid 300", "bidding of 300 dollars"; stops at sentence breaks and digits
_BID_WORD = re.compile(r"\bbid(?:ding|s)?\b[^.\n\d$]{0,30}?(\d[\d,]*)", re.IGNORECASE)

_REFUSAL_PHRASES = (
    "sit out",
    "sit this one out",
    "abstain",
    "not participat",
    "no bid",
    "not bid",
    "not bidding",
    "won't bid",
    "will not bid",
    "decline to bid",
    "pass on today",
    "pass this round",
    "skip today",
    "skip this round",
    "opt out",
    "refrain from bidding",
    "save my money",
)


@dataclass(frozen=True)
class ParseFailure:
    """Not a decision: the caller should re-ask (bounded retries)."""

    reason: str


def _last_amount(text: str):
    best = None
    for pattern in (_DOLLAR, _BID_WORD):
        for match in pattern.finditer(text):
            if best is None or match.start(1) > best.start(1):
                best = match
    if best is None:
        return None
    return int(best.group(1).replace(",", ""))


def _has_refusal(text: str) -> bool:
    lowered = text.lower()
    return any(phrase in lowered for phrase in _REFUSAL_PHRASES)


def parse_decision(raw_response: str, balance: int):
    """Return an AgentDecision, or a ParseFailure asking for a retry."""
    amount = _last_amount(raw_response)
    if amount is None:
        if _has_refusal(raw_response):
            return AgentDecision.abstain(reason="declined", raw_response=raw_response)
        return ParseFailure("no bid amount found")
    if amount < 1:
        return ParseFailure("bid must be a positive amount")
    if amount > balance:
        return ParseFailure(f"bid ${amount} exceeds balance ${balance}")
    return AgentDecision(amount=amount, reason="parsed", raw_response=raw_response)

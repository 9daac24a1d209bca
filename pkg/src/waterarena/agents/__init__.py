from .base import Agent, AgentDecision, AgentView
from .scripted import ScriptedAgent, make_strategy

__all__ = ["Agent", "AgentDecision", "AgentView", "ScriptedAgent", "make_strategy"]

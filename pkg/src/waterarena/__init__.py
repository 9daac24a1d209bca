"""Sealed-bid water auction survival game: engine, agents, experiments."""

__version__ = "0.1.0"

"""Graph transformation with borrowed contexts, SOS derivations and composition of interactions."""
from __future__ import annotations

__version__ = "0.1.0"

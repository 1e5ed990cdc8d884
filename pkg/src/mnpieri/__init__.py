"""Exact Pieri rules for elliptic Hall algebra elements in Q(q, t)."""

from .qt import QTRational, EpsRational, PoleAtTarget, q, t, s, ONE, ZERO

__all__ = ["QTRational", "EpsRational", "PoleAtTarget", "q", "t", "s", "ONE", "ZERO"]
__version__ = "0.1.0"

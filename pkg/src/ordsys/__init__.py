"""Ordering systems over ordinals: closures, VC dimension, and two constructions."""

__version__ = "0.1.0"

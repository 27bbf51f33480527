"""Opt-in operation counting for runtime-shape checks.

Multiplication counts are the portable way to talk about the cost of the
arithmetic kernels: wall-clock assertions are flaky, counter assertions are
exact.  Counting is disabled by default and enabled per invocation with
``count_operations()``; the active counter lives in a context variable, so
concurrent callers never share state.
"""
from __future__ import annotations

import contextlib
from contextvars import ContextVar
from dataclasses import dataclass
from typing import Iterator, Optional

__all__ = ["OpCounter", "count_operations", "active_counter"]


@dataclass
class OpCounter:
    """Tally of the two multiplication kinds the library instruments.

    int_mults: modular multiplications of integers in Z/mZ.
    poly_mults: ring multiplications in (Z/NZ[x])/(f).
    """

    int_mults: int = 0
    poly_mults: int = 0


_active: ContextVar[Optional[OpCounter]] = ContextVar("abprime_opcounter", default=None)


@contextlib.contextmanager
def count_operations() -> Iterator[OpCounter]:
    """Enable counting for the dynamic extent of the with-block."""
    counter = OpCounter()
    token = _active.set(counter)
    try:
        yield counter
    finally:
        _active.reset(token)


def active_counter() -> Optional[OpCounter]:
    """The counter currently in effect, or None when counting is off."""
    return _active.get()

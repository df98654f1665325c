"""Small machines used throughout: identity, letter flip, the binary odometer,
and a few asynchronous ones."""

from __future__ import annotations

from .automata import ASYNC, SYNC, Transducer


def identity(name: str = "id") -> Transducer:
    return Transducer(name, SYNC, ("a",), "a", {("a", "0"): ("a", "0"), ("a", "1"): ("a", "1")})


def flip(name: str = "flip") -> Transducer:
    return Transducer(name, SYNC, ("a",), "a", {("a", "0"): ("a", "1"), ("a", "1"): ("a", "0")})


def odometer(name: str = "odo") -> Transducer:
    """Adds one to a least-significant-bit-first 2-adic integer."""
    return Transducer(name, SYNC, ("c", "e"), "c", {
        ("c", "1"): ("c", "0"),
        ("c", "0"): ("e", "1"),
        ("e", "0"): ("e", "0"),
        ("e", "1"): ("e", "1"),
    })


def constant_zero(name: str = "zero") -> Transducer:
    return Transducer(name, SYNC, ("a",), "a", {("a", "0"): ("a", "0"), ("a", "1"): ("a", "0")})


def skip(name: str = "skip") -> Transducer:
    """Emits nothing on 0 and ``1`` on 1; degenerate on words ending in 0s."""
    return Transducer(name, ASYNC, ("a",), "a", {("a", "0"): ("a", ""), ("a", "1"): ("a", "1")})


def double(name: str = "double") -> Transducer:
    """Writes every letter twice."""
    return Transducer(name, ASYNC, ("a",), "a", {("a", "0"): ("a", "00"), ("a", "1"): ("a", "11")})


def pairs(name: str = "pairs") -> Transducer:
    """Silent on odd positions, echoes the pair on even ones."""
    return Transducer(name, ASYNC, ("o", "z", "u"), "o", {
        ("o", "0"): ("z", ""),
        ("o", "1"): ("u", ""),
        ("z", "0"): ("o", "00"),
        ("z", "1"): ("o", "01"),
        ("u", "0"): ("o", "10"),
        ("u", "1"): ("o", "11"),
    })

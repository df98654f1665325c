"""Finite-state transducers over the alphabet {0, 1}.

A synchronous (Mealy) machine emits exactly one letter per input letter; an
asynchronous one emits a finite, possibly empty, word.  Machines act on
eventually periodic infinite words exactly: the run over the period is
followed until a state repeats at a period boundary.
"""

from __future__ import annotations

import dataclasses
from collections import deque
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Hashable, Mapping, Optional, Union

from .report import CheckReport
from .words import LETTERS, OmegaWord, check_finite, concat, enumerate_cylinder_reps

SYNC = "synchronous"
ASYNC = "asynchronous"

State = Hashable


class MachineError(ValueError):
    pass


class NotInvertible(MachineError):
    def __init__(self, state: State, outputs: tuple[str, str]):
        super().__init__(f"state {state!r} maps 0,1 to {outputs[0]!r},{outputs[1]!r}; not a permutation")
        self.state = state
        self.outputs = outputs


@dataclass(frozen=True, eq=False)
class Transducer:
    """A machine with ``rules[(state, letter)] = (next_state, output_word)``.

    Equality is identity; use :func:`agree_on_reps` for extensional
    comparison.
    """

    name: str
    kind: str
    states: tuple
    start: State
    rules: Mapping[tuple, tuple]

    def __post_init__(self):
        if self.kind not in (SYNC, ASYNC):
            raise MachineError(f"{self.name}: unknown kind {self.kind!r}")
        object.__setattr__(self, "states", tuple(self.states))
        object.__setattr__(self, "rules", dict(self.rules))
        if self.start not in self.states:
            raise MachineError(f"{self.name}: start state {self.start!r} not declared")
        for s in self.states:
            for a in LETTERS:
                if (s, a) not in self.rules:
                    raise MachineError(f"{self.name}: no rule for state {s!r} on {a}")
                nxt, out = self.rules[s, a]
                if nxt not in self.states:
                    raise MachineError(f"{self.name}: rule ({s!r}, {a}) targets unknown state {nxt!r}")
                check_finite(out)
                if self.kind == SYNC and len(out) != 1:
                    raise MachineError(f"{self.name}: synchronous rule ({s!r}, {a}) emits {out!r}")
        if len(self.rules) != 2 * len(self.states):
            raise MachineError(f"{self.name}: rules mention undeclared states")

    @property
    def synchronous(self) -> bool:
        return self.kind == SYNC

    def step(self, state: State, letter: str) -> tuple[State, str]:
        return self.rules[state, letter]

    def reachable(self) -> list:
        """Reachable states in breadth-first order (letters 0 before 1)."""
        seen = {self.start}
        order = [self.start]
        queue = deque(order)
        while queue:
            s = queue.popleft()
            for a in LETTERS:
                t = self.rules[s, a][0]
                if t not in seen:
                    seen.add(t)
                    order.append(t)
                    queue.append(t)
        return order

    def output_map(self, state: State) -> tuple[str, str]:
        return self.rules[state, "0"][1], self.rules[state, "1"][1]


@dataclass(frozen=True)
class FiniteOutput:
    """Result of running a degenerate machine on an input whose run ends in a silent cycle."""

    word: str

    def __str__(self) -> str:
        return f"finite:{self.word}"


def eval_finite(m: Transducer, q: str, state: Optional[State] = None) -> tuple[str, State]:
    s = m.start if state is None else state
    out = []
    for a in q:
        s, o = m.rules[s, a]
        out.append(o)
    return "".join(out), s


@lru_cache(maxsize=1 << 17)
def _eval_from(m: Transducer, s: State, w: OmegaWord) -> Union[OmegaWord, FiniteOutput]:
    rules = m.rules
    head = []
    for a in w.pre:
        s, o = rules[s, a]
        head.append(o)
    seen: dict = {}
    blocks: list[str] = []
    while s not in seen:
        seen[s] = len(blocks)
        block = []
        for a in w.per:
            s, o = rules[s, a]
            block.append(o)
        blocks.append("".join(block))
    j = seen[s]
    cycle = "".join(blocks[j:])
    lead = "".join(head) + "".join(blocks[:j])
    if not cycle:
        return FiniteOutput(lead)
    return OmegaWord(lead, cycle)


def eval_omega(m: Transducer, w: OmegaWord, state: Optional[State] = None) -> Union[OmegaWord, FiniteOutput]:
    """Image of ``w``; a :class:`FiniteOutput` when the run enters a silent cycle."""
    return _eval_from(m, m.start if state is None else state, w)


def apply(m: Transducer, w: OmegaWord) -> OmegaWord:
    """Like :func:`eval_omega` but raises on degenerate output."""
    out = _eval_from(m, m.start, w)
    if isinstance(out, FiniteOutput):
        raise MachineError(f"{m.name} produces only the finite word {out.word!r} on {w}")
    return out


def section(m: Transducer, q: str) -> Transducer:
    """The machine ``A_q`` with ``A(qw) = A(q) A_q(w)``."""
    if not m.synchronous:
        raise MachineError(f"{m.name}: sections are only taken of synchronous machines")
    if not q:
        return m
    _, s = eval_finite(m, q)
    return dataclasses.replace(m, name=f"{m.name}@{q}", start=s)


def _pair_names(pairs: list) -> dict:
    names = {}
    used = set()
    for i, (a, b) in enumerate(pairs):
        name = f"{a}.{b}"
        if name in used:
            name = f"q{i}"
        used.add(name)
        names[a, b] = name
    return names


def compose(m1: Transducer, m2: Transducer) -> Transducer:
    """Machine computing ``w -> m2(m1(w))`` on reachable state pairs."""
    if not (m1.synchronous and m2.synchronous):
        raise MachineError("only synchronous machines are composed")
    start = (m1.start, m2.start)
    order = [start]
    seen = {start}
    edges = {}
    queue = deque(order)
    while queue:
        s1, s2 = pair = queue.popleft()
        for a in LETTERS:
            t1, b = m1.rules[s1, a]
            t2, c = m2.rules[s2, b]
            edges[pair, a] = ((t1, t2), c)
            if (t1, t2) not in seen:
                seen.add((t1, t2))
                order.append((t1, t2))
                queue.append((t1, t2))
    names = _pair_names(order)
    rules = {(names[p], a): (names[t], c) for (p, a), (t, c) in edges.items()}
    return Transducer(f"{m2.name}*{m1.name}", SYNC, tuple(names[p] for p in order), names[start], rules)


def invert(m: Transducer) -> Transducer:
    """Inverse machine on the reachable part of ``m``.

    Raises :class:`NotInvertible` naming the first reachable state whose
    output map is not a permutation of {0, 1}.
    """
    if not m.synchronous:
        raise MachineError(f"{m.name}: only synchronous machines are inverted")
    states = m.reachable()
    rules = {}
    for s in states:
        outs = m.output_map(s)
        if set(outs) != {"0", "1"}:
            raise NotInvertible(s, outs)
        for a in LETTERS:
            t, b = m.rules[s, a]
            rules[s, b] = (t, a)
    return Transducer(f"{m.name}^-1", SYNC, tuple(states), m.start, rules)


def check_isometry(m: Transducer) -> CheckReport:
    states = m.reachable()
    report = CheckReport("isometry", True, cases=len(states), params={"machine": m.name})
    if not m.synchronous:
        report.passed = False
        report.witnesses.append({"machine": m.name, "reason": "asynchronous"})
        return report
    for s in states:
        outs = m.output_map(s)
        if set(outs) != {"0", "1"}:
            report.passed = False
            report.witnesses.append({"state": str(s), "on 0": outs[0], "on 1": outs[1]})
    return report


def find_silent_cycle(m: Transducer) -> Optional[list[tuple[State, str]]]:
    """A reachable cycle of empty-output edges as ``[(state, letter), ...]``, or None."""
    silent = {
        s: [(a, m.rules[s, a][0]) for a in LETTERS if m.rules[s, a][1] == ""]
        for s in m.reachable()
    }
    color: dict = {}
    for root in silent:
        if root in color:
            continue
        # iterative DFS; path holds (state, letter taken) for the grey stack
        path: list[tuple[State, str]] = []
        stack = [(root, iter(silent[root]))]
        color[root] = 1
        while stack:
            s, it = stack[-1]
            nxt = next(it, None)
            if nxt is None:
                color[s] = 2
                stack.pop()
                if path:
                    path.pop()
                continue
            a, t = nxt
            if color.get(t) == 1:
                path.append((s, a))
                idx = next(i for i, (u, _) in enumerate(path) if u == t)
                return path[idx:]
            if t not in color:
                color[t] = 1
                path.append((s, a))
                stack.append((t, iter(silent[t])))
    return None


def check_nondegenerate(m: Transducer) -> CheckReport:
    cycle = find_silent_cycle(m)
    report = CheckReport("nondegenerate", cycle is None, cases=len(m.reachable()), params={"machine": m.name})
    if cycle is not None:
        report.witnesses.append({
            "states": " -> ".join(str(s) for s, _ in cycle + [cycle[0]]),
            "letters": "".join(a for _, a in cycle),
        })
    return report


def continuity_modulus(m: Transducer, n: int) -> list[int]:
    """``f(k)`` for k = 1..n: least output length over all inputs of length k.

    Inputs agreeing on their first k letters have images agreeing on their
    first ``f(k)`` letters.
    """
    cycle = find_silent_cycle(m)
    if cycle is not None:
        raise MachineError(f"{m.name} is degenerate (silent cycle through {cycle[0][0]!r})")
    states = m.reachable()
    g = {s: 0 for s in states}
    f = []
    for _ in range(n):
        g = {
            s: min(len(m.rules[s, a][1]) + g[m.rules[s, a][0]] for a in LETTERS)
            for s in states
        }
        f.append(g[m.start])
    return f


def agree_on_reps(m1: Transducer, m2: Transducer, depth: int) -> bool:
    """Extensional equality on the depth-``depth`` cylinder representatives."""
    return all(eval_omega(m1, w) == eval_omega(m2, w) for w in enumerate_cylinder_reps(depth))


def section_identity_holds(m: Transducer, q: str, w: OmegaWord) -> bool:
    out, _ = eval_finite(m, q)
    return eval_omega(m, concat(q, w)) == concat(out, eval_omega(section(m, q), w))

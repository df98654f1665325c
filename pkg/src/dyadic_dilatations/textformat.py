"""Line-oriented workspace files: machines, W-functions and structures.

::

    mealy flip                  # or: async <name>
      start a
      a 0 -> a / 1              # <state> <bit> -> <state> / <OUT>, OUT = e for empty
      a 1 -> a / 0
    end
    wfun W selfsimilar window 1
      0 -> id
      1 -> flip
    end
    wfun V leveled
      level 1 window 1 : 0 -> flip , 1 -> flip
      tail window 1 : 0 -> id , 1 -> id
    end
    wfun C combined
      level1 window 1 : 0 -> id , 1 -> flip
      branch 0 = W
      branch 1 = V
    end
    structure D = W

``#`` starts a comment.  The built-in isometry ``id`` needs no declaration.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from typing import Optional

from . import library
from .automata import ASYNC, SYNC, MachineError, Transducer, check_isometry
from .dilatation import CombinedW, DilatationError, DilatationStructure, LeveledW, LevelTable, SelfSimilarW, WFunction

NAME = r"[A-Za-z_][A-Za-z0-9_.\-^@*|+()]*"
_NAME_RE = re.compile(rf"^{NAME}$")
_RULE = re.compile(r"^(\S+)\s+([01])\s*->\s*(\S+)\s*/\s*(e|[01]+)$")
_ENTRY = re.compile(rf"^([01]+)\s*->\s*({NAME})$")
_LEVEL = re.compile(r"^level\s+(\d+)\s+window\s+(\d+)\s*:\s*(.*)$")
_TAIL = re.compile(r"^tail\s+window\s+(\d+)\s*:\s*(.*)$")
_LEVEL1 = re.compile(r"^level1\s+window\s+(\d+)\s*:\s*(.*)$")
_BRANCH = re.compile(rf"^branch\s+([01])\s*=\s*({NAME})$")
_STRUCTURE = re.compile(rf"^structure\s+({NAME})\s*=\s*({NAME})$")

RESERVED = {"id"}


class WorkspaceError(ValueError):
    pass


class ParseError(WorkspaceError):
    def __init__(self, line: int, column: int, message: str):
        super().__init__(f"line {line}, column {column}: {message}")
        self.line = line
        self.column = column


class ValidationError(WorkspaceError):
    pass


@dataclass
class Workspace:
    machines: dict[str, Transducer] = field(default_factory=dict)
    wfuns: dict[str, WFunction] = field(default_factory=dict)
    structures: dict[str, DilatationStructure] = field(default_factory=dict)
    positions: dict[tuple[str, str], int] = field(default_factory=dict)

    def machine(self, name: str) -> Transducer:
        if name in self.machines:
            return self.machines[name]
        if name in BUILTIN_MACHINES:
            return BUILTIN_MACHINES[name]()
        raise ValidationError(f"unknown machine {name!r}")

    def structure(self, name: str) -> DilatationStructure:
        if name not in self.structures:
            raise ValidationError(f"unknown structure {name!r}")
        return self.structures[name]


BUILTIN_MACHINES = {"id": library.identity, "flip": library.flip, "odo": library.odometer}


def _col(raw: str, token: str = "") -> int:
    pos = raw.find(token) if token else -1
    if pos < 0:
        pos = len(raw) - len(raw.lstrip())
    return pos + 1


def _parse_entries(text: str, lineno: int, raw: str, window: int) -> LevelTable:
    table = {}
    for chunk in text.split(","):
        chunk = chunk.strip()
        m = _ENTRY.match(chunk)
        if m is None:
            raise ParseError(lineno, _col(raw, chunk), f"expected '<bits> -> <isometry>', got {chunk!r}")
        key, ref = m.groups()
        if key in table:
            raise ParseError(lineno, _col(raw, chunk), f"duplicate key {key}")
        table[key] = ref
    try:
        return LevelTable(window, table)
    except DilatationError as e:
        raise ParseError(lineno, 1, str(e)) from None


class _Parser:
    def __init__(self, text: str):
        self.lines = text.splitlines()
        self.i = 0
        self.ws = Workspace()
        self.pending_structures: list[tuple[str, str, int]] = []
        self.combined: dict[str, tuple[LevelTable, dict[str, str], int]] = {}

    def next_line(self) -> Optional[tuple[int, str, str]]:
        while self.i < len(self.lines):
            raw = self.lines[self.i]
            self.i += 1
            body = raw.split("#", 1)[0].strip()
            if body:
                return self.i, raw, body
        return None

    def declare(self, kind: str, name: str, lineno: int, raw: str) -> None:
        if not _NAME_RE.match(name):
            raise ParseError(lineno, _col(raw, name), f"bad name {name!r}")
        if (kind, name) in self.ws.positions:
            raise ParseError(lineno, _col(raw, name), f"{kind} {name!r} already declared on line {self.ws.positions[kind, name]}")
        if kind == "machine" and name in RESERVED:
            raise ParseError(lineno, _col(raw, name), f"{name!r} is reserved for the built-in identity")
        self.ws.positions[kind, name] = lineno

    def parse(self) -> Workspace:
        while (item := self.next_line()) is not None:
            lineno, raw, body = item
            words = body.split()
            head = words[0]
            if head in ("mealy", "async") and len(words) == 2:
                self.machine(head, words[1], lineno, raw)
            elif head == "wfun" and len(words) >= 3:
                self.wfun(words, lineno, raw)
            elif head == "structure":
                m = _STRUCTURE.match(body)
                if m is None:
                    raise ParseError(lineno, _col(raw), "expected 'structure <name> = <wfun>'")
                self.declare("structure", m.group(1), lineno, raw)
                self.pending_structures.append((m.group(1), m.group(2), lineno))
            else:
                raise ParseError(lineno, _col(raw), f"unexpected {head!r}")
        self.resolve_combined()
        self.validate()
        return self.ws

    def block(self, what: str, lineno: int):
        while True:
            item = self.next_line()
            if item is None:
                raise ParseError(lineno, 1, f"{what} is missing 'end'")
            if item[2] == "end":
                return
            yield item

    def machine(self, head: str, name: str, lineno: int, raw: str) -> None:
        self.declare("machine", name, lineno, raw)
        kind = SYNC if head == "mealy" else ASYNC
        start = None
        states: list[str] = []
        rules = {}
        for ln, lraw, body in self.block(f"machine {name}", lineno):
            if body.startswith("start"):
                parts = body.split()
                if len(parts) != 2 or start is not None:
                    raise ParseError(ln, _col(lraw), "expected a single 'start <state>'")
                start = parts[1]
                continue
            m = _RULE.match(body)
            if m is None:
                raise ParseError(ln, _col(lraw), "expected '<state> <bit> -> <state> / <out>'")
            s, a, t, out = m.groups()
            if (s, a) in rules:
                raise ParseError(ln, _col(lraw, s), f"duplicate row for state {s!r} on {a}")
            if out == "e":
                if kind == SYNC:
                    raise ParseError(ln, _col(lraw, "/"), "empty output in a synchronous machine")
                out = ""
            elif kind == SYNC and len(out) != 1:
                raise ParseError(ln, _col(lraw, "/"), f"synchronous output must be one letter, got {out!r}")
            rules[s, a] = (t, out)
            if s not in states:
                states.append(s)
        if start is None:
            raise ParseError(lineno, 1, f"machine {name} has no start state")
        for s in [start] + [t for t, _ in rules.values()]:
            if s not in states:
                states.append(s)
        missing = [(s, a) for s in states for a in "01" if (s, a) not in rules]
        if missing:
            s, a = missing[0]
            raise ParseError(lineno, 1, f"machine {name}: missing row for state {s!r} on {a}")
        try:
            self.ws.machines[name] = Transducer(name, kind, tuple(states), start, rules)
        except MachineError as e:
            raise ParseError(lineno, 1, str(e)) from None

    def wfun(self, words: list[str], lineno: int, raw: str) -> None:
        name, kind = words[1], words[2]
        self.declare("wfun", name, lineno, raw)
        if kind == "selfsimilar":
            if len(words) != 5 or words[3] != "window" or not words[4].isdigit():
                raise ParseError(lineno, _col(raw, kind), "expected 'wfun <name> selfsimilar window <m>'")
            window = int(words[4])
            table = {}
            for ln, lraw, body in self.block(f"wfun {name}", lineno):
                m = _ENTRY.match(body)
                if m is None:
                    raise ParseError(ln, _col(lraw), "expected '<bits> -> <isometry>'")
                key, ref = m.groups()
                if key in table:
                    raise ParseError(ln, _col(lraw), f"duplicate key {key}")
                table[key] = ref
            try:
                self.ws.wfuns[name] = SelfSimilarW(LevelTable(window, table))
            except DilatationError as e:
                raise ParseError(lineno, 1, f"wfun {name}: {e}") from None
        elif kind == "leveled" and len(words) == 3:
            levels: dict[int, LevelTable] = {}
            tail = None
            for ln, lraw, body in self.block(f"wfun {name}", lineno):
                if m := _LEVEL.match(body):
                    k = int(m.group(1))
                    if k in levels:
                        raise ParseError(ln, _col(lraw), f"level {k} given twice")
                    levels[k] = _parse_entries(m.group(3), ln, lraw, int(m.group(2)))
                elif m := _TAIL.match(body):
                    if tail is not None:
                        raise ParseError(ln, _col(lraw), "tail given twice")
                    tail = _parse_entries(m.group(2), ln, lraw, int(m.group(1)))
                else:
                    raise ParseError(ln, _col(lraw), "expected 'level <k> window <m> : ...' or 'tail window <m> : ...'")
            if tail is None:
                raise ParseError(lineno, 1, f"wfun {name} has no tail")
            if sorted(levels) != list(range(1, len(levels) + 1)):
                raise ParseError(lineno, 1, f"wfun {name}: levels must be 1..L without gaps, got {sorted(levels)}")
            self.ws.wfuns[name] = LeveledW(tuple(levels[k] for k in sorted(levels)), tail)
        elif kind == "combined" and len(words) == 3:
            level1 = None
            branches: dict[str, str] = {}
            for ln, lraw, body in self.block(f"wfun {name}", lineno):
                if m := _LEVEL1.match(body):
                    level1 = _parse_entries(m.group(2), ln, lraw, int(m.group(1)))
                elif m := _BRANCH.match(body):
                    branches[m.group(1)] = m.group(2)
                else:
                    raise ParseError(ln, _col(lraw), "expected 'level1 window <m> : ...' or 'branch <bit> = <wfun>'")
            if set(branches) != {"0", "1"}:
                raise ParseError(lineno, 1, f"wfun {name} needs both branch 0 and branch 1")
            self.combined[name] = (level1 or LevelTable.constant("id"), branches, lineno)
        else:
            raise ParseError(lineno, _col(raw, kind), f"unknown wfun kind {kind!r}")

    def resolve_combined(self) -> None:
        visiting: set[str] = set()

        def get(name: str, lineno: int) -> WFunction:
            if name in self.ws.wfuns:
                return self.ws.wfuns[name]
            if name not in self.combined:
                raise ValidationError(f"line {lineno}: unknown wfun {name!r}")
            if name in visiting:
                raise ValidationError(f"line {lineno}: wfun {name!r} is defined in terms of itself")
            visiting.add(name)
            level1, branches, ln = self.combined[name]
            w = CombinedW(level1, get(branches["0"], ln), get(branches["1"], ln))
            visiting.discard(name)
            self.ws.wfuns[name] = w
            return w

        for name, (_, _, ln) in self.combined.items():
            get(name, ln)

    def validate(self) -> None:
        ws = self.ws
        for name, w in ws.wfuns.items():
            for ref in sorted(w.refs()):
                if ref == "id":
                    continue
                if ref not in ws.machines:
                    raise ValidationError(f"wfun {name}: isometry {ref!r} is not declared")
                report = check_isometry(ws.machines[ref])
                if not report.passed:
                    raise ValidationError(f"wfun {name}: machine {ref!r} is not an isometry ({report.witnesses[0]})")
        for sname, wname, lineno in self.pending_structures:
            if wname not in ws.wfuns:
                raise ValidationError(f"line {lineno}: structure {sname}: unknown wfun {wname!r}")
            w = ws.wfuns[wname]
            lib = {ref: ws.machines[ref] for ref in w.refs() if ref != "id"}
            ws.structures[sname] = DilatationStructure(sname, w, lib)


def parse_workspace(text: str) -> Workspace:
    return _Parser(text).parse()


def format_machine(m: Transducer, name: Optional[str] = None) -> str:
    head = "mealy" if m.kind == SYNC else "async"
    lines = [f"{head} {name or m.name}", f"  start {m.start}"]
    for s in m.states:
        for a in "01":
            t, out = m.rules[s, a]
            lines.append(f"  {s} {a} -> {t} / {out or 'e'}")
    lines.append("end")
    return "\n".join(lines)


def _format_entries(t: LevelTable) -> str:
    return " , ".join(f"{k} -> {t.table[k]}" for k in sorted(t.table))


def format_wfun(name: str, w: WFunction) -> str:
    """Text for ``w``; combined functions are preceded by their branches."""
    if isinstance(w, SelfSimilarW):
        body = [f"  {k} -> {w.table.table[k]}" for k in sorted(w.table.table)]
        return "\n".join([f"wfun {name} selfsimilar window {w.table.window}", *body, "end"])
    if isinstance(w, LeveledW):
        body = [f"  level {k} window {t.window} : {_format_entries(t)}" for k, t in enumerate(w.levels, 1)]
        body.append(f"  tail window {w.tail.window} : {_format_entries(w.tail)}")
        return "\n".join([f"wfun {name} leveled", *body, "end"])
    parts = [format_wfun(f"{name}.0", w.branch0), format_wfun(f"{name}.1", w.branch1)]
    parts.append("\n".join([
        f"wfun {name} combined",
        f"  level1 window {w.level1.window} : {_format_entries(w.level1)}",
        f"  branch 0 = {name}.0",
        f"  branch 1 = {name}.1",
        "end",
    ]))
    return "\n".join(parts)


def format_structure(d: DilatationStructure, name: Optional[str] = None) -> str:
    """Self-contained workspace text defining ``d`` (machines, wfun, structure)."""
    name = name or d.name
    wname = f"{name}.w"
    parts = [format_machine(d.library[ref], ref) for ref in sorted(d.wfun.refs()) if ref != "id"]
    parts.append(format_wfun(wname, d.wfun))
    parts.append(f"structure {name} = {wname}")
    return "\n".join(parts) + "\n"


def parse_level_table(text: str) -> LevelTable:
    """``"0 -> flip , 1 -> id"``; the window is the key length."""
    entries = [c.strip() for c in text.split(",") if c.strip()]
    if not entries:
        raise WorkspaceError("empty table")
    table = {}
    for chunk in entries:
        m = _ENTRY.match(chunk)
        if m is None:
            raise WorkspaceError(f"expected '<bits> -> <isometry>', got {chunk!r}")
        table[m.group(1)] = m.group(2)
    windows = {len(k) for k in table}
    if len(windows) != 1:
        raise WorkspaceError("all keys must have the same length")
    try:
        return LevelTable(windows.pop(), table)
    except DilatationError as e:
        raise WorkspaceError(str(e)) from None

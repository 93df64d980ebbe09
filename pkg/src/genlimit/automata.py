"""Small deterministic finite automaton engine.

Automata are total: every state has a transition on every symbol. States
are the integers ``0 .. n-1``. The operations here are the ones the
generation algorithms need: products, complement, emptiness, finiteness,
counting, and the shortlex-least accepted string.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from typing import Iterable, Sequence


class AutomatonError(ValueError):
    pass


@dataclass(frozen=True)
class Dfa:
    alphabet: tuple[str, ...]
    transitions: tuple[tuple[int, ...], ...]
    start: int
    accepting: frozenset[int]

    def __post_init__(self):
        n = len(self.transitions)
        if n == 0:
            raise AutomatonError("automaton needs at least one state")
        if not 0 <= self.start < n:
            raise AutomatonError(f"start state {self.start} out of range")
        for q in self.accepting:
            if not 0 <= q < n:
                raise AutomatonError(f"accepting state {q} out of range")
        k = len(self.alphabet)
        for q, row in enumerate(self.transitions):
            if len(row) != k:
                raise AutomatonError(f"state {q} is missing transitions")
            for r in row:
                if not 0 <= r < n:
                    raise AutomatonError(f"transition target {r} out of range")

    @classmethod
    def build(cls, alphabet: Iterable[str], table: Sequence[dict | Sequence[int]],
              start: int = 0, accepting: Iterable[int] = ()) -> "Dfa":
        """Build from a per-state table; rows are dicts keyed by symbol or
        sequences in alphabet order."""
        alphabet = tuple(alphabet)
        rows = []
        for row in table:
            if isinstance(row, dict):
                rows.append(tuple(row[s] for s in alphabet))
            else:
                rows.append(tuple(row))
        return cls(alphabet, tuple(rows), start, frozenset(accepting))

    @property
    def n_states(self) -> int:
        return len(self.transitions)

    def _symbol(self, ch: str) -> int:
        try:
            return self.alphabet.index(ch)
        except ValueError:
            raise AutomatonError(f"symbol {ch!r} not in alphabet") from None

    def run(self, word: str, state: int | None = None) -> int:
        q = self.start if state is None else state
        for ch in word:
            q = self.transitions[q][self._symbol(ch)]
        return q

    def accepts(self, word: str) -> bool:
        return self.run(word) in self.accepting

    __contains__ = accepts

    def complement(self) -> "Dfa":
        rest = frozenset(range(self.n_states)) - self.accepting
        return Dfa(self.alphabet, self.transitions, self.start, rest)

    def product(self, other: "Dfa", mode: str = "and") -> "Dfa":
        """Reachable part of the product automaton.

        ``mode`` is one of ``and``, ``or``, ``diff`` (self minus other).
        """
        if self.alphabet != other.alphabet:
            raise AutomatonError("alphabets differ")
        accept = {
            "and": lambda a, b: a and b,
            "or": lambda a, b: a or b,
            "diff": lambda a, b: a and not b,
        }[mode]
        index = {(self.start, other.start): 0}
        pairs = [(self.start, other.start)]
        rows = []
        i = 0
        while i < len(pairs):
            p, q = pairs[i]
            row = []
            for s in range(len(self.alphabet)):
                nxt = (self.transitions[p][s], other.transitions[q][s])
                if nxt not in index:
                    index[nxt] = len(pairs)
                    pairs.append(nxt)
                row.append(index[nxt])
            rows.append(tuple(row))
            i += 1
        final = frozenset(
            j for j, (p, q) in enumerate(pairs)
            if accept(p in self.accepting, q in other.accepting)
        )
        return Dfa(self.alphabet, tuple(rows), 0, final)

    def __and__(self, other: "Dfa") -> "Dfa":
        return self.product(other, "and")

    def __or__(self, other: "Dfa") -> "Dfa":
        return self.product(other, "or")

    def __sub__(self, other: "Dfa") -> "Dfa":
        return self.product(other, "diff")

    def reachable(self) -> set[int]:
        seen = {self.start}
        todo = [self.start]
        while todo:
            q = todo.pop()
            for r in self.transitions[q]:
                if r not in seen:
                    seen.add(r)
                    todo.append(r)
        return seen

    def coreachable(self) -> set[int]:
        back: list[list[int]] = [[] for _ in range(self.n_states)]
        for q, row in enumerate(self.transitions):
            for r in row:
                back[r].append(q)
        seen = set(self.accepting)
        todo = list(seen)
        while todo:
            q = todo.pop()
            for p in back[q]:
                if p not in seen:
                    seen.add(p)
                    todo.append(p)
        return seen

    def useful(self) -> set[int]:
        return self.reachable() & self.coreachable()

    def is_empty(self) -> bool:
        return not (self.reachable() & self.accepting)

    def is_infinite(self) -> bool:
        """True iff some cycle lies on a path from the start to acceptance."""
        useful = self.useful()
        colour = dict.fromkeys(useful, 0)
        for root in useful:
            if colour[root]:
                continue
            stack = [(root, iter(self.transitions[root]))]
            colour[root] = 1
            while stack:
                q, it = stack[-1]
                for r in it:
                    if r not in colour:
                        continue
                    if colour[r] == 1:
                        return True
                    if colour[r] == 0:
                        colour[r] = 1
                        stack.append((r, iter(self.transitions[r])))
                        break
                else:
                    colour[q] = 2
                    stack.pop()
        return False

    def count(self) -> int | None:
        """Number of accepted strings, or None when the language is infinite."""
        if self.is_infinite():
            return None
        useful = self.useful()
        memo: dict[int, int] = {}

        def paths(q: int) -> int:
            if q in memo:
                return memo[q]
            total = 1 if q in self.accepting else 0
            for r in self.transitions[q]:
                if r in useful:
                    total += paths(r)
            memo[q] = total
            return total

        if self.start not in useful:
            return 0
        return paths(self.start)

    def least_accepted(self) -> str | None:
        """Shortlex-least accepted string, or None for the empty language.

        Breadth-first search expanding symbols in alphabet order discovers
        states in shortlex order of their access strings.
        """
        parent: dict[int, tuple[int, int] | None] = {self.start: None}
        queue = deque([self.start])
        while queue:
            q = queue.popleft()
            if q in self.accepting:
                out = []
                while parent[q] is not None:
                    q, s = parent[q]
                    out.append(self.alphabet[s])
                return "".join(reversed(out))
            for s, r in enumerate(self.transitions[q]):
                if r not in parent:
                    parent[r] = (q, s)
                    queue.append(r)
        return None

    # -- constructors -----------------------------------------------------

    @classmethod
    def universal(cls, alphabet: Iterable[str]) -> "Dfa":
        alphabet = tuple(alphabet)
        return cls(alphabet, ((0,) * len(alphabet),), 0, frozenset({0}))

    @classmethod
    def empty(cls, alphabet: Iterable[str]) -> "Dfa":
        alphabet = tuple(alphabet)
        return cls(alphabet, ((0,) * len(alphabet),), 0, frozenset())

    @classmethod
    def finite(cls, alphabet: Iterable[str], words: Iterable[str]) -> "Dfa":
        """Trie automaton accepting exactly ``words``."""
        alphabet = tuple(alphabet)
        k = len(alphabet)
        sink = 0
        rows: list[list[int]] = [[sink] * k, [sink] * k]
        final = set()
        for w in words:
            q = 1
            for ch in w:
                if ch not in alphabet:
                    raise AutomatonError(f"symbol {ch!r} not in alphabet")
                s = alphabet.index(ch)
                if rows[q][s] == sink:
                    rows.append([sink] * k)
                    rows[q][s] = len(rows) - 1
                q = rows[q][s]
            final.add(q)
        return cls(alphabet, tuple(map(tuple, rows)), 1, frozenset(final))

    @classmethod
    def with_prefix(cls, alphabet: Iterable[str], prefix: str) -> "Dfa":
        """All strings that start with ``prefix``."""
        alphabet = tuple(alphabet)
        k = len(alphabet)
        n = len(prefix)
        # states 0..n-1 read the prefix, n accepts forever, n+1 is dead
        rows = []
        for i, ch in enumerate(prefix):
            if ch not in alphabet:
                raise AutomatonError(f"symbol {ch!r} not in alphabet")
            s = alphabet.index(ch)
            rows.append(tuple(i + 1 if j == s else n + 1 for j in range(k)))
        rows.append((n,) * k)
        rows.append((n + 1,) * k)
        return cls(alphabet, tuple(rows), 0, frozenset({n}))

    # -- text format ------------------------------------------------------

    def to_text(self) -> str:
        lines = [
            "alphabet " + " ".join(self.alphabet),
            f"states {self.n_states}",
            f"start {self.start}",
            "accept " + " ".join(str(q) for q in sorted(self.accepting)),
        ]
        for q, row in enumerate(self.transitions):
            for s, r in zip(self.alphabet, row):
                lines.append(f"{q} {s} {r}")
        return "\n".join(lines) + "\n"

    @classmethod
    def from_text(cls, text: str) -> "Dfa":
        alphabet = None
        n = start = None
        accepting: list[int] = []
        edges: dict[tuple[int, str], int] = {}
        for lineno, raw in enumerate(text.splitlines(), 1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            head, *rest = line.split()
            try:
                if head == "alphabet":
                    alphabet = tuple(rest)
                elif head == "states":
                    (n,) = map(int, rest)
                elif head == "start":
                    (start,) = map(int, rest)
                elif head == "accept":
                    accepting = [int(x) for x in rest]
                else:
                    src, sym, dst = head, *rest
                    edges[int(src), sym] = int(dst)
            except ValueError:
                raise AutomatonError(f"line {lineno}: cannot parse {raw!r}") from None
        if alphabet is None or n is None or start is None:
            raise AutomatonError("missing alphabet, states or start declaration")
        rows = []
        for q in range(n):
            try:
                rows.append(tuple(edges[q, s] for s in alphabet))
            except KeyError as e:
                raise AutomatonError(f"missing transition {e.args[0]}") from None
        if len(edges) != n * len(alphabet):
            raise AutomatonError("transition for an undeclared state or symbol")
        return cls(alphabet, tuple(rows), start, frozenset(accepting))

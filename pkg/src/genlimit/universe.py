"""Canonical enumerations u_1, u_2, ... of the countable universe.

Every other module talks about universe elements through their 1-based
position in one of these enumerations, so the orderings here are fixed:

* integers use the zigzag order 0, 1, -1, 2, -2, ...
* strings over a finite alphabet use shortlex order (length first, then
  lexicographic by alphabet position), starting with the empty string.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Iterator, Union

Element = Union[int, str]


class UniverseError(ValueError):
    """Raised for malformed elements or indices."""


@dataclass(frozen=True)
class Universe:
    """A countable universe with a fixed enumeration.

    ``alphabet`` is ``None`` for the integers, otherwise a tuple of
    single-character symbols in their canonical order.
    """

    alphabet: tuple[str, ...] | None = None

    def __post_init__(self):
        if self.alphabet is not None:
            if not self.alphabet:
                raise UniverseError("alphabet must be non-empty")
            if len(set(self.alphabet)) != len(self.alphabet):
                raise UniverseError("alphabet symbols must be distinct")
            if any(len(s) != 1 for s in self.alphabet):
                raise UniverseError("alphabet symbols must be single characters")

    @property
    def is_strings(self) -> bool:
        return self.alphabet is not None

    @property
    def kind(self) -> str:
        return "strings" if self.is_strings else "integers"

    def element_at(self, i: int) -> Element:
        if i < 1:
            raise UniverseError(f"universe index must be >= 1, got {i}")
        if self.alphabet is None:
            return _zigzag_element(i)
        return _shortlex_element(self.alphabet, i)

    def index_of(self, x: Element) -> int:
        if self.alphabet is None:
            if isinstance(x, bool) or not isinstance(x, int):
                raise UniverseError(f"not an integer: {x!r}")
            return _zigzag_index(x)
        if not isinstance(x, str):
            raise UniverseError(f"not a string: {x!r}")
        return _shortlex_index(self.alphabet, x)

    def validate(self, x: Element) -> Element:
        self.index_of(x)
        return x

    def elements(self, start: int = 1) -> Iterator[Element]:
        i = start
        while True:
            yield self.element_at(i)
            i += 1

    def format(self, x: Element) -> str:
        if self.alphabet is None:
            return str(x)
        return x if x else "ε"

    def parse(self, text: str) -> Element:
        """Parse a command-line/scenario token into an element."""
        if self.alphabet is None:
            try:
                return int(text)
            except ValueError:
                raise UniverseError(f"not an integer: {text!r}") from None
        if text in ("ε", "<eps>"):
            text = ""
        self.index_of(text)
        return text


INTEGERS = Universe()


def strings(alphabet: str = "ab") -> Universe:
    return Universe(tuple(alphabet))


def _zigzag_element(i: int) -> int:
    return i // 2 if i % 2 == 0 else -((i - 1) // 2)


def _zigzag_index(x: int) -> int:
    return 2 * x if x > 0 else 1 - 2 * x


@lru_cache(maxsize=1 << 16)
def _shortlex_element(alphabet: tuple[str, ...], i: int) -> str:
    # bijective base-k numeral of i - 1
    k = len(alphabet)
    n = i - 1
    out = []
    while n > 0:
        n, r = divmod(n - 1, k)
        out.append(alphabet[r])
    return "".join(reversed(out))


def _shortlex_index(alphabet: tuple[str, ...], x: str) -> int:
    k = len(alphabet)
    pos = {s: d for d, s in enumerate(alphabet)}
    n = 0
    for ch in x:
        d = pos.get(ch)
        if d is None:
            raise UniverseError(f"symbol {ch!r} not in alphabet {''.join(alphabet)!r}")
        n = n * k + d + 1
    return n + 1

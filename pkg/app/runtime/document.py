"""
Documents: token sequences with an additive length measure
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Iterable, Optional

Tokenizer = Callable[[str], list]

# A token is one whitespace-delimited unit by default; "char" makes every
# character a unit. Either keeps length additive under split/concat.
TOKENIZERS: dict[str, tuple[Tokenizer, str]] = {
    "whitespace": (str.split, " "),
    "char": (list, ""),
}


@dataclass(frozen=True)
class Document:
    """The external prompt P, or any piece of it."""

    tokens: tuple[str, ...] = ()
    # Original text of oracle answers, kept so line-structured records survive.
    raw: Optional[str] = field(default=None, compare=False, repr=False)
    sep: str = field(default=" ", compare=False, repr=False)

    @classmethod
    def from_text(
        cls, text: str, *, tokenizer: str = "whitespace", keep_raw: bool = False
    ) -> "Document":
        split, sep = TOKENIZERS[tokenizer]
        return cls(tuple(split(text)), text if keep_raw else None, sep)

    @classmethod
    def of(cls, tokens: Iterable[str]) -> "Document":
        return cls(tuple(tokens))

    @property
    def n(self) -> int:
        return len(self.tokens)

    def __len__(self) -> int:
        return len(self.tokens)

    @property
    def text(self) -> str:
        if self.raw is not None:
            return self.raw
        return self.sep.join(self.tokens)

    def __str__(self) -> str:
        return self.text

    def slice(self, start: int, end: int) -> "Document":
        return Document(self.tokens[start:end], None, self.sep)

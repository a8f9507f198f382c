"""Tokenizer plumbing: reserved special tokens and a whitespace tokenizer.

The toolkit never runs a real tokenizer; everything downstream (prompt
expansion, packing, needle budgets) only needs *token counts* and stable
ids. The default tokenizer splits on whitespace and assigns one id per
unique word. Any object with the same ``encode`` signature can be plugged
in instead.
"""

from __future__ import annotations

from typing import Protocol

# Reserved ids shared across the toolkit's vocabulary map. Word ids start
# above FIRST_WORD_ID so special tokens can never collide with text.
IM_START_ID = 0
IM_END_ID = 1
SEPARATOR_ID = 2
VISION_TOKEN_ID = 3
FIRST_WORD_ID = 16

SPECIAL_TOKENS = {
    "<im_start>": IM_START_ID,
    "<im_end>": IM_END_ID,
    "<sep>": SEPARATOR_ID,
    "<vision>": VISION_TOKEN_ID,
}


class Tokenizer(Protocol):
    def encode(self, text: str) -> list[int]: ...


class WhitespaceTokenizer:
    """Splits on whitespace; one id per unique word, assigned on first use."""

    def __init__(self) -> None:
        self._vocab: dict[str, int] = {}

    def encode(self, text: str) -> list[int]:
        ids = []
        for word in text.split():
            if word not in self._vocab:
                self._vocab[word] = FIRST_WORD_ID + len(self._vocab)
            ids.append(self._vocab[word])
        return ids

    def count(self, text: str) -> int:
        return len(text.split())

    @property
    def vocab(self) -> dict[str, int]:
        return dict(self._vocab)

"""Multimodal prompt rendering under the five ablation formats F0-F4.

Per media item the variants render:

    F0: <image>
    F1: <im_start><image><im_end>
    F2: image {i}: <image>
    F3: image {i}: <im_start><image><im_end>
    F4: like F3, but the word "frame" is used for video frames

Blocks and interleaved text are concatenated directly, with no implicit
separators: two images under F0 render as ``<image><image>``. Indices are
1-based and tracked per kind; under F0-F3 frames are rendered with the
word "image" (only F4 distinguishes kinds).
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import Union

from .errors import InputError
from .tiler import TileLayout
from .tokenizer import IM_END_ID, IM_START_ID, VISION_TOKEN_ID, Tokenizer, WhitespaceTokenizer

IMAGE_SENTINEL = "<image>"
IM_START = "<im_start>"
IM_END = "<im_end>"
_RESERVED = (IMAGE_SENTINEL, IM_START, IM_END)


class FormatVariant(enum.Enum):
    F0 = "F0"
    F1 = "F1"
    F2 = "F2"
    F3 = "F3"
    F4 = "F4"


@dataclass(frozen=True)
class MediaItem:
    kind: str  # "image" | "frame"
    index: int  # 1-based, per kind
    layout: TileLayout | None

    def __post_init__(self) -> None:
        if self.kind not in ("image", "frame"):
            raise InputError(f"media kind must be 'image' or 'frame', got {self.kind!r}")
        if self.index < 1:
            raise InputError(f"media index must be >= 1, got {self.index}")


@dataclass(frozen=True)
class TextSegment:
    text: str


@dataclass(frozen=True)
class MediaSegment:
    item: MediaItem


Segment = Union[TextSegment, MediaSegment]


@dataclass(frozen=True)
class PromptSegmentSequence:
    fmt: FormatVariant
    segments: tuple[Segment, ...]
    rendered: str
    token_estimate: int


def media_items(kinds: list[str], layouts: list[TileLayout]) -> list[MediaItem]:
    """Build MediaItems with consecutive 1-based indices per kind."""
    if len(kinds) != len(layouts):
        raise InputError("kinds and layouts must have equal length")
    counters = {"image": 0, "frame": 0}
    items = []
    for kind, layout in zip(kinds, layouts):
        if kind not in counters:
            raise InputError(f"media kind must be 'image' or 'frame', got {kind!r}")
        counters[kind] += 1
        items.append(MediaItem(kind=kind, index=counters[kind], layout=layout))
    return items


def _block_prefix(item: MediaItem, fmt: FormatVariant) -> str:
    if fmt in (FormatVariant.F0, FormatVariant.F1):
        return ""
    word = "frame" if (fmt is FormatVariant.F4 and item.kind == "frame") else "image"
    return f"{word} {item.index}: "


def _delimited(fmt: FormatVariant) -> bool:
    return fmt in (FormatVariant.F1, FormatVariant.F3, FormatVariant.F4)


def render(
    items: list[MediaItem],
    interleaved_text: list[str],
    fmt: FormatVariant,
    tokenizer: Tokenizer | None = None,
) -> PromptSegmentSequence:
    """Render media items with interleaved text under one format variant.

    ``interleaved_text`` carries the text before, between, and after the
    media blocks, so it must have exactly len(items) + 1 entries (empty
    strings where there is no text). Text may not contain the reserved
    sentinel strings; rendering stays injective because of that.
    """
    if not items:
        raise InputError("at least one media item is required")
    if len(interleaved_text) != len(items) + 1:
        raise InputError(
            f"need {len(items) + 1} text entries for {len(items)} items, "
            f"got {len(interleaved_text)}"
        )
    for text in interleaved_text:
        for token in _RESERVED:
            if token in text:
                raise InputError(f"text segments may not contain the reserved string {token!r}")

    tok = tokenizer if tokenizer is not None else WhitespaceTokenizer()
    segments: list[Segment] = []
    parts: list[str] = []
    estimate = 0
    for i, item in enumerate(items):
        if item.layout is None:
            raise InputError(f"media item {item.kind} {item.index} has no layout")
        segments.append(TextSegment(interleaved_text[i]))
        segments.append(MediaSegment(item))
        estimate += len(tok.encode(interleaved_text[i]))
        prefix = _block_prefix(item, fmt)
        estimate += len(tok.encode(prefix))
        estimate += item.layout.total_tokens + (2 if _delimited(fmt) else 0)
        parts.append(interleaved_text[i])
        if _delimited(fmt):
            parts.append(f"{prefix}{IM_START}{IMAGE_SENTINEL}{IM_END}")
        else:
            parts.append(f"{prefix}{IMAGE_SENTINEL}")
    segments.append(TextSegment(interleaved_text[-1]))
    parts.append(interleaved_text[-1])
    estimate += len(tok.encode(interleaved_text[-1]))

    return PromptSegmentSequence(
        fmt=fmt,
        segments=tuple(segments),
        rendered="".join(parts),
        token_estimate=estimate,
    )


def expand_placeholders(seq: PromptSegmentSequence, tokenizer: Tokenizer | None = None) -> list[int]:
    """Expand a rendered sequence into token ids.

    Each media placeholder becomes layout.total_tokens synthetic vision-token
    ids, wrapped in the reserved <im_start>/<im_end> ids for delimited
    variants; index prefixes and interleaved text go through the tokenizer.
    """
    tok = tokenizer if tokenizer is not None else WhitespaceTokenizer()
    ids: list[int] = []
    for seg in seq.segments:
        if isinstance(seg, TextSegment):
            ids.extend(tok.encode(seg.text))
            continue
        item = seg.item
        if item.layout is None:
            raise InputError(f"media item {item.kind} {item.index} has no layout")
        ids.extend(tok.encode(_block_prefix(item, seq.fmt)))
        if _delimited(seq.fmt):
            ids.append(IM_START_ID)
        ids.extend([VISION_TOKEN_ID] * item.layout.total_tokens)
        if _delimited(seq.fmt):
            ids.append(IM_END_ID)
    return ids

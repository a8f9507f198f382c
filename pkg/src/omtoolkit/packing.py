"""Greedy first-fit sequence packing into fixed context-length budgets.

Samples are consumed in arrival order and appended to the open pack while
they fit (each sample costs its length plus one trailing separator token);
when one does not fit, the open pack is emitted and a new one starts.
Samples are never split. Oversized samples are handled per an explicit
policy: rejected as data, or truncated to target_len - 1 tokens.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Iterator

from .errors import ConfigError, InputError
from .tokenizer import SEPARATOR_ID

DEFAULT_STAGES = (4096, 32768, 131072, 524288)


@dataclass(frozen=True)
class Sample:
    id: str
    token_ids: tuple[int, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "token_ids", tuple(self.token_ids))
        if not self.token_ids:
            raise InputError(f"sample {self.id!r} is empty")

    @property
    def length(self) -> int:
        return len(self.token_ids)


@dataclass(frozen=True)
class PackMember:
    sample_id: str
    offset: int  # start offset of the sample within the pack
    length: int


@dataclass(frozen=True)
class PackedSequence:
    target_len: int
    members: tuple[PackMember, ...]
    tokens: tuple[int, ...]
    truncated_ids: tuple[str, ...] = ()

    @property
    def used(self) -> int:
        return len(self.tokens)

    @property
    def boundaries(self) -> tuple[int, ...]:
        return tuple(m.offset for m in self.members)

    @property
    def fill_ratio(self) -> float:
        return self.used / self.target_len


@dataclass(frozen=True)
class RejectRecord:
    sample_id: str
    length: int
    target_len: int


@dataclass(frozen=True)
class ContextSchedule:
    stages: tuple[int, ...] = DEFAULT_STAGES

    def __post_init__(self) -> None:
        object.__setattr__(self, "stages", tuple(self.stages))
        if not self.stages:
            raise ConfigError("schedule needs at least one stage")
        if any(b <= a for a, b in zip(self.stages, self.stages[1:])):
            raise ConfigError(f"stages must be strictly increasing, got {self.stages}")


def schedule_stage(stage_index: int, sched: ContextSchedule) -> int:
    if not 0 <= stage_index < len(sched.stages):
        raise InputError(
            f"stage index {stage_index} out of range for {len(sched.stages)} stages"
        )
    return sched.stages[stage_index]


@dataclass
class _OpenPack:
    target_len: int
    members: list[PackMember] = field(default_factory=list)
    tokens: list[int] = field(default_factory=list)
    truncated: list[str] = field(default_factory=list)

    def fits(self, length: int) -> bool:
        return len(self.tokens) + length + 1 <= self.target_len

    def append(self, sample_id: str, token_ids: tuple[int, ...]) -> None:
        self.members.append(PackMember(sample_id, len(self.tokens), len(token_ids)))
        self.tokens.extend(token_ids)
        self.tokens.append(SEPARATOR_ID)

    def seal(self) -> PackedSequence:
        return PackedSequence(
            target_len=self.target_len,
            members=tuple(self.members),
            tokens=tuple(self.tokens),
            truncated_ids=tuple(self.truncated),
        )


def pack(
    samples: Iterable[Sample],
    target_len: int,
    policy: str,
    rejects: list[RejectRecord] | None = None,
) -> Iterator[PackedSequence]:
    """Pack a sample stream into sequences of at most target_len tokens.

    ``policy`` must be 'reject' or 'truncate' (no silent default). Under
    'reject', oversized samples become RejectRecords appended to ``rejects``
    (rejection is data, not an error); under 'truncate' they are cut to
    target_len - 1 tokens and keep their trailing separator.
    """
    if policy not in ("reject", "truncate"):
        raise ConfigError(f"oversize policy must be 'reject' or 'truncate', got {policy!r}")
    if target_len < 2:
        raise ConfigError(f"target_len must be >= 2, got {target_len}")

    open_pack = _OpenPack(target_len)
    for sample in samples:
        token_ids = sample.token_ids
        truncated = False
        if sample.length + 1 > target_len:
            if policy == "reject":
                if rejects is not None:
                    rejects.append(RejectRecord(sample.id, sample.length, target_len))
                continue
            token_ids = token_ids[: target_len - 1]
            truncated = True
        if not open_pack.fits(len(token_ids)):
            yield open_pack.seal()
            open_pack = _OpenPack(target_len)
        open_pack.append(sample.id, token_ids)
        if truncated:
            open_pack.truncated.append(sample.id)
    if open_pack.members:
        yield open_pack.seal()

"""Context-window feature extraction from aligned word pairs.

Every source character becomes one sample: the x characters before it,
the character itself, and the y characters after it, padded with a
sentinel where the word runs out. The label is the aligned target
segment, possibly the empty string (a deletion).

The padding sentinel is deliberately not "∅": the empty-string class
and out-of-word padding are different roles and must stay distinct in
the feature space. PAD renders as ∅ only in debug dumps.
"""

from __future__ import annotations

from dataclasses import dataclass

from .aligner import AlignedPair

PAD = "∅-PAD"

_DISPLAY_EMPTY = "∅"


@dataclass(frozen=True)
class WindowSpec:
    """x preceding and y subsequent characters around the focus character."""

    x: int
    y: int

    def __post_init__(self):
        if not (0 <= self.x <= 10 and 0 <= self.y <= 10):
            raise ValueError(f"window bounds out of range: x={self.x}, y={self.y}")

    @property
    def width(self) -> int:
        return self.x + 1 + self.y


@dataclass(frozen=True)
class Sample:
    features: tuple[str, ...]
    label: str


def window_features(chars, index: int, window: WindowSpec) -> tuple[str, ...]:
    """The window around ``chars[index]``, PAD where the word is exhausted."""
    n = len(chars)
    out = []
    for offset in range(index - window.x, index + window.y + 1):
        out.append(chars[offset] if 0 <= offset < n else PAD)
    return tuple(out)


def extract_samples(pair: AlignedPair, window: WindowSpec) -> list[Sample]:
    """One sample per source character, in word order."""
    chars = pair.source_chars
    return [
        Sample(window_features(chars, i, window), pair.target_segments[i])
        for i in range(len(chars))
    ]


def dedup_samples(samples) -> list[Sample]:
    """Drop exact (features, label) duplicates, keeping first occurrence.

    Samples with equal features but different labels are all kept;
    silently dropping one side would bias the classifier.
    """
    seen = set()
    out = []
    for sample in samples:
        key = (sample.features, sample.label)
        if key not in seen:
            seen.add(key)
            out.append(sample)
    return out


def dump_samples_tsv(samples) -> str:
    """Debug dump: features joined by ``|``, TAB, label; ∅ for PAD and
    for the empty label."""
    lines = []
    for sample in samples:
        feats = "|".join(_DISPLAY_EMPTY if f == PAD else f for f in sample.features)
        label = sample.label if sample.label else _DISPLAY_EMPTY
        lines.append(f"{feats}\t{label}\n")
    return "".join(lines)

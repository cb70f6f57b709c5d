"""Character alignment of source words against target words.

Each source character is paired with zero or more characters of the
target word so that the segments tile the target exactly. The search is
a depth-first backtracking walk over the mapping table's candidates,
longest candidate first, and the first complete tiling wins. Candidate
lists are tiny (at most four entries) and words are short, so the
exhaustive search is cheap and fully deterministic.
"""

from __future__ import annotations

from dataclasses import dataclass

from .alphabets import Direction, MappingTable


class AlignmentError(Exception):
    pass


class UnknownSourceCharError(AlignmentError):
    """A source character has no mapping-table entry at all."""

    def __init__(self, source: str, target: str, char: str, position: int):
        super().__init__(f"no table entry for {char!r} in {source!r} (position {position})")
        self.source = source
        self.target = target
        self.char = char
        self.position = position


class NoAlignmentError(AlignmentError):
    """No candidate assignment tiles the target word."""

    def __init__(self, source: str, target: str, position: int):
        super().__init__(
            f"cannot align {source!r} with {target!r}; stuck at source position {position}"
        )
        self.source = source
        self.target = target
        self.position = position


@dataclass(frozen=True)
class AlignedPair:
    """A source word split into characters, each tied to a target segment."""

    source_chars: tuple[str, ...]
    target_segments: tuple[str, ...]
    direction: Direction

    def __post_init__(self):
        if len(self.source_chars) != len(self.target_segments):
            raise ValueError("source_chars and target_segments lengths differ")

    @property
    def source(self) -> str:
        return "".join(self.source_chars)

    @property
    def target(self) -> str:
        return "".join(self.target_segments)


@dataclass(frozen=True)
class AlignmentFailure:
    source: str
    target: str
    position: int


def align_word(source: str, target: str, table: MappingTable) -> AlignedPair:
    """Align ``source`` against ``target`` under ``table``.

    Raises UnknownSourceCharError when a source character has no table
    row, and NoAlignmentError when no candidate assignment concatenates
    to the target; the error carries the furthest source position the
    search got stuck at, which is what discover_unmapped reports.
    """
    if not source:
        raise ValueError("source word is empty")
    chars = tuple(source)
    candidate_lists = []
    for position, char in enumerate(chars):
        candidates = table.candidates(char)
        if candidates is None:
            raise UnknownSourceCharError(source, target, char, position)
        candidate_lists.append(candidates)

    n = len(chars)
    target_len = len(target)
    segments: list[str] = [""] * n
    fail_position = 0
    success = False

    # Depth-first backtracking with an explicit stack; frames hold
    # (source index, target offset, next candidate to try, matched-any).
    frames: list[list] = [[0, 0, 0, False]]
    while frames:
        frame = frames[-1]
        i, j = frame[0], frame[1]
        if i == n:
            if j == target_len:
                success = True
                break
            # Source exhausted with target left over; charge the last char.
            fail_position = max(fail_position, n - 1)
            frames.pop()
            continue
        candidates = candidate_lists[i]
        k = frame[2]
        while k < len(candidates) and not target.startswith(candidates[k], j):
            k += 1
        if k == len(candidates):
            if not frame[3]:
                fail_position = max(fail_position, i)
            frames.pop()
            continue
        frame[2] = k + 1
        frame[3] = True
        segments[i] = candidates[k]
        frames.append([i + 1, j + len(candidates[k]), 0, False])

    if not success:
        raise NoAlignmentError(source, target, fail_position)
    return AlignedPair(
        source_chars=chars,
        target_segments=tuple(segments),
        direction=table.direction,
    )


def align_corpus(pairs, table: MappingTable):
    """Align every (source, target) pair; failures are collected, not raised."""
    alignments: list[AlignedPair] = []
    failures: list[AlignmentFailure] = []
    for source, target in pairs:
        try:
            alignments.append(align_word(source, target, table))
        except UnknownSourceCharError as err:
            failures.append(AlignmentFailure(source, target, err.position))
        except NoAlignmentError as err:
            failures.append(AlignmentFailure(source, target, err.position))
    return alignments, failures


def format_failure_report(failures) -> str:
    """One line per failure: ``<source><TAB><target><TAB><fail-position>``."""
    return "".join(f"{f.source}\t{f.target}\t{f.position}\n" for f in failures)

"""Alphabet definitions, Unicode normalization, and character mapping tables.

The toolkit converts between the two scripts of Uzbek: Cyrillic
(35 letters) and Latin (30 letters, counting the digraphs o', g', sh,
ch, ng and the apostrophe). A MappingTable lists, for every single
source-script character, the candidate target strings it may align
with, including the empty string (written ``∅`` in table files).
"""

from __future__ import annotations

import hashlib
import unicodedata
from dataclasses import dataclass, field
from importlib import resources
from typing import Iterable, Mapping

CANONICAL_APOSTROPHE = "'"

# U+0027 ' | U+2018 LEFT QUOTE | U+2019 RIGHT QUOTE | U+0060 GRAVE |
# U+00B4 ACUTE | U+02BB TURNED COMMA | U+02BC MODIFIER APOSTROPHE
APOSTROPHE_VARIANTS = frozenset("'‘’`´ʻʼ")

# In table files U+2205 stands for the empty target string.
EMPTY_MARK = "∅"

CYRILLIC = "cyrillic"
LATIN = "latin"

Direction = tuple[str, str]

CYR2LAT: Direction = (CYRILLIC, LATIN)
LAT2CYR: Direction = (LATIN, CYRILLIC)


class TableParseError(ValueError):
    """Raised when a mapping-table or script-spec file is malformed."""

    def __init__(self, path, line_no: int, message: str):
        super().__init__(f"{path}:{line_no}: {message}")
        self.path = path
        self.line_no = line_no


@dataclass(frozen=True)
class NormalizationPolicy:
    """How raw words are canonicalized before any other processing."""

    apostrophe_variants: frozenset[str] = APOSTROPHE_VARIANTS
    case_folding: bool = True
    unicode_form: str = "NFC"


DEFAULT_POLICY = NormalizationPolicy()


def normalize_word(word: str, policy: NormalizationPolicy = DEFAULT_POLICY) -> str:
    """Return ``word`` in canonical form: NFC, one apostrophe code point,
    and lowercase when the policy folds case. Idempotent and total."""
    out = unicodedata.normalize(policy.unicode_form, word)
    out = "".join(
        CANONICAL_APOSTROPHE if ch in policy.apostrophe_variants else ch
        for ch in out
    )
    if policy.case_folding:
        out = out.lower()
    return unicodedata.normalize(policy.unicode_form, out)


@dataclass(frozen=True)
class ScriptSpec:
    """An alphabet: ordered letters (1 or 2 code points each) with case pairs."""

    name: str
    letters: tuple[str, ...]
    case_pairs: tuple[tuple[str, str], ...]

    def __post_init__(self):
        if len(set(self.letters)) != len(self.letters):
            raise ValueError(f"duplicate letters in script {self.name!r}")
        for letter in self.letters:
            if not 1 <= len(letter) <= 2:
                raise ValueError(f"letter {letter!r} must be 1 or 2 code points")

    @property
    def code_points(self) -> frozenset[str]:
        """Single code points occurring in any letter (digraphs contribute both)."""
        return frozenset(ch for letter in self.letters for ch in letter)


def _canonical_candidates(candidates: Iterable[str]) -> tuple[str, ...]:
    # Longest first so the alignment search prefers digraphs; ties by
    # code point order for determinism.
    return tuple(sorted(candidates, key=lambda c: (-len(c), c)))


@dataclass(frozen=True)
class MappingTable:
    """Per source character, the admissible target strings, in search order."""

    direction: Direction
    entries: Mapping[str, tuple[str, ...]] = field(default_factory=dict)

    def __post_init__(self):
        canon = {}
        for key, candidates in self.entries.items():
            if len(key) != 1:
                raise ValueError(f"table key {key!r} is not a single code point")
            cands = _canonical_candidates(candidates)
            if not cands:
                raise ValueError(f"table key {key!r} has no candidates")
            if len(set(cands)) != len(cands):
                raise ValueError(f"table key {key!r} has duplicate candidates")
            canon[key] = cands
        object.__setattr__(self, "entries", canon)

    def candidates(self, char: str) -> tuple[str, ...] | None:
        return self.entries.get(char)

    def fingerprint(self) -> str:
        """Content hash; stamps trained models so table drift is detectable."""
        digest = hashlib.sha256()
        digest.update(("->".join(self.direction)).encode("utf-8"))
        for key in sorted(self.entries):
            line = key + "\t" + ",".join(self.entries[key]) + "\n"
            digest.update(line.encode("utf-8"))
        return digest.hexdigest()

    def format(self) -> str:
        """Render in the table file format (``∅`` for the empty string)."""
        lines = [f"# mapping table: {self.direction[0]} -> {self.direction[1]}"]
        for key in sorted(self.entries):
            cands = ",".join(c if c else EMPTY_MARK for c in self.entries[key])
            lines.append(f"{key}\t{cands}")
        return "\n".join(lines) + "\n"


def _guess_direction(keys: Iterable[str]) -> Direction:
    for key in keys:
        if "Ѐ" <= key <= "ӿ":
            return CYR2LAT
    return LAT2CYR


def load_mapping_table(path, direction: Direction | None = None) -> MappingTable:
    """Parse a mapping-table file.

    One entry per line: ``<source-char><TAB><candidate>{,<candidate>}``,
    ``∅`` denoting the empty string, ``#`` starting a comment. When
    ``direction`` is omitted it is inferred from the script of the keys.
    """
    entries: dict[str, tuple[str, ...]] = {}
    with open(path, encoding="utf-8") as handle:
        for line_no, raw in enumerate(handle, start=1):
            line = raw.rstrip("\n")
            if not line.strip() or line.lstrip().startswith("#"):
                continue
            if "\t" not in line:
                raise TableParseError(path, line_no, "expected <char><TAB><candidates>")
            key, _, cand_text = line.partition("\t")
            if len(key) != 1:
                raise TableParseError(
                    path, line_no, f"key {key!r} is not a single character"
                )
            if key in entries:
                raise TableParseError(path, line_no, f"duplicate key {key!r}")
            candidates = []
            for item in cand_text.split(","):
                item = item.strip()
                if not item:
                    raise TableParseError(path, line_no, "empty candidate field")
                candidates.append("" if item == EMPTY_MARK else item)
            if len(set(candidates)) != len(candidates):
                raise TableParseError(path, line_no, f"duplicate candidate for {key!r}")
            entries[key] = tuple(candidates)
    if not entries:
        raise TableParseError(path, 0, "table file has no entries")
    if direction is None:
        direction = _guess_direction(entries)
    return MappingTable(direction=direction, entries=entries)


def load_script_spec(path, name: str) -> ScriptSpec:
    """Parse a script-spec file: one letter per line, ``upper<TAB>lower``."""
    letters = []
    case_pairs = []
    with open(path, encoding="utf-8") as handle:
        for line_no, raw in enumerate(handle, start=1):
            line = raw.rstrip("\n")
            if not line.strip() or line.lstrip().startswith("#"):
                continue
            if "\t" not in line:
                raise TableParseError(path, line_no, "expected <upper><TAB><lower>")
            upper, _, lower = line.partition("\t")
            letters.append(lower)
            case_pairs.append((upper, lower))
    return ScriptSpec(name=name, letters=tuple(letters), case_pairs=tuple(case_pairs))


def format_script_spec(spec: ScriptSpec) -> str:
    return "".join(f"{upper}\t{lower}\n" for upper, lower in spec.case_pairs)


def _data_path(filename: str):
    return resources.files(__package__).joinpath("data", filename)


def bundled_script_spec(script: str) -> ScriptSpec:
    if script == CYRILLIC:
        return load_script_spec(_data_path("cyrillic.tsv"), CYRILLIC)
    if script == LATIN:
        return load_script_spec(_data_path("latin.tsv"), LATIN)
    raise ValueError(f"unknown script {script!r}")


def bundled_mapping_table(direction: Direction) -> MappingTable:
    if direction == CYR2LAT:
        return load_mapping_table(_data_path("cyr2lat.tsv"), CYR2LAT)
    if direction == LAT2CYR:
        return load_mapping_table(_data_path("lat2cyr.tsv"), LAT2CYR)
    raise ValueError(f"unknown direction {direction!r}")


def parse_direction(text: str) -> Direction:
    aliases = {
        "cyr2lat": CYR2LAT,
        "lat2cyr": LAT2CYR,
        "cyrillic-latin": CYR2LAT,
        "latin-cyrillic": LAT2CYR,
    }
    try:
        return aliases[text.lower()]
    except KeyError:
        raise ValueError(f"unknown direction {text!r}; use cyr2lat or lat2cyr")


def discover_unmapped(corpus, table: MappingTable):
    """Word pairs the aligner cannot tile under ``table``.

    Returns a list of alignment failures, each with the first source
    position at which every candidate fails. An empty list means the
    table covers the corpus; nonempty results point at table rows that
    still need to be added, mirroring the bootstrap loop used to build
    the bundled tables.
    """
    from .aligner import align_corpus

    _, failures = align_corpus(corpus, table)
    return failures

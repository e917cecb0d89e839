"""Alignment result type, modes, and CIGAR utilities.

Coordinates are 0-based inclusive.  The canonical empty local/semi-global
result (no positive-scoring cell) has maxScore 0, all coordinates -1, and an
empty cigar.  CIGARs use M for match-and-mismatch, I for query-only columns,
D for reference-only columns; clipping is expressed through coordinates.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from enum import Enum

from ..errors import InvalidCigar, UnknownResidue
from ..scoring import ScoringScheme


class AlignmentMode(Enum):
    LOCAL = 0
    GLOBAL = 1
    SEMI_GLOBAL = 2

    @property
    def wire_code(self) -> int:
        return self.value

    @classmethod
    def from_wire(cls, code: int) -> "AlignmentMode":
        return cls(code)

    @classmethod
    def from_name(cls, name: str) -> "AlignmentMode":
        return _MODE_NAMES[name.lower()]

    @property
    def cli_name(self) -> str:
        return {0: "local", 1: "global", 2: "semiglobal"}[self.value]


_MODE_NAMES = {
    "local": AlignmentMode.LOCAL,
    "global": AlignmentMode.GLOBAL,
    "semiglobal": AlignmentMode.SEMI_GLOBAL,
}

_CIGAR_TOKEN = re.compile(r"(\d+)([MID])")

Cigar = tuple[tuple[str, int], ...]


def cigar_to_string(cigar: Cigar) -> str:
    """Render ops as e.g. '3M1I2M'; the empty cigar renders as ''."""
    return "".join(f"{length}{op}" for op, length in cigar)


def cigar_from_string(text: str) -> Cigar:
    """Parse '3M1I2M' (or '' / '*' for the empty cigar)."""
    if text in ("", "*"):
        return ()
    out = []
    pos = 0
    for match in _CIGAR_TOKEN.finditer(text):
        if match.start() != pos:
            raise InvalidCigar(f"bad cigar text {text!r}")
        out.append((match.group(2), int(match.group(1))))
        pos = match.end()
    if pos != len(text):
        raise InvalidCigar(f"bad cigar text {text!r}")
    return tuple(out)


def cigar_spans(cigar: Cigar) -> tuple[int, int]:
    """(querySpan, refSpan) consumed by the cigar."""
    qspan = sum(ln for op, ln in cigar if op in ("M", "I"))
    rspan = sum(ln for op, ln in cigar if op in ("M", "D"))
    return qspan, rspan


def cigar_validate(cigar: Cigar, query_span: int, ref_span: int) -> None:
    """Raise InvalidCigar unless the cigar is canonical and matches the spans.

    Canonical means: ops in {M,I,D}, all lengths >= 1, no two adjacent ops of
    the same kind.
    """
    prev_op = None
    for op, length in cigar:
        if op not in ("M", "I", "D"):
            raise InvalidCigar(f"unknown op {op!r}")
        if length < 1:
            raise InvalidCigar(f"zero-length op {op!r}")
        if op == prev_op:
            raise InvalidCigar(f"adjacent ops of the same kind ({op})")
        prev_op = op
    qspan, rspan = cigar_spans(cigar)
    if qspan != query_span:
        raise InvalidCigar(f"M+I span {qspan} != query span {query_span}")
    if rspan != ref_span:
        raise InvalidCigar(f"M+D span {rspan} != reference span {ref_span}")


def ops_to_cigar(ops) -> Cigar:
    """Run-length encode a begin-to-end op sequence (0=M, 1=I, 2=D)."""
    letters = "MID"
    out: list[tuple[str, int]] = []
    for op in ops:
        letter = letters[op]
        if out and out[-1][0] == letter:
            out[-1] = (letter, out[-1][1] + 1)
        else:
            out.append((letter, 1))
    return tuple(out)


@dataclass(frozen=True)
class AlignmentResult:
    """One alignment: score, reference name, coordinates, cigar, mode."""

    max_score: int
    ref_name: str
    ref_begin: int
    ref_end: int
    query_begin: int
    query_end: int
    cigar: Cigar
    mode: AlignmentMode

    @property
    def cigar_string(self) -> str:
        return cigar_to_string(self.cigar)

    @property
    def is_empty(self) -> bool:
        return not self.cigar

    def query_span(self) -> int:
        return 0 if self.query_begin < 0 else self.query_end - self.query_begin + 1

    def ref_span(self) -> int:
        return 0 if self.ref_begin < 0 else self.ref_end - self.ref_begin + 1

    def sort_key(self):
        """Total order: score desc, then name/coords/cigar ascending.

        Extends the documented (score, refName, refBegin, queryBegin) order
        with the remaining fields so no two distinct results ever compare
        equal -- required for partition-invariant final rankings.
        """
        return (
            -self.max_score,
            self.ref_name,
            self.ref_begin,
            self.query_begin,
            self.ref_end,
            self.query_end,
            self.cigar_string,
        )


def empty_result(ref_name: str, mode: AlignmentMode) -> AlignmentResult:
    return AlignmentResult(
        max_score=0,
        ref_name=ref_name,
        ref_begin=-1,
        ref_end=-1,
        query_begin=-1,
        query_end=-1,
        cigar=(),
        mode=mode,
    )


def score_from_cigar(
    query: str, reference: str, result: AlignmentResult, scheme: ScoringScheme
) -> int:
    """Independently re-score an alignment by walking its cigar.

    Sums matrix scores for M columns and affine charges for I/D runs.  The
    walk must consume exactly [query_begin..query_end] and
    [ref_begin..ref_end]; anything else raises InvalidCigar.
    """
    if result.is_empty:
        if result.max_score != 0 or result.ref_begin != -1:
            raise InvalidCigar("empty cigar on a non-empty result")
        return 0
    cigar_validate(result.cigar, result.query_span(), result.ref_span())
    if result.query_begin < 0 or result.ref_begin < 0:
        raise InvalidCigar("negative begin coordinate with non-empty cigar")
    if result.query_end >= len(query) or result.ref_end >= len(reference):
        raise InvalidCigar("cigar spans past the end of a sequence")
    matrix = scheme.matrix
    gaps = scheme.gaps
    qi = result.query_begin
    rj = result.ref_begin
    total = 0
    for op, length in result.cigar:
        if op == "M":
            for _ in range(length):
                total += int(matrix.scores[matrix.index_of(query[qi]), matrix.index_of(reference[rj])])
                qi += 1
                rj += 1
        elif op == "I":
            total -= gaps.cost(length)
            qi += length
        else:
            total -= gaps.cost(length)
            rj += length
    if qi != result.query_end + 1 or rj != result.ref_end + 1:
        raise InvalidCigar(
            f"cigar consumed to ({qi - 1},{rj - 1}), expected "
            f"({result.query_end},{result.ref_end})"
        )
    return total

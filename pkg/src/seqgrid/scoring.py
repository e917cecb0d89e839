"""Substitution matrices and affine gap parameters.

Matrices are parsed from the standard NCBI text layout ('#' comments, a
column-symbol line, then one row per symbol) or synthesized as simple
match/mismatch tables.  Gap costs are stored as non-negative integers with the
convention that a gap of length L costs gapOpen + (L-1)*gapExtend, subtracted
from the alignment score.
"""

from __future__ import annotations

import logging
import warnings
from dataclasses import dataclass, field
from importlib import resources

import numpy as np

from .errors import InvalidParams, MalformedMatrix, UnknownResidue

logger = logging.getLogger(__name__)

#: Names accepted wherever a matrix file path is expected.
BUILTIN_MATRICES = ("blosum62",)


@dataclass(frozen=True)
class SubstitutionMatrix:
    """Dense square score table over an ordered alphabet."""

    alphabet: str
    scores: np.ndarray  # shape (n, n), dtype int32
    name: str = "custom"
    # 256-entry residue byte -> alphabet index, -1 for unknown.
    _index: np.ndarray = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        n = len(self.alphabet)
        if len(set(self.alphabet)) != n:
            raise MalformedMatrix("duplicate symbol in alphabet")
        scores = np.asarray(self.scores, dtype=np.int32)
        if scores.shape != (n, n):
            raise MalformedMatrix(
                f"score table shape {scores.shape} does not match alphabet size {n}"
            )
        object.__setattr__(self, "scores", scores)
        index = np.full(256, -1, dtype=np.int16)
        for i, sym in enumerate(self.alphabet):
            index[ord(sym)] = i
        object.__setattr__(self, "_index", index)

    @property
    def size(self) -> int:
        return len(self.alphabet)

    @property
    def min_score(self) -> int:
        return int(self.scores.min())

    @property
    def max_score(self) -> int:
        return int(self.scores.max())

    def index_of(self, residue: str | int) -> int:
        """Alphabet index of a residue (single character or byte value)."""
        code = residue if isinstance(residue, int) else ord(residue)
        idx = int(self._index[code]) if 0 <= code < 256 else -1
        if idx < 0:
            ch = chr(code) if 32 <= code < 127 else f"0x{code:02x}"
            raise UnknownResidue(f"residue {ch!r} not in matrix alphabet {self.alphabet!r}")
        return idx

    def encode(self, residues: str | bytes) -> np.ndarray:
        """Encode a sequence to alphabet indices (uint8), rejecting unknowns."""
        data = residues.encode("ascii") if isinstance(residues, str) else residues
        arr = np.frombuffer(data, dtype=np.uint8)
        codes = self._index[arr]
        if codes.size and codes.min() < 0:
            bad = int(arr[np.argmin(codes)])
            ch = chr(bad) if 32 <= bad < 127 else f"0x{bad:02x}"
            raise UnknownResidue(f"residue {ch!r} not in matrix alphabet {self.alphabet!r}")
        return codes.astype(np.uint8)


@dataclass(frozen=True)
class GapModel:
    """Affine gap costs: length-L gap costs gapOpen + (L-1)*gapExtend."""

    gap_open: int
    gap_extend: int

    def __post_init__(self):
        if not (self.gap_open >= self.gap_extend >= 0):
            raise InvalidParams(
                f"require gapOpen >= gapExtend >= 0, got {self.gap_open}/{self.gap_extend}"
            )

    def cost(self, length: int) -> int:
        """Total (non-negative) cost of a gap run of the given length."""
        if length <= 0:
            return 0
        return self.gap_open + (length - 1) * self.gap_extend


@dataclass(frozen=True)
class ScoringScheme:
    matrix: SubstitutionMatrix
    gaps: GapModel


def lookup(matrix: SubstitutionMatrix, a: str, b: str) -> int:
    """Score of aligning residue a with residue b; UnknownResidue if absent."""
    return int(matrix.scores[matrix.index_of(a), matrix.index_of(b)])


def simple_matrix(alphabet: str, match: int, mismatch: int) -> SubstitutionMatrix:
    """Uniform match/mismatch matrix; requires match > mismatch."""
    if match <= mismatch:
        raise InvalidParams(f"match ({match}) must exceed mismatch ({mismatch})")
    n = len(alphabet)
    scores = np.full((n, n), mismatch, dtype=np.int32)
    np.fill_diagonal(scores, match)
    return SubstitutionMatrix(alphabet=alphabet, scores=scores,
                              name=f"simple({match},{mismatch})")


def parse_matrix_text(text: str, name: str = "custom") -> SubstitutionMatrix:
    """Parse the standard matrix text layout.

    '#' lines are comments; the first non-comment line lists column symbols;
    each following line is a row symbol and one integer per column.  Asymmetry
    is legal in the format, so it produces a warning rather than an error.
    """
    lines = [ln for ln in text.splitlines() if ln.strip() and not ln.lstrip().startswith("#")]
    if not lines:
        raise MalformedMatrix("no content lines")
    columns = lines[0].split()
    for sym in columns:
        if len(sym) != 1:
            raise MalformedMatrix(f"column symbol {sym!r} is not a single character")
    n = len(columns)
    if len(set(columns)) != n:
        raise MalformedMatrix("duplicate column symbol")
    if len(lines) - 1 != n:
        raise MalformedMatrix(f"expected {n} rows, found {len(lines) - 1}")
    scores = np.zeros((n, n), dtype=np.int32)
    row_syms = []
    for r, line in enumerate(lines[1:]):
        parts = line.split()
        sym = parts[0]
        if len(sym) != 1:
            raise MalformedMatrix(f"row symbol {sym!r} is not a single character")
        cells = parts[1:]
        if len(cells) != n:
            raise MalformedMatrix(
                f"row {sym!r} has {len(cells)} values, expected {n}"
            )
        row_syms.append(sym)
        for c, cell in enumerate(cells):
            try:
                scores[r, c] = int(cell)
            except ValueError:
                raise MalformedMatrix(f"non-integer cell {cell!r} in row {sym!r}") from None
    if row_syms != columns:
        raise MalformedMatrix("row symbol order does not match column symbols")
    matrix = SubstitutionMatrix(alphabet="".join(columns), scores=scores, name=name)
    if not np.array_equal(scores, scores.T):
        warnings.warn(f"matrix {name!r} is asymmetric", stacklevel=2)
    return matrix


def write_matrix_text(matrix: SubstitutionMatrix) -> str:
    """Render a matrix in the standard text layout (round-trips with parse)."""
    width = max(len(str(int(v))) for v in matrix.scores.ravel())
    width = max(width, 1)
    out = ["  " + " ".join(f"{s:>{width}}" for s in matrix.alphabet)]
    for i, sym in enumerate(matrix.alphabet):
        row = " ".join(f"{int(v):>{width}}" for v in matrix.scores[i])
        out.append(f"{sym} {row}")
    return "\n".join(out) + "\n"


def load_builtin(name: str) -> SubstitutionMatrix:
    """Load a bundled matrix by name (currently 'blosum62')."""
    key = name.lower()
    if key not in BUILTIN_MATRICES:
        raise InvalidParams(f"unknown built-in matrix {name!r}; know {BUILTIN_MATRICES}")
    text = resources.files("seqgrid.data").joinpath("BLOSUM62.txt").read_text()
    return parse_matrix_text(text, name=key)


def load_matrix(path_or_name: str) -> SubstitutionMatrix:
    """Load a matrix from a file path, or by built-in name."""
    if path_or_name.lower() in BUILTIN_MATRICES:
        return load_builtin(path_or_name)
    try:
        with open(path_or_name, "r", encoding="ascii") as fh:
            text = fh.read()
    except OSError as exc:
        raise MalformedMatrix(f"cannot read matrix file {path_or_name!r}: {exc}") from exc
    return parse_matrix_text(text, name=path_or_name)


NUCLEOTIDE_RESIDUES = frozenset("ACGTN")


def default_scheme_for(*sequences: str) -> ScoringScheme:
    """Default scoring when no matrix is given.

    Sequences drawn entirely from {A,C,G,T,N} get the nucleotide default
    simple(2,-2) with gaps 3/1; anything else gets BLOSUM62 with gaps 3/1.
    """
    residues = set()
    for seq in sequences:
        residues.update(seq)
    if residues and residues <= NUCLEOTIDE_RESIDUES:
        matrix = simple_matrix("ACGTN", 2, -2)
    else:
        matrix = load_builtin("blosum62")
    return ScoringScheme(matrix=matrix, gaps=GapModel(3, 1))

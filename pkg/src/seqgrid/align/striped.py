"""Lane-parallel striped local alignment with escalation.

The query profile lays out matrix scores so that vector v, lane l holds the
score row for query position v + l*segmentLength; padding positions store the
bias sentinel (contributes at most zero).  The forward pass runs in 8-bit
saturating cells, escalates to 16-bit on saturation, and falls back to the
scalar kernel if 16-bit saturates too.  Alignment begins come from the same
kernel run over the reversed prefixes, and the cigar comes from the shared
banded traceback, so results are field-for-field identical to sw_scalar.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from ..errors import EmptySequence, InternalMismatch, QueryTooLong
from ..scoring import GapModel, ScoringScheme, SubstitutionMatrix
from ..seqio import SequenceRecord
from . import _kernels as K
from .result import AlignmentMode, AlignmentResult, empty_result
from .scalar import banded_traceback, nw_scalar, sg_scalar, sw_scalar

DEFAULT_LANES = 16
CELL_WIDTHS = (8, 16)


@dataclass(frozen=True)
class QueryProfile:
    """Striped per-symbol score layout for one query."""

    query: str
    qcodes: np.ndarray = field(repr=False)  # uint8 alphabet indices, length n
    cells: np.ndarray = field(repr=False)  # (alphabetSize, segLen, lanes)
    matrix: SubstitutionMatrix = field(repr=False)
    lanes: int = 16
    segment_length: int = 1
    bias: int = 0
    cell_width: int = 8

    @property
    def length(self) -> int:
        return len(self.query)

    def destripe(self) -> np.ndarray:
        """(alphabetSize, n) raw scores recovered from the striped layout."""
        n = self.length
        flat = self.cells.transpose(0, 2, 1).reshape(self.cells.shape[0], -1)
        return flat[:, :n].astype(np.int64) - self.bias


@dataclass(frozen=True)
class KernelOutcome:
    """Forward-pass summary: maximum score, its cell, saturation flag."""

    max_score: int
    ref_end: int
    query_end: int
    saturated: bool


def profile_bias(matrix: SubstitutionMatrix) -> int:
    return max(0, -matrix.min_score)


def build_profile(
    query, matrix: SubstitutionMatrix, lane_count: int = DEFAULT_LANES, cell_width: int = 8
) -> QueryProfile:
    """Build the striped profile; bias = -min(matrix) when negative else 0."""
    if cell_width not in CELL_WIDTHS:
        raise ValueError(f"cell_width must be one of {CELL_WIDTHS}, got {cell_width}")
    if lane_count < 1 or (lane_count & (lane_count - 1)) != 0:
        raise ValueError(f"lane_count must be a power of two, got {lane_count}")
    q = query.residues if isinstance(query, SequenceRecord) else query
    if len(q) == 0:
        raise EmptySequence("query is empty")
    qcodes = matrix.encode(q)
    n = len(qcodes)
    bias = profile_bias(matrix)
    cap = (1 << cell_width) - 1
    if bias + matrix.max_score > cap:
        raise QueryTooLong(
            f"bias {bias} + max matrix score {matrix.max_score} exceeds "
            f"{cell_width}-bit cell capacity {cap}"
        )
    seglen = -(-n // lane_count)
    dtype = np.uint8 if cell_width == 8 else np.uint16
    pos = np.arange(seglen)[:, None] + np.arange(lane_count)[None, :] * seglen
    valid = pos < n
    safe = np.minimum(pos, n - 1)
    nsym = matrix.size
    cells = np.zeros((nsym, seglen, lane_count), dtype)
    for a in range(nsym):
        row = matrix.scores[a].astype(np.int64)[qcodes[safe]] + bias
        cells[a] = np.where(valid, row, 0).astype(dtype)
    return QueryProfile(
        query=q,
        qcodes=qcodes,
        cells=cells,
        matrix=matrix,
        lanes=lane_count,
        segment_length=seglen,
        bias=bias,
        cell_width=cell_width,
    )


def _encode_reference(profile: QueryProfile, reference) -> np.ndarray:
    r = reference.residues if isinstance(reference, SequenceRecord) else reference
    if len(r) == 0:
        raise EmptySequence("reference is empty")
    return profile.matrix.encode(r)


def _destriped_column(hsave: np.ndarray, n: int) -> np.ndarray:
    """Stored H column (segment, lane) -> per-query-position values [0..n)."""
    return hsave.T.ravel()[:n]


def _find_query_end(hsave: np.ndarray, n: int, best: int) -> int:
    column = _destriped_column(hsave, n)
    hits = np.flatnonzero(column == best)
    if hits.size == 0:
        raise InternalMismatch("saved maximum column does not contain the maximum score")
    return int(hits[0])


def _run_forward(profile: QueryProfile, rcodes: np.ndarray, gaps: GapModel):
    hsave = np.zeros((profile.segment_length, profile.lanes), profile.cells.dtype)
    kernel = K.striped_u8 if profile.cell_width == 8 else K.striped_u16
    best, rend, saturated = kernel(
        profile.cells, rcodes, gaps.gap_open, gaps.gap_extend, profile.bias, hsave
    )
    return int(best), int(rend), bool(saturated), hsave


def sw_striped_score(profile: QueryProfile, reference, gaps: GapModel) -> KernelOutcome:
    """Striped forward pass only: maximum score and its end cell.

    On saturation the reported maxScore equals the cell ceiling minus the
    bias and the end coordinates are not meaningful (query_end is -1).
    The maximum cell is the lowest (refEnd, queryEnd), as in the scalar pass.
    """
    rcodes = _encode_reference(profile, reference)
    best, rend, saturated, hsave = _run_forward(profile, rcodes, gaps)
    if saturated:
        return KernelOutcome(max_score=best, ref_end=rend, query_end=-1, saturated=True)
    if best == 0:
        return KernelOutcome(max_score=0, ref_end=-1, query_end=-1, saturated=False)
    qend = _find_query_end(hsave, profile.length, best)
    return KernelOutcome(max_score=best, ref_end=rend, query_end=qend, saturated=False)


def locate_begin(query, reference, outcome: KernelOutcome, scheme: ScoringScheme):
    """Begin coordinates (queryBegin, refBegin) for a forward-pass outcome.

    Runs the striped kernel over the reversed prefixes q[0..queryEnd] and
    r[0..refEnd]; the reverse maximum must equal the forward maximum
    (InternalMismatch otherwise), and its cell maps back to the begins.
    Requires a non-saturated outcome with a positive score.
    """
    if outcome.saturated:
        raise InternalMismatch("locate_begin called on a saturated outcome")
    if outcome.max_score <= 0:
        raise InternalMismatch("locate_begin called on an empty outcome")
    q = query.residues if isinstance(query, SequenceRecord) else query
    r = reference.residues if isinstance(reference, SequenceRecord) else reference
    qprefix = q[: outcome.query_end + 1][::-1]
    rprefix = r[: outcome.ref_end + 1][::-1]
    cell_width = 8
    cap = (1 << 8) - 1
    if profile_bias(scheme.matrix) + outcome.max_score > cap:
        cell_width = 16
    rev_profile = build_profile(qprefix, scheme.matrix, DEFAULT_LANES, cell_width)
    rev = sw_striped_score(rev_profile, rprefix, scheme.gaps)
    if rev.saturated or rev.max_score != outcome.max_score:
        raise InternalMismatch(
            f"reverse-pass score {rev.max_score} != forward {outcome.max_score}"
        )
    query_begin = outcome.query_end - rev.query_end
    ref_begin = outcome.ref_end - rev.ref_end
    return query_begin, ref_begin


class AlignContext:
    """Reusable per-query alignment state (profiles built once per width)."""

    def __init__(self, query, scheme: ScoringScheme, lane_count: int = DEFAULT_LANES):
        self.query = query.residues if isinstance(query, SequenceRecord) else query
        self.scheme = scheme
        self.lane_count = lane_count
        self._profiles: dict[int, QueryProfile] = {}

    def _profile(self, cell_width: int) -> QueryProfile:
        prof = self._profiles.get(cell_width)
        if prof is None:
            prof = build_profile(self.query, self.scheme.matrix, self.lane_count, cell_width)
            self._profiles[cell_width] = prof
        return prof

    def align_local(self, reference, start_width: int = 8) -> AlignmentResult:
        """Striped local alignment with the 8 -> 16 -> scalar ladder."""
        ref_name = reference.id if isinstance(reference, SequenceRecord) else "ref"
        scheme = self.scheme
        widths = [w for w in CELL_WIDTHS if w >= start_width]
        outcome = None
        for width in widths:
            try:
                profile = self._profile(width)
            except QueryTooLong:
                continue
            candidate = sw_striped_score(profile, reference, scheme.gaps)
            if not candidate.saturated:
                outcome = candidate
                break
        if outcome is None:
            # Both narrow widths saturated (or cannot hold the matrix range):
            # the scalar kernel is the 32-bit end of the ladder.
            return sw_scalar(self.query, reference, scheme)
        if outcome.max_score == 0:
            return empty_result(ref_name, AlignmentMode.LOCAL)
        query_begin, ref_begin = locate_begin(self.query, reference, outcome, scheme)
        r = reference.residues if isinstance(reference, SequenceRecord) else reference
        qc = scheme.matrix.encode(self.query)
        rc = scheme.matrix.encode(r)
        cigar = banded_traceback(
            qc[query_begin : outcome.query_end + 1],
            rc[ref_begin : outcome.ref_end + 1],
            scheme.matrix.scores,
            scheme.gaps.gap_open,
            scheme.gaps.gap_extend,
            outcome.max_score,
        )
        return AlignmentResult(
            max_score=outcome.max_score,
            ref_name=ref_name,
            ref_begin=ref_begin,
            ref_end=outcome.ref_end,
            query_begin=query_begin,
            query_end=outcome.query_end,
            cigar=cigar,
            mode=AlignmentMode.LOCAL,
        )

    def align(self, reference, mode: AlignmentMode) -> AlignmentResult:
        if mode is AlignmentMode.LOCAL:
            return self.align_local(reference)
        if mode is AlignmentMode.GLOBAL:
            return nw_scalar(self.query, reference, self.scheme)
        return sg_scalar(self.query, reference, self.scheme)


def align_full(
    query,
    ref_record,
    scheme: ScoringScheme,
    mode: AlignmentMode = AlignmentMode.LOCAL,
    lane_count: int = DEFAULT_LANES,
    *,
    start_width: int = 8,
) -> AlignmentResult:
    """One-shot alignment; LOCAL takes the striped route with escalation,
    GLOBAL/SEMI_GLOBAL delegate to the scalar kernels."""
    if mode is AlignmentMode.GLOBAL:
        return nw_scalar(query, ref_record, scheme)
    if mode is AlignmentMode.SEMI_GLOBAL:
        return sg_scalar(query, ref_record, scheme)
    ctx = AlignContext(query, scheme, lane_count)
    return ctx.align_local(ref_record, start_width=start_width)

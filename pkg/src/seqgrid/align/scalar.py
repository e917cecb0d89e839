"""Scalar alignment kernels: local, global, and semi-global with traceback.

These are the exact reference implementations; the striped kernels must
reproduce them field-for-field.  The local path never materializes a full
trace matrix: it locates the alignment ends with forward/reverse passes and
rebuilds the cigar with a banded global pass over the located rectangle (the
same traceback the striped path uses, so both routes break ties identically).
Global and semi-global use full O(n*m) one-byte trace matrices.
"""

from __future__ import annotations

import math

import numpy as np

from ..errors import EmptySequence, InternalMismatch
from ..scoring import ScoringScheme
from ..seqio import SequenceRecord
from . import _kernels as K
from .result import AlignmentMode, AlignmentResult, Cigar, empty_result, ops_to_cigar

BAND_PAD = 32


def _residues(seq) -> str:
    return seq.residues if isinstance(seq, SequenceRecord) else seq


def _name(seq) -> str:
    return seq.id if isinstance(seq, SequenceRecord) else "ref"


def _prepare(query, reference, scheme: ScoringScheme):
    q = _residues(query)
    r = _residues(reference)
    if len(q) == 0:
        raise EmptySequence("query is empty")
    if len(r) == 0:
        raise EmptySequence("reference is empty")
    qc = scheme.matrix.encode(q)
    rc = scheme.matrix.encode(r)
    return qc, rc, scheme.matrix.scores, scheme.gaps.gap_open, scheme.gaps.gap_extend


def banded_traceback(qc, rc, S, go, ge, target_score: int) -> Cigar:
    """Global-alignment cigar over a located rectangle, verified by score.

    Starts from the documented band width ceil(spanDiff/2) + 32 and doubles
    until the banded score matches target_score; once the band covers the
    whole rectangle a mismatch means a kernel bug (InternalMismatch).
    """
    n = len(qc)
    m = len(rc)
    w = math.ceil(abs(m - n) / 2) + BAND_PAD
    ops = np.empty(n + m, np.int8)
    while True:
        score, count = K.banded_global(qc, rc, S, go, ge, w, ops)
        if score == target_score:
            return ops_to_cigar(ops[:count][::-1])
        covers_all = w >= n and w >= m
        if covers_all:
            raise InternalMismatch(
                f"full-band global score {score} != expected {target_score}"
            )
        w *= 2


def sw_scalar(query, reference, scheme: ScoringScheme) -> AlignmentResult:
    """Optimal local alignment (affine gaps), exact scalar route."""
    qc, rc, S, go, ge = _prepare(query, reference, scheme)
    name = _name(reference)
    best, qe, re_ = K.sw_forward(qc, rc, S, go, ge)
    best = int(best)
    if best == 0:
        return empty_result(name, AlignmentMode.LOCAL)
    qe = int(qe)
    re_ = int(re_)
    qrev = np.ascontiguousarray(qc[qe::-1])
    rrev = np.ascontiguousarray(rc[re_::-1])
    rbest, rqe, rre = K.sw_forward(qrev, rrev, S, go, ge)
    if int(rbest) != best:
        raise InternalMismatch(f"reverse-pass score {int(rbest)} != forward {best}")
    qb = qe - int(rqe)
    rb = re_ - int(rre)
    cigar = banded_traceback(qc[qb : qe + 1], rc[rb : re_ + 1], S, go, ge, best)
    return AlignmentResult(
        max_score=best,
        ref_name=name,
        ref_begin=rb,
        ref_end=re_,
        query_begin=qb,
        query_end=qe,
        cigar=cigar,
        mode=AlignmentMode.LOCAL,
    )


def nw_scalar(query, reference, scheme: ScoringScheme) -> AlignmentResult:
    """Optimal global alignment; score may be negative.

    Uses a full (n+1)x(m+1) one-byte trace matrix.
    """
    qc, rc, S, go, ge = _prepare(query, reference, scheme)
    n = len(qc)
    m = len(rc)
    trace = np.zeros((n + 1, m + 1), np.uint8)
    score = int(K.nw_fill(qc, rc, S, go, ge, trace))
    ops = np.empty(n + m, np.int8)
    count, bi, bj = K.trace_walk(trace, n, m, False, ops)
    if bi != 0 or bj != 0:
        raise InternalMismatch(f"global traceback ended at ({bi},{bj}), not (0,0)")
    cigar = ops_to_cigar(ops[:count][::-1])
    return AlignmentResult(
        max_score=score,
        ref_name=_name(reference),
        ref_begin=0,
        ref_end=m - 1,
        query_begin=0,
        query_end=n - 1,
        cigar=cigar,
        mode=AlignmentMode.GLOBAL,
    )


def sg_scalar(query, reference, scheme: ScoringScheme) -> AlignmentResult:
    """Semi-global alignment: end-gaps on both sequences are free.

    The maximum is taken over the last row and last column (which includes
    zero-scoring empty overlaps, so maxScore >= 0); reported coordinates
    exclude the free end-gaps.  Uses a full trace matrix.
    """
    qc, rc, S, go, ge = _prepare(query, reference, scheme)
    name = _name(reference)
    n = len(qc)
    m = len(rc)
    trace = np.zeros((n + 1, m + 1), np.uint8)
    last_row = np.zeros(m + 1, np.int64)
    last_col = np.zeros(n + 1, np.int64)
    K.sg_fill(qc, rc, S, go, ge, trace, last_row, last_col)
    # Candidate end cells in (refEnd, queryEnd)-ascending order: the last row
    # left of the corner, then the last column top to bottom (corner last).
    best = 0
    end = None
    for j in range(0, m):
        if last_row[j] > best:
            best = int(last_row[j])
            end = (n, j)
    for i in range(0, n + 1):
        if last_col[i] > best:
            best = int(last_col[i])
            end = (i, m)
    if end is None or best == 0:
        return empty_result(name, AlignmentMode.SEMI_GLOBAL)
    ei, ej = end
    ops = np.empty(n + m, np.int8)
    count, bi, bj = K.trace_walk(trace, ei, ej, True, ops)
    cigar = ops_to_cigar(ops[:count][::-1])
    return AlignmentResult(
        max_score=best,
        ref_name=name,
        ref_begin=bj,
        ref_end=ej - 1,
        query_begin=bi,
        query_end=ei - 1,
        cigar=cigar,
        mode=AlignmentMode.SEMI_GLOBAL,
    )

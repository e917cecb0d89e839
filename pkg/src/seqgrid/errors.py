"""Error types shared across the package.

Every error carries a stable ``code`` string (the class name) so the CLI can
emit one-line machine-parseable diagnostics, and an exit-code class:

  * usage errors   -> exit 1 (bad flags/arguments; raised by the CLI itself)
  * data errors    -> exit 2 (malformed inputs, unknown residues, bad cigars)
  * runtime errors -> exit 3 (I/O, cluster, internal failures)
"""

from __future__ import annotations

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_DATA = 2
EXIT_RUNTIME = 3


class SeqGridError(Exception):
    """Base class; ``code`` is the machine-parseable error identifier."""

    exit_code = EXIT_RUNTIME

    def __init__(self, message: str = ""):
        super().__init__(message)
        self.message = message

    @property
    def code(self) -> str:
        return type(self).__name__

    def one_line(self) -> str:
        msg = " ".join(self.message.split()) if self.message else ""
        return f"{self.code}: {msg}" if msg else f"{self.code}:"


# ---------------------------------------------------------------- data errors


class DataError(SeqGridError):
    exit_code = EXIT_DATA


class MalformedInput(DataError):
    """Input stream violates the FASTA/FASTQ format rules."""


class MalformedMatrix(DataError):
    """Substitution-matrix text is structurally invalid."""


class InvalidParams(DataError):
    """Caller-supplied parameters violate a documented precondition."""


class UnknownResidue(DataError):
    """A sequence residue is absent from the scoring matrix alphabet."""


class EmptySequence(DataError):
    """Alignment requested against an empty sequence."""


class InvalidCigar(DataError):
    """Cigar fails validation against its claimed spans."""


class QueryTooLong(DataError):
    """Profile values cannot fit the requested cell width (bias + max score)."""


class UnknownPartition(DataError):
    """Manifest has no entry for the requested partition id."""


class ManifestMismatch(DataError):
    """Shard contents disagree with the manifest's recorded counts."""


class InvalidK(DataError):
    """Top-K requested with k < 1."""


# ------------------------------------------------------------- runtime errors


class IoFailure(SeqGridError):
    """Filesystem read/write failed."""


class InternalMismatch(SeqGridError):
    """Cross-check between two computation routes disagreed (kernel bug)."""


class DuplicateWorkerId(SeqGridError):
    """A live worker already registered under this id."""


class NoManifest(SeqGridError):
    """Coordinator has no reference manifest loaded."""


class NoWorkers(SeqGridError):
    """No live workers are registered."""


class PartitionUnavailable(SeqGridError):
    """Partition could not be obtained from cache, disk, or remote fetch."""


class KernelError(SeqGridError):
    """Alignment kernel failed while executing a task."""


class JobFailed(SeqGridError):
    """Distributed job finished with tasks failed beyond the retry budget."""


class SpawnFailure(SeqGridError):
    """Benchmark harness could not start a required process."""


class ProtocolError(SeqGridError):
    """Malformed or unexpected wire-protocol frame."""

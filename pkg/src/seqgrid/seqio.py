"""FASTA/FASTQ ingestion, conversion, reference partitioning, and manifests.

Parsers are format-only: residues are uppercased and must be letters A-Z;
whether a residue is *meaningful* is decided later by the scoring matrix.
FASTA tolerates blank lines anywhere; FASTQ records are strict 4-line blocks.

A partitioned reference is a directory of plain FASTA shards named
``part-<id>.fasta`` plus a text manifest: a header line ``DSA-MANIFEST 1``
followed by one tab-separated line per partition with
partitionId, relativePath, recordCount, residueCount.
"""

from __future__ import annotations

import os
from dataclasses import dataclass, field
from pathlib import Path
from typing import IO, Iterable

from .errors import IoFailure, MalformedInput, ManifestMismatch, UnknownPartition

MANIFEST_MAGIC = "DSA-MANIFEST"
MANIFEST_VERSION = 1
MANIFEST_FILENAME = "manifest.txt"
SHARD_TEMPLATE = "part-{pid}.fasta"
FASTA_WRAP = 60

_ALLOWED = frozenset(chr(c) for c in range(ord("A"), ord("Z") + 1))


@dataclass(frozen=True)
class SequenceRecord:
    """One named sequence; quality present only for FASTQ records."""

    id: str
    residues: str
    description: str = ""
    quality: str | None = None

    def __post_init__(self):
        if not self.id:
            raise MalformedInput("record with empty id")
        if not self.residues:
            raise MalformedInput(f"record {self.id!r} has an empty sequence body")
        if self.quality is not None and len(self.quality) != len(self.residues):
            raise MalformedInput(
                f"record {self.id!r}: quality length {len(self.quality)} != "
                f"sequence length {len(self.residues)}"
            )

    def __len__(self) -> int:
        return len(self.residues)


@dataclass(frozen=True)
class PartitionEntry:
    partition_id: int
    relative_path: str
    record_count: int
    residue_count: int


@dataclass(frozen=True)
class PartitionManifest:
    format_version: int
    partitions: tuple[PartitionEntry, ...]
    base_dir: Path = field(default=Path("."), compare=False)

    def __post_init__(self):
        ids = [p.partition_id for p in self.partitions]
        if ids != list(range(len(ids))):
            raise MalformedInput(f"partition ids must be 0..n-1 contiguous, got {ids}")

    def __len__(self) -> int:
        return len(self.partitions)

    @property
    def total_residues(self) -> int:
        return sum(p.residue_count for p in self.partitions)

    def entry(self, partition_id: int) -> PartitionEntry:
        if 0 <= partition_id < len(self.partitions):
            return self.partitions[partition_id]
        raise UnknownPartition(
            f"partition {partition_id} not in manifest (have 0..{len(self.partitions) - 1})"
        )


@dataclass(frozen=True)
class Partition:
    partition_id: int
    records: tuple[SequenceRecord, ...]

    def __post_init__(self):
        ids = [r.id for r in self.records]
        if len(set(ids)) != len(ids):
            raise MalformedInput(f"duplicate record id within partition {self.partition_id}")

    @property
    def residue_count(self) -> int:
        return sum(len(r) for r in self.records)


# ---------------------------------------------------------------------- parse


def _to_lines(data: bytes | str) -> list[str]:
    text = data.decode("ascii", errors="strict") if isinstance(data, bytes) else data
    return text.replace("\r\n", "\n").replace("\r", "\n").split("\n")


def _clean_residues(raw: str, where: str) -> str:
    seq = raw.upper()
    bad = set(seq) - _ALLOWED
    if bad:
        raise MalformedInput(f"{where}: residue {sorted(bad)[0]!r} outside A-Z")
    return seq


def _split_header(line: str, marker: str) -> tuple[str, str]:
    body = line[1:].strip()
    if not body:
        raise MalformedInput(f"{marker} header with empty id")
    parts = body.split(None, 1)
    return parts[0], parts[1] if len(parts) > 1 else ""


def parse_fasta(data: bytes | str) -> list[SequenceRecord]:
    """Parse FASTA; multi-line bodies concatenated, blank lines ignored."""
    lines = _to_lines(data)
    records: list[SequenceRecord] = []
    header: tuple[str, str] | None = None
    body: list[str] = []

    def flush():
        if header is None:
            return
        seq = _clean_residues("".join(body), f"record {header[0]!r}")
        if not seq:
            raise MalformedInput(f"record {header[0]!r} has an empty sequence body")
        records.append(SequenceRecord(id=header[0], description=header[1], residues=seq))

    for line in lines:
        stripped = line.strip()
        if not stripped:
            continue
        if stripped.startswith(">"):
            flush()
            header = _split_header(stripped, "FASTA")
            body = []
        else:
            if header is None:
                raise MalformedInput("FASTA input does not start with a '>' header")
            body.append(stripped)
    flush()
    if not records and any(ln.strip() for ln in lines):
        raise MalformedInput("FASTA input does not start with a '>' header")
    return records


def parse_fastq(data: bytes | str) -> list[SequenceRecord]:
    """Parse strict 4-line FASTQ records ('@' header, sequence, '+', quality)."""
    lines = _to_lines(data)
    # Trailing blank lines are fine; interior blanks are not.
    while lines and not lines[-1].strip():
        lines.pop()
    records: list[SequenceRecord] = []
    i = 0
    while i < len(lines):
        chunk = lines[i : i + 4]
        if len(chunk) < 4:
            raise MalformedInput(f"truncated FASTQ record at line {i + 1}")
        head, seq_line, plus, qual_line = (c.strip() for c in chunk)
        if not head.startswith("@"):
            raise MalformedInput(f"line {i + 1}: expected '@' header, got {head[:20]!r}")
        if not plus.startswith("+"):
            raise MalformedInput(f"line {i + 3}: expected '+' separator, got {plus[:20]!r}")
        if not seq_line or not qual_line:
            raise MalformedInput(f"blank sequence or quality line in record at line {i + 1}")
        rid, desc = _split_header(head, "FASTQ")
        seq = _clean_residues(seq_line, f"record {rid!r}")
        if len(qual_line) != len(seq):
            raise MalformedInput(
                f"record {rid!r}: quality length {len(qual_line)} != sequence length {len(seq)}"
            )
        records.append(SequenceRecord(id=rid, description=desc, residues=seq, quality=qual_line))
        i += 4
    return records


def sniff_format(data: bytes | str) -> str:
    """Return 'fasta' or 'fastq' from the first non-blank byte."""
    lines = _to_lines(data)
    for line in lines:
        s = line.strip()
        if not s:
            continue
        if s.startswith(">"):
            return "fasta"
        if s.startswith("@"):
            return "fastq"
        break
    raise MalformedInput("input is neither FASTA ('>') nor FASTQ ('@')")


# ---------------------------------------------------------------------- write


def write_fasta(records: Iterable[SequenceRecord], out: IO[str], wrap: int = FASTA_WRAP) -> None:
    for rec in records:
        header = f">{rec.id} {rec.description}".rstrip()
        out.write(header + "\n")
        for start in range(0, len(rec.residues), wrap):
            out.write(rec.residues[start : start + wrap] + "\n")


def write_fastq(records: Iterable[SequenceRecord], out: IO[str], fill_quality: str = "I") -> None:
    """Write FASTQ; records lacking quality get a constant fill character."""
    for rec in records:
        header = f"@{rec.id} {rec.description}".rstrip()
        quality = rec.quality if rec.quality is not None else fill_quality * len(rec.residues)
        out.write(f"{header}\n{rec.residues}\n+\n{quality}\n")


def fasta_text(records: Iterable[SequenceRecord], wrap: int = FASTA_WRAP) -> str:
    import io

    buf = io.StringIO()
    write_fasta(records, buf, wrap=wrap)
    return buf.getvalue()


# ------------------------------------------------------------------ partition


def partition_reference(
    records: list[SequenceRecord], target_residues: int, out_dir: str | os.PathLike
) -> PartitionManifest:
    """Greedy-fill records into FASTA shards and write a manifest.

    A new partition starts when adding the next record would exceed the
    target and the current partition is non-empty; records are never split.
    """
    if target_residues < 1:
        raise MalformedInput(f"targetResiduesPerPartition must be >= 1, got {target_residues}")
    if not records:
        raise MalformedInput("no records to partition")
    ids = [r.id for r in records]
    if len(set(ids)) != len(ids):
        dup = next(i for i in ids if ids.count(i) > 1)
        raise MalformedInput(f"duplicate record id {dup!r} in reference input")

    groups: list[list[SequenceRecord]] = [[]]
    filled = 0
    for rec in records:
        if groups[-1] and filled + len(rec) > target_residues:
            groups.append([])
            filled = 0
        groups[-1].append(rec)
        filled += len(rec)

    out_path = Path(out_dir)
    entries = []
    try:
        out_path.mkdir(parents=True, exist_ok=True)
        for pid, group in enumerate(groups):
            rel = SHARD_TEMPLATE.format(pid=pid)
            with open(out_path / rel, "w", encoding="ascii", newline="\n") as fh:
                write_fasta(group, fh)
            entries.append(
                PartitionEntry(
                    partition_id=pid,
                    relative_path=rel,
                    record_count=len(group),
                    residue_count=sum(len(r) for r in group),
                )
            )
        manifest = PartitionManifest(
            format_version=MANIFEST_VERSION, partitions=tuple(entries), base_dir=out_path
        )
        write_manifest(manifest, out_path / MANIFEST_FILENAME)
    except OSError as exc:
        raise IoFailure(f"cannot write partition output under {out_path}: {exc}") from exc
    return manifest


def write_manifest(manifest: PartitionManifest, path: str | os.PathLike) -> None:
    try:
        with open(path, "w", encoding="ascii", newline="\n") as fh:
            fh.write(f"{MANIFEST_MAGIC} {manifest.format_version}\n")
            for p in manifest.partitions:
                fh.write(
                    f"{p.partition_id}\t{p.relative_path}\t{p.record_count}\t{p.residue_count}\n"
                )
    except OSError as exc:
        raise IoFailure(f"cannot write manifest {path}: {exc}") from exc


def read_manifest(path: str | os.PathLike) -> PartitionManifest:
    path = Path(path)
    try:
        text = path.read_text(encoding="ascii")
    except OSError as exc:
        raise IoFailure(f"cannot read manifest {path}: {exc}") from exc
    lines = [ln for ln in text.splitlines() if ln.strip()]
    if not lines:
        raise MalformedInput(f"manifest {path} is empty")
    head = lines[0].split()
    if len(head) != 2 or head[0] != MANIFEST_MAGIC:
        raise MalformedInput(f"manifest {path} missing '{MANIFEST_MAGIC} <version>' header")
    try:
        version = int(head[1])
    except ValueError:
        raise MalformedInput(f"manifest {path}: bad version {head[1]!r}") from None
    if version != MANIFEST_VERSION:
        raise MalformedInput(f"manifest {path}: unsupported version {version}")
    entries = []
    for ln in lines[1:]:
        cols = ln.split("\t")
        if len(cols) != 4:
            raise MalformedInput(f"manifest {path}: expected 4 tab-separated columns: {ln!r}")
        try:
            entries.append(
                PartitionEntry(
                    partition_id=int(cols[0]),
                    relative_path=cols[1],
                    record_count=int(cols[2]),
                    residue_count=int(cols[3]),
                )
            )
        except ValueError:
            raise MalformedInput(f"manifest {path}: non-integer field in {ln!r}") from None
    return PartitionManifest(
        format_version=version, partitions=tuple(entries), base_dir=path.parent
    )


def is_manifest_file(path: str | os.PathLike) -> bool:
    """True if the file starts with the manifest magic (cheap sniff)."""
    try:
        with open(path, "rb") as fh:
            return fh.read(len(MANIFEST_MAGIC)) == MANIFEST_MAGIC.encode("ascii")
    except OSError:
        return False


def load_partition(manifest: PartitionManifest, partition_id: int) -> Partition:
    """Load one shard and cross-check it against the manifest counts."""
    entry = manifest.entry(partition_id)
    shard = manifest.base_dir / entry.relative_path
    try:
        data = shard.read_bytes()
    except OSError as exc:
        raise IoFailure(f"cannot read shard {shard}: {exc}") from exc
    return partition_from_bytes(entry, data)


def partition_from_bytes(entry: PartitionEntry, data: bytes) -> Partition:
    """Build a Partition from raw shard bytes, enforcing manifest counts."""
    records = parse_fasta(data)
    residues = sum(len(r) for r in records)
    if len(records) != entry.record_count or residues != entry.residue_count:
        raise ManifestMismatch(
            f"partition {entry.partition_id}: shard has {len(records)} records /"
            f" {residues} residues, manifest says {entry.record_count} /"
            f" {entry.residue_count}"
        )
    return Partition(partition_id=entry.partition_id, records=tuple(records))


def load_all_records(manifest: PartitionManifest) -> list[SequenceRecord]:
    """All records across partitions, in partition-id order."""
    out: list[SequenceRecord] = []
    for entry in manifest.partitions:
        out.extend(load_partition(manifest, entry.partition_id).records)
    return out

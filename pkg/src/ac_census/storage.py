"""
Gzip JSON-lines storage for census records.

This module provides deterministic, atomic record files for the census
pipeline. Layout of a census directory:

    L1.jsonl.gz ... L5.jsonl.gz       records by the last list they reached
    shards/shard-NNN.Lk.jsonl.gz      per-shard partial files of stages 1-3
    shards/shard-NNN.done.json        shard completion markers
    run.json                          run metadata
    sweep.json                        summary of the last stage 6 sweep
    certs/<record id>.txt             certificates
    report.txt, report.json           summary report

Gzip streams are written with mtime 0 and no embedded file name, so
identical record sequences produce identical bytes.
"""

import gzip
import json
import logging
import shutil
import tempfile
import zlib
from pathlib import Path
from typing import Dict, Iterable, Iterator, Optional

from pydantic import BaseModel, Field, ValidationError

from .error_handling import StorageError
from .models import CensusRecord, RunMetadata, StageName, SweepSummary

logger = logging.getLogger(__name__)

RECORD_SUFFIX = ".jsonl.gz"
RUN_FILE = "run.json"
SWEEP_FILE = "sweep.json"
SHARDS_DIR = "shards"
CERTS_DIR = "certs"


class ShardMarker(BaseModel):
    """Completion marker for one shard of stages 1-3."""
    shard_index: int
    shard_count: int
    fingerprint: str = Field(..., description="Configuration the shard was computed with")
    counts: Dict[str, int] = Field(default_factory=dict)


class RecordWriter:
    """Incremental gzip JSON-lines writer, moved into place on a clean exit."""

    def __init__(self, path: Path):
        self.path = Path(path)
        self.count = 0
        self._raw = None
        self._stream = None

    def __enter__(self) -> "RecordWriter":
        self.path.parent.mkdir(parents=True, exist_ok=True)
        self._raw = tempfile.NamedTemporaryFile(
            dir=self.path.parent, prefix=f".{self.path.name}.", suffix=".tmp", delete=False
        )
        self._stream = gzip.GzipFile(filename="", mode="wb", fileobj=self._raw, mtime=0)
        return self

    def write_line(self, line: str) -> None:
        self._stream.write(line.encode("utf-8"))
        self._stream.write(b"\n")
        self.count += 1

    def write_record(self, record: CensusRecord) -> None:
        self.write_line(record.model_dump_json())

    def __exit__(self, exc_type, exc, traceback) -> None:
        temp_path = Path(self._raw.name)
        self._stream.close()
        self._raw.close()
        if exc_type is not None:
            temp_path.unlink(missing_ok=True)
            return
        shutil.move(str(temp_path), str(self.path))
        logger.debug(f"Wrote {self.count} lines to {self.path}")


class CensusStorage:
    """Reads and writes the files of one census directory."""

    def __init__(self, directory: Path):
        self.directory = Path(directory)

    @property
    def shards_dir(self) -> Path:
        return self.directory / SHARDS_DIR

    @property
    def certs_dir(self) -> Path:
        return self.directory / CERTS_DIR

    @property
    def run_path(self) -> Path:
        return self.directory / RUN_FILE

    @property
    def sweep_path(self) -> Path:
        return self.directory / SWEEP_FILE

    def stage_path(self, stage: StageName) -> Path:
        return self.directory / f"{stage.value}{RECORD_SUFFIX}"

    def shard_path(self, shard_index: int, stage: StageName) -> Path:
        return self.shards_dir / f"shard-{shard_index:03d}.{stage.value}{RECORD_SUFFIX}"

    def marker_path(self, shard_index: int) -> Path:
        return self.shards_dir / f"shard-{shard_index:03d}.done.json"

    def has_records(self) -> bool:
        return any(self.stage_path(stage).exists() for stage in StageName)

    def _atomic_target(self, path: Path):
        path.parent.mkdir(parents=True, exist_ok=True)
        return tempfile.NamedTemporaryFile(
            dir=path.parent, prefix=f".{path.name}.", suffix=".tmp", delete=False
        )

    def writer(self, path: Path) -> RecordWriter:
        return RecordWriter(path)

    def write_lines(self, path: Path, lines: Iterable[str]) -> int:
        """Write newline-terminated lines to a gzip file atomically."""
        with RecordWriter(path) as out:
            for line in lines:
                out.write_line(line)
        return out.count

    def write_records(self, path: Path, records: Iterable[CensusRecord]) -> int:
        return self.write_lines(path, (record.model_dump_json() for record in records))

    def iter_lines(self, path: Path) -> Iterator[str]:
        """Stream the JSON lines of a record file."""
        path = Path(path)
        if not path.exists():
            raise StorageError(f"record file does not exist: {path}", path=str(path))
        try:
            with gzip.open(path, "rt", encoding="utf-8") as stream:
                for line in stream:
                    line = line.rstrip("\n")
                    if line:
                        yield line
        except (OSError, EOFError, zlib.error, UnicodeDecodeError) as e:
            raise StorageError(f"corrupt record file {path}: {e}", path=str(path)) from e

    def iter_records(self, path: Path) -> Iterator[CensusRecord]:
        for number, line in enumerate(self.iter_lines(path), start=1):
            try:
                yield CensusRecord.model_validate_json(line)
            except ValidationError as e:
                raise StorageError(f"malformed record at {path}:{number}: {e}", path=str(path)) from e

    def read_stage(self, stage: StageName) -> Iterator[CensusRecord]:
        return self.iter_records(self.stage_path(stage))

    def write_json(self, path: Path, model: BaseModel) -> None:
        path = Path(path)
        with self._atomic_target(path) as raw:
            temp_path = Path(raw.name)
            raw.write(model.model_dump_json(indent=2).encode("utf-8"))
            raw.write(b"\n")
        shutil.move(str(temp_path), str(path))

    def write_marker(self, marker: ShardMarker) -> None:
        self.write_json(self.marker_path(marker.shard_index), marker)

    def read_marker(self, shard_index: int) -> Optional[ShardMarker]:
        path = self.marker_path(shard_index)
        if not path.exists():
            return None
        try:
            return ShardMarker.model_validate_json(path.read_text(encoding="utf-8"))
        except (ValidationError, json.JSONDecodeError) as e:
            logger.warning(f"Ignoring unreadable shard marker {path}: {e}")
            return None

    def write_run_metadata(self, metadata: RunMetadata) -> None:
        self.write_json(self.run_path, metadata)

    def read_run_metadata(self) -> Optional[RunMetadata]:
        if not self.run_path.exists():
            return None
        try:
            return RunMetadata.model_validate_json(self.run_path.read_text(encoding="utf-8"))
        except ValidationError as e:
            raise StorageError(f"corrupt run metadata {self.run_path}: {e}", path=str(self.run_path)) from e

    def write_sweep_summary(self, summary: SweepSummary) -> None:
        self.write_json(self.sweep_path, summary)

    def read_sweep_summary(self) -> Optional[SweepSummary]:
        if not self.sweep_path.exists():
            return None
        try:
            return SweepSummary.model_validate_json(self.sweep_path.read_text(encoding="utf-8"))
        except (ValidationError, json.JSONDecodeError) as e:
            logger.warning(f"Ignoring unreadable sweep summary {self.sweep_path}: {e}")
            return None

    def clear_sweep_summary(self) -> None:
        self.sweep_path.unlink(missing_ok=True)

    def clear_shards(self) -> None:
        if self.shards_dir.exists():
            shutil.rmtree(self.shards_dir)


__all__ = ["ShardMarker", "RecordWriter", "CensusStorage", "RECORD_SUFFIX"]

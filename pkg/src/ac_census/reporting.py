"""
Census reports.

This module re-derives stage counts, bucket totals, group orders and search
status tallies from the record files of a census directory, and writes them
as ``report.txt`` (human-readable) and ``report.json`` (machine-readable).
Nothing in a report exists only in the report.
"""

import logging
from collections import Counter
from pathlib import Path
from typing import Any, Dict, List, Optional

from pydantic import BaseModel, Field

from .error_handling import StorageError
from .models import ACStatus, ConventionCounts, CountComparison, StageName, StageTiming, SweepSummary, TerminalBucket
from .storage import CensusStorage

logger = logging.getLogger(__name__)

REPORT_TEXT = "report.txt"
REPORT_JSON = "report.json"
GA_PARAMETERS_NOTE = (
    "Genetic search parameters (population, tournament, elitism, move weights, "
    "restarts) are this toolkit's own choices."
)


class Report(BaseModel):
    """Summary of one census directory."""

    counts: Dict[str, int] = Field(default_factory=dict, description="|L1| ... |L5|, nontrivial, exceeded")
    buckets: Dict[str, int] = Field(default_factory=dict, description="Terminal bucket sizes")
    partition_ok: bool = Field(False, description="Buckets sum to |L1|")
    stage_timings: List[StageTiming] = Field(default_factory=list)
    convention_flags: Dict[str, Any] = Field(default_factory=dict)
    order_histogram: Dict[str, int] = Field(default_factory=dict, description="Group orders over L4")
    ac_status_tally: Dict[str, int] = Field(default_factory=dict)
    budget_exhausted: List[str] = Field(default_factory=list, description="L5 presentations open after a sweep")
    not_yet_searched: List[str] = Field(default_factory=list, description="Open L5 presentations no sweep has visited")
    sweep: Optional[SweepSummary] = None
    published_comparison: List[CountComparison] = Field(default_factory=list)
    convention_audit: List[ConventionCounts] = Field(default_factory=list)
    missing_files: List[str] = Field(default_factory=list)
    notes: List[str] = Field(default_factory=list)


def _convention_notes(comparison: List[CountComparison], audit: List[ConventionCounts]) -> List[str]:
    """Which relator conventions reproduce the published counts that differ."""
    notes = []
    for item in comparison:
        if item.matches:
            continue
        note = f"|{item.list_name}| = {item.observed} differs from the published {item.published}"
        reproducing = [a.label for a in audit if a.counts.get(item.list_name) == item.published]
        if reproducing:
            note += "; reproduced by: " + "; ".join(reproducing)
        elif not audit:
            note += "; rerun with --audit to count every relator convention"
        notes.append(note)
    return notes


class ReportGenerator:
    """Builds a Report from record files alone."""

    def __init__(self, storage: CensusStorage):
        self.storage = storage

    def _count_lines(self, stage: StageName) -> Optional[int]:
        path = self.storage.stage_path(stage)
        if not path.exists():
            return None
        return sum(1 for _ in self.storage.iter_lines(path))

    def generate(self) -> Report:
        if not self.storage.has_records():
            raise StorageError(f"no census record files in {self.storage.directory}",
                               path=str(self.storage.directory))
        report = Report()
        buckets: Counter = Counter({bucket.value: 0 for bucket in TerminalBucket})
        orders: Counter = Counter()
        statuses: Counter = Counter({status.value: 0 for status in ACStatus})
        report.sweep = self.storage.read_sweep_summary()
        open_list = report.budget_exhausted if report.sweep is not None else report.not_yet_searched

        simple = {
            StageName.L1: TerminalBucket.DELETED_STAGE2,
            StageName.L2: TerminalBucket.DELETED_STAGE3,
            StageName.L3: TerminalBucket.DEDUP_COLLAPSED,
        }
        for stage, bucket in simple.items():
            count = self._count_lines(stage)
            if count is None:
                report.missing_files.append(self.storage.stage_path(stage).name)
                continue
            buckets[bucket.value] += count
        if buckets[TerminalBucket.DELETED_STAGE3.value]:
            statuses[ACStatus.STANDARD.value] += buckets[TerminalBucket.DELETED_STAGE3.value]

        for stage in (StageName.L4, StageName.L5):
            path = self.storage.stage_path(stage)
            if not path.exists():
                report.missing_files.append(path.name)
                continue
            for record in self.storage.iter_records(path):
                buckets[record.bucket.value] += 1
                orders[str(record.order)] += 1
                if stage == StageName.L5:
                    status = record.ac_status or ACStatus.OPEN
                    statuses[status.value] += 1
                    if status == ACStatus.OPEN:
                        open_list.append(record.presentation_line)

        l5 = buckets[TerminalBucket.TRIVIAL.value]
        nontrivial = buckets[TerminalBucket.NONTRIVIAL.value]
        exceeded = buckets[TerminalBucket.EXCEEDED.value]
        l4 = l5 + nontrivial + exceeded
        l3 = l4 + buckets[TerminalBucket.DEDUP_COLLAPSED.value]
        l2 = l3 + buckets[TerminalBucket.DELETED_STAGE3.value]
        l1 = l2 + buckets[TerminalBucket.DELETED_STAGE2.value]
        report.counts = {"L1": l1, "L2": l2, "L3": l3, "L4": l4, "L5": l5,
                         "nontrivial": nontrivial, "exceeded": exceeded}
        report.buckets = dict(buckets)

        metadata = self.storage.read_run_metadata()
        if metadata is not None:
            report.stage_timings = metadata.stage_timings
            report.convention_flags = metadata.convention_flags
            report.published_comparison = metadata.published_comparison
            report.convention_audit = metadata.convention_audit
            report.notes.extend(_convention_notes(metadata.published_comparison, metadata.convention_audit))
            generated = metadata.extra.get("generated")
            report.partition_ok = not report.missing_files and (generated is None or generated == l1)
        else:
            report.partition_ok = not report.missing_files
            report.notes.append("run.json missing: timings and convention flags unavailable")

        report.order_histogram = dict(sorted(orders.items(), key=lambda item: (item[0] == "exceeded", item[0])))
        report.ac_status_tally = dict(statuses)
        report.notes.append(GA_PARAMETERS_NOTE)
        if report.missing_files:
            logger.warning(f"partial census directory, missing {report.missing_files}")
        return report


def format_report(report: Report) -> str:
    lines = ["Census report", "=" * 13, "", "Stage counts:"]
    for name, count in report.counts.items():
        lines.append(f"  {name:<12} {count:>10}")
    lines += ["", "Terminal buckets:"]
    for name, count in report.buckets.items():
        lines.append(f"  {name:<16} {count:>10}")
    lines.append(f"  partition check: {'ok' if report.partition_ok else 'FAILED'}")
    if report.convention_flags:
        lines += ["", "Conventions:"]
        lines += [f"  {name}: {value}" for name, value in report.convention_flags.items()]
    if report.published_comparison:
        lines += ["", "Published counts:"]
        lines += [f"  {c.list_name:<12} published {c.published:>8}  observed {c.observed:>8}  "
                  f"{'ok' if c.matches else 'differs'}" for c in report.published_comparison]
    if report.convention_audit:
        lines += ["", "Convention audit (stages 1-3):"]
        for audit in report.convention_audit:
            counts = "  ".join(f"{name} {count}" for name, count in audit.counts.items())
            lines.append(f"  {audit.label:<32} {counts}")
    if report.stage_timings:
        lines += ["", "Timings:"]
        lines += [f"  {t.stage:<14} {t.seconds:>10.2f} s  ({t.records} records)" for t in report.stage_timings]
    lines += ["", "Group orders over L4:"]
    lines += [f"  {order:>9}: {count}" for order, count in report.order_histogram.items()]
    lines += ["", "AC status:"]
    lines += [f"  {status:<22} {count:>10}" for status, count in report.ac_status_tally.items()]
    if report.budget_exhausted:
        lines += ["", f"Open after search ({len(report.budget_exhausted)}):"]
        lines += [f"  {line}" for line in report.budget_exhausted]
    if report.not_yet_searched:
        lines += ["", f"Not yet searched ({len(report.not_yet_searched)}):"]
        lines += [f"  {line}" for line in report.not_yet_searched]
    if report.missing_files:
        lines += ["", "Missing files: " + ", ".join(report.missing_files)]
    lines += ["", *report.notes]
    return "\n".join(lines) + "\n"


def write_report(census_dir: Path) -> Report:
    """Regenerate report.txt and report.json for ``census_dir``."""
    storage = CensusStorage(census_dir)
    report = ReportGenerator(storage).generate()
    (storage.directory / REPORT_TEXT).write_text(format_report(report), encoding="utf-8")
    (storage.directory / REPORT_JSON).write_text(report.model_dump_json(indent=2) + "\n", encoding="utf-8")
    logger.info(f"report written to {storage.directory / REPORT_TEXT}")
    return report


__all__ = ["Report", "ReportGenerator", "format_report", "write_report", "GA_PARAMETERS_NOTE"]

"""
Census of balanced two-generator presentations.

Stages:

    1  generate every ordered pair (r, s) with |r| + |s| <= max_total_length
    2  keep presentations with trivial abelianization
    3  drop presentations with a primitive relator (AC-standard)
    4  keep one presentation per canonical key (rotations and relator swap)
    5  order of the group by coset enumeration; order 1 goes to L5
    6  certificate sweep over L5 (bundled certificates, then genetic search)

Stages 1-3 run per shard; a shard owns the pairs whose first relator hashes
to it. Stage 4 merges the shard streams in generation order, so results do
not depend on the shard count.
"""

import hashlib
import heapq
import json
import logging
import time
from collections import Counter
from concurrent.futures import ProcessPoolExecutor, as_completed
from dataclasses import dataclass, field
from datetime import datetime
from pathlib import Path
from typing import Callable, Dict, Iterable, Iterator, List, Optional, Tuple

import psutil
from pydantic import BaseModel, Field, model_validator
from tqdm import tqdm

from .abelianization import has_trivial_abelianization, invariant_factors
from .fixtures import AK2, POWER_VARIANTS
from .gasearch import CertificateCache, GAConfig, SearchMode, evolve_islands
from .library import hard_presentation_name, library_certificate
from .models import (
    EXCEEDED,
    ACStatus,
    CensusRecord,
    ConventionCounts,
    CountComparison,
    RunMetadata,
    StageName,
    StageTiming,
    SweepSummary,
)
from .presentation import (
    Certificate,
    Presentation,
    canonical_key,
    format_presentation,
    parse_presentation,
    standard_presentation,
    total_length,
)
from .reporting import write_report
from .storage import CensusStorage, ShardMarker
from .toddcoxeter import enumerate_cosets
from .whitehead import is_primitive
from .word import cyclic_reduce, enumerate_reduced_words, format_word

logger = logging.getLogger(__name__)

CENSUS_RANK = 2
STAGE_COUNT_NAMES = ("L1", "L2", "L3")

# Counts reported for the length-12 census. Its |L3| is reproduced by
# freely reduced relators; cyclically reduced relators give 109440.
PUBLISHED_LENGTH = 12
PUBLISHED_COUNTS: Dict[str, int] = {"L3": 122_240, "L4": 1_648, "L5": 1_632, "nontrivial": 16}
_LETTER_CODES = {"x": 0, "X": 1, "y": 2, "Y": 3}

RecordSink = Callable[[CensusRecord], None]


class StageConfig(BaseModel):
    """Parameters of one census run."""

    max_total_length: int = Field(12, ge=2, description="Largest |r| + |s|")
    relators_cyclically_reduced: bool = Field(True, description="Generate only cyclically reduced relators")
    ordered_pairs: bool = Field(True, description="Generate ordered pairs rather than r <= s")
    min_relator_length: int = Field(1, ge=1, description="Shortest relator generated")
    coset_budget: int = Field(50_000, ge=1, description="Live-coset budget of stage 5")
    shard_count: int = Field(1, ge=1, description="Parallel shards for stages 1-3")
    output_path: Path = Field(Path("census_out"), description="Census directory")

    @model_validator(mode="after")
    def check_lengths(self):
        if self.max_total_length < 2 * self.min_relator_length:
            raise ValueError("max_total_length must be at least 2 * min_relator_length")
        return self

    def fingerprint(self) -> str:
        """Identity of the settings that determine stages 1-3 output."""
        payload = self.model_dump(exclude={"output_path", "coset_budget"})
        return hashlib.sha256(json.dumps(payload, sort_keys=True).encode()).hexdigest()[:16]


@dataclass
class Stage5Result:
    trivial: List[Tuple[Presentation, int]] = field(default_factory=list)
    nontrivial: List[Tuple[Presentation, int]] = field(default_factory=list)
    exceeded: List[Presentation] = field(default_factory=list)


@dataclass
class CensusSummary:
    counts: Dict[str, int]
    directory: Path


def record_id(p: Presentation) -> str:
    return hashlib.sha256(format_presentation(p).encode("utf-8")).hexdigest()[:16]


def shard_of(relator_text: str, shard_count: int) -> int:
    digest = hashlib.sha256(relator_text.encode("utf-8")).digest()
    return int.from_bytes(digest[:8], "big") % shard_count


def candidate_order_key(p: Presentation) -> Tuple:
    """Generation order: total length, then each relator by length and letters."""
    key: List = [total_length(p)]
    for w in p.relators:
        key.extend((len(w), w.letters))
    return tuple(key)


def order_key_from_text(relators: List[str]) -> Tuple:
    """candidate_order_key computed from rank-2 relator text."""
    key: List = [sum(len(r) for r in relators)]
    for r in relators:
        key.extend((len(r), tuple(_LETTER_CODES[c] for c in r)))
    return tuple(key)


def generate_candidates(cfg: StageConfig, shard_index: Optional[int] = None) -> Iterator[Presentation]:
    """Stage 1: every pair (r, s) within the length bound, in generation order.

    With ``shard_index`` only the pairs owned by that shard are produced.
    """
    low, high = cfg.min_relator_length, cfg.max_total_length - cfg.min_relator_length
    words = {
        n: list(enumerate_reduced_words(n, CENSUS_RANK, cfg.relators_cyclically_reduced))
        for n in range(low, high + 1)
    }
    for total in range(2 * low, cfg.max_total_length + 1):
        for first_length in range(low, total - low + 1):
            second_length = total - first_length
            for r in words[first_length]:
                if shard_index is not None and shard_of(format_word(r), cfg.shard_count) != shard_index:
                    continue
                for s in words[second_length]:
                    if not cfg.ordered_pairs and (second_length, s.letters) < (first_length, r.letters):
                        continue
                    yield Presentation(CENSUS_RANK, (r, s))


def census_key(p: Presentation) -> bytes:
    """canonical_key of the tuple of cyclic cores (conjugation is an AC-move)."""
    if all(w.is_cyclically_reduced for w in p.relators):
        return canonical_key(p)
    return canonical_key(Presentation(p.rank, tuple(cyclic_reduce(w)[0] for w in p.relators)))


def _record(p: Presentation, stage: StageName, **attributes) -> CensusRecord:
    return CensusRecord(
        id=record_id(p),
        relators=[format_word(w) for w in p.relators],
        total_length=total_length(p),
        stage_reached=stage,
        **attributes,
    )


def filter_stage2(stream: Iterable[Presentation], sink: Optional[RecordSink] = None) -> Iterator[Presentation]:
    """Stage 2: keep presentations with trivial abelianization."""
    for p in stream:
        if has_trivial_abelianization(p):
            yield p
        elif sink is not None:
            sink(_record(p, StageName.L1, invariant_factors=list(invariant_factors(p))))


def filter_stage3(stream: Iterable[Presentation], sink: Optional[RecordSink] = None) -> Iterator[Presentation]:
    """Stage 3: keep presentations none of whose relators is primitive.

    A presentation with a primitive relator is AC-equivalent to the standard one.
    """
    for p in stream:
        flags = [is_primitive(w) for w in p.relators]
        if not any(flags):
            yield p
        elif sink is not None:
            sink(_record(p, StageName.L2, invariant_factors=list(invariant_factors(p)),
                         primitive_flags=flags, ac_status=ACStatus.STANDARD))


def dedup_stage4(stream: Iterable[Presentation], sink: Optional[RecordSink] = None) -> Iterator[Presentation]:
    """Stage 4: first presentation of each canonical key, in stream order.

    The stream must be in generation order for the representative to be the
    ordering-least member of its class.
    """
    representatives: Dict[bytes, str] = {}
    for p in stream:
        key = census_key(p)
        if key not in representatives:
            representatives[key] = record_id(p)
            yield p
        elif sink is not None:
            sink(_record(p, StageName.L3, invariant_factors=list(invariant_factors(p)),
                         primitive_flags=[False] * p.rank, canonical_key=key.hex(),
                         representative_id=representatives[key]))


def classify_stage5(stream: Iterable[Presentation], coset_budget: int) -> Stage5Result:
    """Stage 5: group order by coset enumeration."""
    result = Stage5Result()
    for p in stream:
        enumeration = enumerate_cosets(p, coset_budget)
        if not enumeration.is_finite:
            result.exceeded.append(p)
        elif enumeration.order == 1:
            result.trivial.append((p, enumeration.order))
        else:
            result.nontrivial.append((p, enumeration.order))
    return result


def _l3_record(p: Presentation, stage: StageName, **attributes) -> CensusRecord:
    return _record(p, stage, invariant_factors=list(invariant_factors(p)),
                   primitive_flags=[False] * p.rank, canonical_key=census_key(p).hex(), **attributes)


def run_shard(cfg: StageConfig, shard_index: int) -> ShardMarker:
    """Stages 1-3 for one shard, written to the shard files and marked done."""
    storage = CensusStorage(cfg.output_path)
    shard = shard_index if cfg.shard_count > 1 else None
    generated = 0

    def counted(stream: Iterable[Presentation]) -> Iterator[Presentation]:
        nonlocal generated
        for p in stream:
            generated += 1
            yield p

    with storage.writer(storage.shard_path(shard_index, StageName.L1)) as deleted2, \
            storage.writer(storage.shard_path(shard_index, StageName.L2)) as deleted3, \
            storage.writer(storage.shard_path(shard_index, StageName.L3)) as kept:
        writers = {StageName.L1: deleted2, StageName.L2: deleted3}

        def sink(record: CensusRecord) -> None:
            writers[record.stage_reached].write_record(record)

        survivors = filter_stage3(filter_stage2(counted(generate_candidates(cfg, shard)), sink), sink)
        for p in survivors:
            kept.write_record(_l3_record(p, StageName.L3))

    counts = {"L1": generated, "L2": generated - deleted2.count, "L3": kept.count}
    marker = ShardMarker(shard_index=shard_index, shard_count=cfg.shard_count,
                         fingerprint=cfg.fingerprint(), counts=counts)
    storage.write_marker(marker)
    logger.info(f"shard {shard_index}: L1 {counts['L1']}, L2 {counts['L2']}, L3 {counts['L3']}")
    return marker


def count_stages(cfg: StageConfig) -> Tuple[Dict[str, int], Dict[str, int]]:
    """|L1|, |L2|, |L3| of ``cfg`` without writing records.

    The second dict counts the diagonal pairs (r, r) among each list.
    """
    counts: Counter = Counter({name: 0 for name in STAGE_COUNT_NAMES})
    diagonal: Counter = Counter({name: 0 for name in STAGE_COUNT_NAMES})

    def tally(stream: Iterable[Presentation], name: str) -> Iterator[Presentation]:
        for p in stream:
            counts[name] += 1
            if p.relators[0] == p.relators[1]:
                diagonal[name] += 1
            yield p

    survivors = tally(filter_stage3(tally(filter_stage2(tally(generate_candidates(cfg), "L1")), "L2")), "L3")
    for _ in survivors:
        pass
    return dict(counts), dict(diagonal)


def convention_audit(max_total_length: int, min_relator_length: int = 1) -> List[ConventionCounts]:
    """Stages 1-3 counts for both relator conventions, ordered and unordered.

    Neither filter depends on relator order, so the unordered count of each
    list is (ordered + diagonal) / 2 and only ordered pairs are generated.
    """
    audit: List[ConventionCounts] = []
    for cyclic in (True, False):
        cfg = StageConfig(max_total_length=max_total_length, min_relator_length=min_relator_length,
                          relators_cyclically_reduced=cyclic, ordered_pairs=True)
        ordered, diagonal = count_stages(cfg)
        unordered = {name: (ordered[name] + diagonal[name]) // 2 for name in STAGE_COUNT_NAMES}
        audit.append(ConventionCounts(relators_cyclically_reduced=cyclic, ordered_pairs=True, counts=ordered))
        audit.append(ConventionCounts(relators_cyclically_reduced=cyclic, ordered_pairs=False, counts=unordered))
        logger.info(f"convention audit, {'cyclically' if cyclic else 'freely'} reduced: "
                    f"ordered {ordered}, unordered {unordered}")
    return audit


def compare_with_published(counts: Dict[str, int], max_total_length: int) -> List[CountComparison]:
    """Published counts next to ``counts``; empty unless the length bound is the published one."""
    if max_total_length != PUBLISHED_LENGTH:
        return []
    comparison = [
        CountComparison(list_name=name, published=published, observed=counts.get(name, 0))
        for name, published in PUBLISHED_COUNTS.items()
    ]
    for item in comparison:
        if not item.matches:
            logger.warning(f"|{item.list_name}| = {item.observed}, published {item.published}")
    return comparison


def _merged_lines(storage: CensusStorage, stage: StageName, shard_count: int) -> Iterator[str]:
    streams = []
    for shard in range(shard_count):
        lines = storage.iter_lines(storage.shard_path(shard, stage))
        streams.append(((order_key_from_text(json.loads(line)["relators"]), line) for line in lines))
    for _, line in heapq.merge(*streams, key=lambda pair: pair[0]):
        yield line


def _peak_rss_mb() -> float:
    process = psutil.Process()
    memory = process.memory_info()
    return getattr(memory, "peak_wset", memory.rss) / (1024 * 1024)


def _run_shards(cfg: StageConfig, storage: CensusStorage, progress: bool) -> None:
    pending = []
    for shard in range(cfg.shard_count):
        marker = storage.read_marker(shard)
        if marker is not None and marker.fingerprint == cfg.fingerprint() and marker.shard_count == cfg.shard_count:
            logger.info(f"shard {shard} already complete, skipping")
            continue
        pending.append(shard)
    if not pending:
        return
    with tqdm(total=len(pending), desc="Stages 1-3 (shards)", disable=not progress) as bar:
        if len(pending) == 1:
            run_shard(cfg, pending[0])
            bar.update(1)
            return
        with ProcessPoolExecutor(max_workers=min(len(pending), psutil.cpu_count() or 1)) as pool:
            futures = [pool.submit(run_shard, cfg, shard) for shard in pending]
            for future in as_completed(futures):
                future.result()
                bar.update(1)


def run_pipeline(cfg: StageConfig, progress: bool = False, audit: bool = False) -> CensusSummary:
    """Stages 1-5 into ``cfg.output_path``; completed shards are reused on rerun.

    With ``audit`` the stages 1-3 counts of every relator convention are
    recomputed and stored in run.json next to the published comparison.
    """
    storage = CensusStorage(cfg.output_path)
    storage.directory.mkdir(parents=True, exist_ok=True)
    storage.clear_sweep_summary()
    metadata = RunMetadata(**cfg.model_dump(exclude={"output_path"}))
    logger.info(f"census run: max total length {cfg.max_total_length}, {cfg.shard_count} shard(s)")

    started = time.perf_counter()
    _run_shards(cfg, storage, progress)
    shard_counts = [storage.read_marker(s).counts for s in range(cfg.shard_count)]
    metadata.stage_timings.append(StageTiming(stage="stages 1-3", seconds=time.perf_counter() - started,
                                              records=sum(c["L1"] for c in shard_counts)))
    metadata.extra["generated"] = sum(c["L1"] for c in shard_counts)

    started = time.perf_counter()
    for stage in (StageName.L1, StageName.L2):
        storage.write_lines(storage.stage_path(stage), _merged_lines(storage, stage, cfg.shard_count))

    collapsed: List[CensusRecord] = []
    l3_stream = (
        parse_presentation(" ".join(json.loads(line)["relators"]))
        for line in _merged_lines(storage, StageName.L3, cfg.shard_count)
    )
    total_l3 = sum(c["L3"] for c in shard_counts)
    representatives = list(dedup_stage4(
        tqdm(l3_stream, total=total_l3, desc="Stage 4 (dedup)", disable=not progress), collapsed.append
    ))
    storage.write_records(storage.stage_path(StageName.L3), collapsed)
    metadata.stage_timings.append(StageTiming(stage="stage 4", seconds=time.perf_counter() - started,
                                              records=len(representatives)))

    started = time.perf_counter()
    stage5 = classify_stage5(
        tqdm(representatives, desc="Stage 5 (coset enumeration)", disable=not progress), cfg.coset_budget
    )
    l4 = [_l3_record(p, StageName.L4, order=order) for p, order in stage5.nontrivial]
    l4 += [_l3_record(p, StageName.L4, order=EXCEEDED) for p in stage5.exceeded]
    l4.sort(key=lambda record: order_key_from_text(record.relators))
    l5 = [_l3_record(p, StageName.L5, order=order, ac_status=ACStatus.OPEN) for p, order in stage5.trivial]
    storage.write_records(storage.stage_path(StageName.L4), l4)
    storage.write_records(storage.stage_path(StageName.L5), l5)
    metadata.stage_timings.append(StageTiming(stage="stage 5", seconds=time.perf_counter() - started,
                                              records=len(l5)))

    observed = {
        "L1": metadata.extra["generated"],
        "L2": sum(c["L2"] for c in shard_counts),
        "L3": total_l3,
        "L4": len(representatives),
        "L5": len(l5),
        "nontrivial": len(stage5.nontrivial),
    }
    metadata.published_comparison = compare_with_published(observed, cfg.max_total_length)
    if audit:
        started = time.perf_counter()
        metadata.convention_audit = convention_audit(cfg.max_total_length, cfg.min_relator_length)
        metadata.stage_timings.append(StageTiming(stage="audit", seconds=time.perf_counter() - started,
                                                  records=sum(a.counts["L1"] for a in metadata.convention_audit)))

    metadata.peak_rss_mb = _peak_rss_mb()
    metadata.finished_at = datetime.now()
    storage.write_run_metadata(metadata)
    if stage5.exceeded:
        logger.warning(f"{len(stage5.exceeded)} presentation(s) exceeded the coset budget {cfg.coset_budget}")

    report = write_report(storage.directory)
    return CensusSummary(counts=report.counts, directory=storage.directory)


def certificate_status(cert: Certificate) -> Optional[ACStatus]:
    """Status implied by a certificate's target."""
    target = cert.claimed_target.relators
    if target == standard_presentation(cert.base.rank).relators:
        return ACStatus.STANDARD
    if target == AK2.relators:
        return ACStatus.REDUCED_TO_AK2
    if any(target == p.relators for p in POWER_VARIANTS):
        return ACStatus.REDUCED_TO_POWER_VARIANT
    return None


def sweep_record(p: Presentation, key: str, cache: CertificateCache, ga: GAConfig, islands: int = 1,
                 extended_budget: Optional[float] = None,
                 use_library: bool = True) -> Tuple[ACStatus, Optional[Certificate]]:
    """Stage 6 for one presentation.

    Order: cached certificate, bundled certificate, then genetic search for a
    trivialization, for equivalence to AK(2) and to each power variant.
    Presentations matching AK(2) or a power variant up to symmetry are
    searched with ``extended_budget`` seconds instead of the configured budget.
    """
    cached = cache.lookup(key, p)
    if cached is not None:
        status = certificate_status(cached)
        if status is not None:
            logger.debug(f"{p}: reusing cached certificate")
            return status, cached

    if use_library:
        bundled = library_certificate(p)
        if bundled is not None:
            return ACStatus.STANDARD, bundled

    if extended_budget is not None:
        hard = hard_presentation_name(p)
        if hard is not None:
            logger.info(f"{p} matches {hard}: searching with the extended budget of {extended_budget:g}s")
            ga = ga.model_copy(update={"wall_clock_budget": extended_budget})

    outcome = evolve_islands(p, SearchMode.TRIVIALIZE, ga, islands=islands)
    if outcome.succeeded:
        return ACStatus.STANDARD, outcome.certificate
    outcome = evolve_islands(p, SearchMode.EQUIVALENCE, ga, AK2, islands)
    if outcome.succeeded:
        return ACStatus.REDUCED_TO_AK2, outcome.certificate
    for target in POWER_VARIANTS:
        outcome = evolve_islands(p, SearchMode.EQUIVALENCE, ga, target, islands)
        if outcome.succeeded:
            return ACStatus.REDUCED_TO_POWER_VARIANT, outcome.certificate
    return ACStatus.OPEN, None


def sweep_stage6(census_dir: Path, ga: Optional[GAConfig] = None, islands: int = 1, progress: bool = False,
                 extended_budget: Optional[float] = None, use_library: bool = True) -> Dict[str, int]:
    """Stage 6 over L5; rewrites L5 with statuses and certificate references."""
    ga = ga or GAConfig()
    storage = CensusStorage(census_dir)
    cache = CertificateCache(storage.certs_dir)
    records = list(storage.read_stage(StageName.L5))
    tally = {status.value: 0 for status in ACStatus}
    updated = []
    for record in tqdm(records, desc="Stage 6 (search)", disable=not progress):
        p = parse_presentation(record.presentation_line)
        status, cert = sweep_record(p, record.id, cache, ga, islands, extended_budget, use_library)
        certificate_ref = None
        if cert is not None:
            cache.store(record.id, cert)
            certificate_ref = str(cache.path(record.id).relative_to(storage.directory))
        tally[status.value] += 1
        updated.append(record.model_copy(update={"ac_status": status, "certificate_ref": certificate_ref}))
    storage.write_records(storage.stage_path(StageName.L5), updated)
    storage.write_sweep_summary(SweepSummary(searched=len(records), tally=tally,
                                             wall_clock_budget=ga.wall_clock_budget,
                                             extended_budget=extended_budget, used_library=use_library))
    logger.info(f"stage 6: {tally}")
    write_report(storage.directory)
    return tally


__all__ = [
    "CENSUS_RANK",
    "STAGE_COUNT_NAMES",
    "PUBLISHED_LENGTH",
    "PUBLISHED_COUNTS",
    "StageConfig",
    "Stage5Result",
    "CensusSummary",
    "record_id",
    "census_key",
    "shard_of",
    "candidate_order_key",
    "order_key_from_text",
    "generate_candidates",
    "filter_stage2",
    "filter_stage3",
    "dedup_stage4",
    "classify_stage5",
    "run_shard",
    "count_stages",
    "convention_audit",
    "compare_with_published",
    "run_pipeline",
    "certificate_status",
    "sweep_record",
    "sweep_stage6",
]

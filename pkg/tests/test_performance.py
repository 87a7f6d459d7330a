"""
Performance Tests for the AC census toolkit

Timing bounds for the order computation, the bounded oracle and the
bundled certificates, plus the full length-12 census, the convention audit
and the length-10 sweep, which are marked slow and excluded from the
default test selection.
"""

import time

import psutil
import pytest

from src.ac_census.census import StageConfig, convention_audit, record_id, run_pipeline, sweep_stage6
from src.ac_census.fixtures import AK2, POWER_VARIANTS
from src.ac_census.gasearch import GAConfig, OracleStatus, bfs_oracle
from src.ac_census.models import ACStatus, CensusRecord, StageName
from src.ac_census.presentation import format_presentation, read_certificate, total_length, verify_certificate
from src.ac_census.storage import CensusStorage
from src.ac_census.toddcoxeter import enumerate_cosets


class TestOrderPerformance:
    """Coset enumeration timing."""

    def test_order_120_within_five_seconds(self, order_120):
        start = time.perf_counter()
        result = enumerate_cosets(order_120, 10_000)
        elapsed = time.perf_counter() - start
        assert result.order == 120
        assert elapsed < 5.0

    def test_trivial_groups_close_quickly(self, ak3, ak2):
        start = time.perf_counter()
        for p in (ak3, ak2):
            assert enumerate_cosets(p).order == 1
        assert time.perf_counter() - start < 5.0


class TestOraclePerformance:
    def test_ak3_not_within_small_bounds(self, ak3):
        result = bfs_oracle(ak3, 4, 13, 1)
        assert result.status == OracleStatus.NOT_WITHIN_BOUNDS
        assert result.states_explored > 1


class TestHardPresentations:
    """AK(2) and the power variants through a stage 6 sweep."""

    @pytest.fixture
    def hard_l5(self, temp_dir):
        storage = CensusStorage(temp_dir / "hard")
        records = [
            CensusRecord(id=record_id(p), relators=format_presentation(p).split(), total_length=total_length(p),
                         stage_reached=StageName.L5, order=1, ac_status=ACStatus.OPEN)
            for p in [AK2, *POWER_VARIANTS]
        ]
        storage.write_records(storage.stage_path(StageName.L5), records)
        return storage

    def test_all_trivialized_within_seconds(self, hard_l5):
        start = time.perf_counter()
        tally = sweep_stage6(hard_l5.directory, GAConfig(wall_clock_budget=30.0), extended_budget=3600.0)
        assert time.perf_counter() - start < 30.0
        assert tally["standard"] == 5
        for record in hard_l5.read_stage(StageName.L5):
            cert = read_certificate(hard_l5.directory / record.certificate_ref)
            assert format_presentation(cert.base) == record.presentation_line
            assert verify_certificate(cert)


@pytest.mark.slow
@pytest.mark.timeout(7200)
class TestFullCensus:
    """The length-12 census (about an hour on one machine)."""

    def _run(self, temp_dir, name, **settings):
        cfg = StageConfig(max_total_length=12, shard_count=psutil.cpu_count() or 1,
                          output_path=temp_dir / name, **settings)
        start = time.perf_counter()
        summary = run_pipeline(cfg)
        return summary, time.perf_counter() - start

    def test_length_twelve_counts(self, temp_dir):
        summary, elapsed = self._run(temp_dir, "census12")
        counts = summary.counts
        assert counts["L1"] == 9_566_112
        assert counts["L2"] == 934_280
        assert counts["L3"] == 109_440
        assert counts["L4"] == 1648
        assert counts["L5"] == 1632
        assert counts["nontrivial"] == 16
        assert counts["exceeded"] == 0
        assert elapsed < 3600

        metadata = CensusStorage(summary.directory).read_run_metadata()
        comparison = {c.list_name: c for c in metadata.published_comparison}
        assert comparison["L3"].published == 122_240
        assert not comparison["L3"].matches
        assert all(comparison[name].matches for name in ("L4", "L5", "nontrivial"))
        assert "reproduced by" not in (summary.directory / "report.txt").read_text()

    def test_freely_reduced_relators_reproduce_published_counts(self, temp_dir):
        summary, _ = self._run(temp_dir, "free12", relators_cyclically_reduced=False)
        counts = summary.counts
        assert counts["L1"] == 14_880_352
        assert counts["L2"] == 1_608_680
        assert counts["L3"] == 122_240
        assert counts["L4"] == 1648
        assert counts["L5"] == 1632
        assert counts["nontrivial"] == 16
        metadata = CensusStorage(summary.directory).read_run_metadata()
        assert all(c.matches for c in metadata.published_comparison)


@pytest.mark.slow
@pytest.mark.timeout(7200)
class TestConventionAudit:
    def test_length_twelve(self):
        audit = {item.label: item.counts for item in convention_audit(12)}
        assert audit["cyclically reduced, ordered"] == {"L1": 9_566_112, "L2": 934_280, "L3": 109_440}
        assert audit["freely reduced, ordered"] == {"L1": 14_880_352, "L2": 1_608_680, "L3": 122_240}


@pytest.mark.slow
@pytest.mark.timeout(14400)
class TestLengthTenSweep:
    """Every L5 presentation of total length at most 10 is trivialized."""

    def test_no_open_presentations(self, temp_dir):
        cfg = StageConfig(max_total_length=10, output_path=temp_dir / "census10")
        summary = run_pipeline(cfg)
        assert summary.counts["L3"] == 3200
        assert summary.counts["L5"] == 64

        tally = sweep_stage6(summary.directory, GAConfig(wall_clock_budget=60.0))
        assert tally["standard"] == 64
        assert tally["open"] == 0
        storage = CensusStorage(summary.directory)
        for record in storage.read_stage(StageName.L5):
            assert record.ac_status == ACStatus.STANDARD
            assert verify_certificate(read_certificate(storage.directory / record.certificate_ref))

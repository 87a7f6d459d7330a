"""
Integration tests for the census pipeline.

These run stages 1-5 end to end on small length bounds and the stage 6
certificate sweep on a hand-made L5 list.
"""

import pytest

from src.ac_census import census as census_module
from src.ac_census.census import StageConfig, record_id, run_pipeline, sweep_stage6
from src.ac_census.fixtures import AK2
from src.ac_census.models import ACStatus, CensusRecord, StageName
from src.ac_census.presentation import (
    format_presentation,
    parse_presentation,
    read_certificate,
    total_length,
    verify_certificate,
)
from src.ac_census.storage import CensusStorage


def stage_bytes(directory):
    storage = CensusStorage(directory)
    return {stage: storage.stage_path(stage).read_bytes() for stage in StageName}


@pytest.fixture
def length_six(temp_dir):
    return StageConfig(max_total_length=6, coset_budget=2000, output_path=temp_dir / "six")


class TestPipeline:
    """Stages 1-5."""

    def test_length_four(self, small_stage_config):
        summary = run_pipeline(small_stage_config)
        assert summary.counts["L1"] == 480
        assert summary.counts["L3"] == 0
        assert summary.counts["L5"] == 0
        storage = CensusStorage(summary.directory)
        for stage in StageName:
            assert storage.stage_path(stage).exists()
        assert (summary.directory / "report.txt").exists()
        assert (summary.directory / "report.json").exists()
        metadata = storage.read_run_metadata()
        assert metadata.extra["generated"] == 480
        assert metadata.finished_at is not None
        assert [t.stage for t in metadata.stage_timings] == ["stages 1-3", "stage 4", "stage 5"]

    def test_length_six_counts_are_consistent(self, length_six):
        counts = run_pipeline(length_six).counts
        assert counts["L1"] == 6576
        assert counts["L1"] >= counts["L2"] >= counts["L3"] >= counts["L4"] >= counts["L5"]
        assert counts["L4"] == counts["L5"] + counts["nontrivial"] + counts["exceeded"]

    def test_records_carry_their_stage_attributes(self, length_six):
        run_pipeline(length_six)
        storage = CensusStorage(length_six.output_path)
        for record in storage.read_stage(StageName.L1):
            assert record.invariant_factors != [1, 1]
        for record in storage.read_stage(StageName.L2):
            assert any(record.primitive_flags)
            assert record.ac_status == ACStatus.STANDARD
        for record in storage.read_stage(StageName.L4):
            assert record.order != 1
        for record in storage.read_stage(StageName.L5):
            assert record.order == 1
            assert record.ac_status == ACStatus.OPEN
            assert record.total_length == total_length(parse_presentation(record.presentation_line))

    def test_rerun_is_byte_identical(self, length_six):
        run_pipeline(length_six)
        first = stage_bytes(length_six.output_path)
        run_pipeline(length_six)
        assert stage_bytes(length_six.output_path) == first

    def test_shard_count_does_not_change_results(self, temp_dir):
        one = StageConfig(max_total_length=5, output_path=temp_dir / "one")
        three = StageConfig(max_total_length=5, shard_count=3, output_path=temp_dir / "three")
        assert run_pipeline(one).counts == run_pipeline(three).counts
        assert stage_bytes(one.output_path) == stage_bytes(three.output_path)

    def test_completed_shards_are_skipped(self, small_stage_config, mocker):
        run_pipeline(small_stage_config)
        spy = mocker.spy(census_module, "run_shard")
        run_pipeline(small_stage_config)
        assert spy.call_count == 0

    def test_changed_settings_recompute_shards(self, small_stage_config, mocker):
        run_pipeline(small_stage_config)
        spy = mocker.spy(census_module, "run_shard")
        longer = small_stage_config.model_copy(update={"max_total_length": 5})
        assert run_pipeline(longer).counts["L1"] > 480
        assert spy.call_count == 1


class TestSweep:
    """Stage 6 over a small L5 list."""

    @pytest.fixture
    def census_dir(self, temp_dir):
        storage = CensusStorage(temp_dir / "sweep")
        records = []
        for line in ("xy y", "xx yyy", format_presentation(AK2)):
            q = parse_presentation(line)
            records.append(CensusRecord(
                id=record_id(q),
                relators=line.split(),
                total_length=total_length(q),
                stage_reached=StageName.L5,
                order=1,
                ac_status=ACStatus.OPEN,
            ))
        storage.write_records(storage.stage_path(StageName.L5), records)
        return storage.directory

    @pytest.fixture
    def sweep_ga(self, fast_ga):
        return fast_ga.model_copy(update={"max_generations": 60})

    def test_statuses_and_certificates(self, census_dir, sweep_ga):
        tally = sweep_stage6(census_dir, sweep_ga)
        assert sum(tally.values()) == 3
        assert tally["open"] == 1

        storage = CensusStorage(census_dir)
        by_line = {r.presentation_line: r for r in storage.read_stage(StageName.L5)}
        assert by_line["xy y"].ac_status == ACStatus.STANDARD
        assert by_line["xx yyy"].ac_status == ACStatus.OPEN
        assert by_line["xx yyy"].certificate_ref is None
        assert by_line["xxYYY xyxYXY"].ac_status != ACStatus.OPEN

        cert = read_certificate(census_dir / by_line["xy y"].certificate_ref)
        assert verify_certificate(cert)
        assert cert.base == parse_presentation("xy y")

    def test_report_is_refreshed(self, census_dir, sweep_ga):
        sweep_stage6(census_dir, sweep_ga)
        text = (census_dir / "report.txt").read_text()
        assert "xx yyy" in text

    def test_cached_certificates_are_reused(self, census_dir, sweep_ga, mocker):
        first = sweep_stage6(census_dir, sweep_ga)
        spy = mocker.spy(census_module, "evolve_islands")
        assert sweep_stage6(census_dir, sweep_ga) == first
        # only the open presentation is searched again: trivialize, AK(2), four power variants
        assert spy.call_count == 6

    def test_ak2_is_solved_from_the_bundled_certificate(self, census_dir, sweep_ga, mocker):
        spy = mocker.spy(census_module, "evolve_islands")
        sweep_stage6(census_dir, sweep_ga)
        searched = {format_presentation(call.args[0]) for call in spy.call_args_list}
        assert searched == {"xy y", "xx yyy"}

        storage = CensusStorage(census_dir)
        ak2_record = next(r for r in storage.read_stage(StageName.L5) if r.presentation_line == "xxYYY xyxYXY")
        assert ak2_record.ac_status == ACStatus.STANDARD
        cert = read_certificate(census_dir / ak2_record.certificate_ref)
        assert cert.base == AK2
        assert verify_certificate(cert)

    def test_hard_presentations_get_the_extended_budget(self, census_dir, sweep_ga, mocker):
        ga = sweep_ga.model_copy(update={"wall_clock_budget": 5.0, "max_generations": 5})
        spy = mocker.spy(census_module, "evolve_islands")
        sweep_stage6(census_dir, ga, extended_budget=900.0, use_library=False)
        budgets = {}
        for call in spy.call_args_list:
            budgets.setdefault(format_presentation(call.args[0]), set()).add(call.args[2].wall_clock_budget)
        assert budgets["xxYYY xyxYXY"] == {900.0}
        assert budgets["xx yyy"] == {5.0}

    def test_sweep_summary_is_recorded(self, census_dir, sweep_ga):
        tally = sweep_stage6(census_dir, sweep_ga, extended_budget=30.0)
        summary = CensusStorage(census_dir).read_sweep_summary()
        assert summary.searched == 3
        assert summary.tally == tally
        assert summary.extended_budget == 30.0
        assert summary.used_library


class TestPublishedCounts:
    """run.json comparison and convention audit."""

    def test_comparison_is_empty_off_the_published_length(self, length_six):
        run_pipeline(length_six)
        metadata = CensusStorage(length_six.output_path).read_run_metadata()
        assert metadata.published_comparison == []
        assert metadata.convention_audit == []

    def test_audit_is_stored_in_run_metadata(self, length_six):
        run_pipeline(length_six, audit=True)
        metadata = CensusStorage(length_six.output_path).read_run_metadata()
        audit = {item.label: item.counts for item in metadata.convention_audit}
        assert len(audit) == 4
        assert audit["cyclically reduced, ordered"]["L1"] == 6576
        assert audit["freely reduced, ordered"]["L1"] == 8752
        assert "audit" in [t.stage for t in metadata.stage_timings]

    def test_pipeline_rerun_clears_the_sweep_summary(self, small_stage_config):
        run_pipeline(small_stage_config)
        storage = CensusStorage(small_stage_config.output_path)
        sweep_stage6(storage.directory)
        assert storage.read_sweep_summary() is not None
        run_pipeline(small_stage_config)
        assert storage.read_sweep_summary() is None

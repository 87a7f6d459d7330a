"""
Unit Tests for the census stages.

The pipeline as a whole is covered by the integration tests; these exercise
each stage on hand-picked streams.
"""

import pytest
from pydantic import ValidationError

from src.ac_census.census import (
    StageConfig,
    candidate_order_key,
    census_key,
    certificate_status,
    classify_stage5,
    compare_with_published,
    convention_audit,
    count_stages,
    dedup_stage4,
    filter_stage2,
    filter_stage3,
    generate_candidates,
    order_key_from_text,
    record_id,
    run_shard,
    shard_of,
)
from src.ac_census.fixtures import AK2, POWER_VARIANTS
from src.ac_census.models import ACStatus, StageName
from src.ac_census.presentation import Certificate, format_presentation, parse_presentation, swap_moves
from src.ac_census.storage import CensusStorage
from src.ac_census.word import format_word


def p(line):
    return parse_presentation(line)


class TestStageConfig:
    def test_defaults(self):
        cfg = StageConfig()
        assert cfg.max_total_length == 12
        assert cfg.relators_cyclically_reduced
        assert cfg.ordered_pairs

    def test_length_bound_must_fit_two_relators(self):
        with pytest.raises(ValidationError):
            StageConfig(max_total_length=3, min_relator_length=2)

    def test_fingerprint_ignores_output_and_budget(self, temp_dir):
        base = StageConfig(max_total_length=6)
        assert base.fingerprint() == StageConfig(max_total_length=6, output_path=temp_dir,
                                                 coset_budget=10).fingerprint()
        assert base.fingerprint() != StageConfig(max_total_length=7).fingerprint()


class TestGeneration:
    """Stage 1."""

    def test_length_two(self):
        candidates = list(generate_candidates(StageConfig(max_total_length=2)))
        assert len(candidates) == 16
        assert format_presentation(candidates[0]) == "x x"

    def test_length_four(self, small_stage_config):
        assert sum(1 for _ in generate_candidates(small_stage_config)) == 480

    def test_unordered_pairs(self):
        cfg = StageConfig(max_total_length=2, ordered_pairs=False)
        assert sum(1 for _ in generate_candidates(cfg)) == 10

    def test_freely_reduced_relators(self):
        cfg = StageConfig(max_total_length=4, relators_cyclically_reduced=False)
        # 16 + 2*4*12 + 2*4*36 + 12*12
        assert sum(1 for _ in generate_candidates(cfg)) == 16 + 96 + 288 + 144

    def test_generation_order(self, small_stage_config):
        keys = [candidate_order_key(q) for q in generate_candidates(small_stage_config)]
        assert keys == sorted(keys)

    def test_order_key_from_text_agrees(self, small_stage_config):
        for q in generate_candidates(small_stage_config):
            assert order_key_from_text([format_word(w) for w in q.relators]) == candidate_order_key(q)

    def test_shards_partition_candidates(self):
        cfg = StageConfig(max_total_length=4, shard_count=3)
        everything = list(generate_candidates(cfg))
        sharded = [q for k in range(3) for q in generate_candidates(cfg, k)]
        assert sorted(map(format_presentation, sharded)) == sorted(map(format_presentation, everything))

    def test_shard_of_is_stable(self):
        assert shard_of("xxY", 4) == shard_of("xxY", 4)
        assert 0 <= shard_of("xxY", 4) < 4
        assert shard_of("xxY", 1) == 0


class TestFilters:
    """Stages 2 to 5 on hand-picked streams."""

    def test_stage2(self):
        deleted = []
        kept = list(filter_stage2([p("x y"), p("xx y"), p("xxYYY xyxYXY")], deleted.append))
        assert kept == [p("x y"), p("xxYYY xyxYXY")]
        assert len(deleted) == 1
        assert deleted[0].stage_reached == StageName.L1
        assert deleted[0].invariant_factors == [1, 2]

    def test_stage3(self):
        deleted = []
        kept = list(filter_stage3([p("x y"), p("xxYYY xyxYXY"), p("xyy xxYYY")], deleted.append))
        assert kept == [p("xxYYY xyxYXY")]
        assert [r.primitive_flags for r in deleted] == [[True, True], [True, False]]
        assert all(r.ac_status == ACStatus.STANDARD for r in deleted)

    def test_filters_without_sink(self):
        assert list(filter_stage3(filter_stage2([p("xx y"), p("x y")]))) == []

    def test_stage4_keeps_first_of_each_class(self):
        collapsed = []
        stream = [p("xy yy"), p("yx yy"), p("yy xy"), p("xY yy")]
        kept = list(dedup_stage4(stream, collapsed.append))
        assert kept == [p("xy yy"), p("xY yy")]
        assert len(collapsed) == 2
        assert {r.representative_id for r in collapsed} == {record_id(p("xy yy"))}
        assert all(r.stage_reached == StageName.L3 for r in collapsed)

    def test_census_key_uses_cyclic_cores(self):
        assert census_key(p("yxY y")) == census_key(p("x y"))

    def test_stage5(self, standard):
        result = classify_stage5([standard, p("xx yyy"), p("xx 1")], 50)
        assert result.trivial == [(standard, 1)]
        assert result.nontrivial == [(p("xx yyy"), 6)]
        assert result.exceeded == [p("xx 1")]

    def test_record_id(self):
        assert record_id(p("x y")) == record_id(p("x y"))
        assert record_id(p("x y")) != record_id(p("y x"))
        assert len(record_id(p("x y"))) == 16


class TestRunShard:
    def test_single_shard(self, small_stage_config):
        marker = run_shard(small_stage_config, 0)
        storage = CensusStorage(small_stage_config.output_path)
        assert marker.counts["L1"] == 480
        assert marker.counts["L3"] == 0
        assert storage.read_marker(0) == marker
        deleted = sum(1 for _ in storage.iter_lines(storage.shard_path(0, StageName.L1)))
        assert marker.counts["L2"] == 480 - deleted


class TestCertificateStatus:
    def test_targets(self):
        base = p("xxYYY xyxYXY")
        assert certificate_status(Certificate(p("y x"), tuple(swap_moves(1, 2)), p("x y"))) == ACStatus.STANDARD
        assert certificate_status(Certificate(base, (), AK2)) == ACStatus.REDUCED_TO_AK2
        assert certificate_status(Certificate(base, (), POWER_VARIANTS[2])) == ACStatus.REDUCED_TO_POWER_VARIANT
        assert certificate_status(Certificate(base, (), p("xy y"))) is None


class TestConventionAudit:
    """Stages 1-3 counts under each relator convention."""

    def test_count_stages_matches_ordered_generation(self):
        counts, diagonal = count_stages(StageConfig(max_total_length=6))
        assert counts == {"L1": 6576, "L2": 968, "L3": 0}
        assert diagonal == {"L1": 44, "L2": 0, "L3": 0}

    def test_length_six(self):
        audit = {item.label: item.counts for item in convention_audit(6)}
        assert audit["cyclically reduced, ordered"] == {"L1": 6576, "L2": 968, "L3": 0}
        assert audit["freely reduced, ordered"] == {"L1": 8752, "L2": 1768, "L3": 0}
        assert audit["cyclically reduced, unordered"]["L1"] == 3310
        assert audit["freely reduced, unordered"]["L1"] == 4402

    @pytest.mark.parametrize("cyclic", [True, False])
    def test_unordered_counts_agree_with_unordered_generation(self, cyclic):
        derived = next(
            item.counts for item in convention_audit(5)
            if item.relators_cyclically_reduced == cyclic and not item.ordered_pairs
        )
        cfg = StageConfig(max_total_length=5, relators_cyclically_reduced=cyclic, ordered_pairs=False)
        assert count_stages(cfg)[0] == derived

    def test_comparison_only_at_published_length(self):
        assert compare_with_published({"L3": 3200}, 10) == []
        comparison = {c.list_name: c for c in compare_with_published({"L3": 109_440, "L4": 1_648}, 12)}
        assert not comparison["L3"].matches
        assert comparison["L4"].matches
        assert comparison["L5"].observed == 0

"""
Data models for census records and run metadata.

This module defines the Pydantic models persisted by the census pipeline:
one ``CensusRecord`` per generated presentation and one ``RunMetadata`` per
census directory.
"""

from datetime import datetime
from enum import Enum
from typing import Any, Dict, List, Literal, Optional, Union

from pydantic import BaseModel, Field, model_validator

EXCEEDED = "exceeded"


class StageName(str, Enum):
    """Census lists, in pipeline order."""
    L1 = "L1"
    L2 = "L2"
    L3 = "L3"
    L4 = "L4"
    L5 = "L5"

    @property
    def index(self) -> int:
        return int(self.value[1:])

    @classmethod
    def from_index(cls, index: int) -> "StageName":
        return cls(f"L{index}")


class ACStatus(str, Enum):
    """What is known about AC-equivalence to the standard presentation."""
    STANDARD = "standard"
    REDUCED_TO_AK2 = "reduced-to-(5)"
    REDUCED_TO_POWER_VARIANT = "reduced-to-corollary1"
    OPEN = "open"


class TerminalBucket(str, Enum):
    """The one place every generated presentation ends up."""
    DELETED_STAGE2 = "deleted-stage2"
    DELETED_STAGE3 = "deleted-stage3"
    DEDUP_COLLAPSED = "dedup-collapsed"
    TRIVIAL = "L5"
    NONTRIVIAL = "nontrivial"
    EXCEEDED = "exceeded"


class CensusRecord(BaseModel):
    """A presentation's journey through L1 ... L5."""

    id: str = Field(..., description="Stable hash of the presentation text")
    relators: List[str] = Field(..., description="Relator words in text form")
    total_length: int = Field(..., ge=0, description="Sum of relator lengths")
    stage_reached: StageName = Field(StageName.L1, description="Last list the presentation belongs to")
    invariant_factors: Optional[List[int]] = Field(None, description="Smith invariants of the relation matrix")
    primitive_flags: Optional[List[bool]] = Field(None, description="Primitivity of each relator")
    canonical_key: Optional[str] = Field(None, description="Hex canonical key over rotations and swaps")
    order: Optional[Union[int, Literal["exceeded"]]] = Field(None, description="Group order or 'exceeded'")
    ac_status: Optional[ACStatus] = Field(None, description="AC status when known")
    certificate_ref: Optional[str] = Field(None, description="Certificate path relative to the census directory")
    representative_id: Optional[str] = Field(None, description="L4 representative this record collapsed into")

    @model_validator(mode="after")
    def check_stage_attributes(self):
        """Attributes are only present from the stage that computes them."""
        stage = self.stage_reached.index
        if self.order is not None and stage < 4:
            raise ValueError(f"order is only recorded from L4, record is at {self.stage_reached.value}")
        if self.canonical_key is not None and stage < 3:
            raise ValueError("canonical_key is only recorded from L3")
        if self.primitive_flags is not None and stage < 2:
            raise ValueError("primitive_flags are only recorded from L2")
        if self.representative_id is not None and stage != 3:
            raise ValueError("only collapsed L3 records carry a representative_id")
        return self

    @property
    def bucket(self) -> TerminalBucket:
        if self.stage_reached == StageName.L1:
            return TerminalBucket.DELETED_STAGE2
        if self.stage_reached == StageName.L2:
            return TerminalBucket.DELETED_STAGE3
        if self.stage_reached == StageName.L3:
            return TerminalBucket.DEDUP_COLLAPSED
        if self.stage_reached == StageName.L5:
            return TerminalBucket.TRIVIAL
        if self.order == EXCEEDED:
            return TerminalBucket.EXCEEDED
        return TerminalBucket.NONTRIVIAL

    @property
    def presentation_line(self) -> str:
        return " ".join(self.relators)


class StageTiming(BaseModel):
    """Wall time and record count of one stage."""
    stage: str
    seconds: float = Field(0.0, ge=0.0)
    records: int = Field(0, ge=0)


class ConventionCounts(BaseModel):
    """|L1|, |L2|, |L3| under one relator convention."""
    relators_cyclically_reduced: bool
    ordered_pairs: bool
    counts: Dict[str, int] = Field(default_factory=dict)

    @property
    def label(self) -> str:
        reduction = "cyclically reduced" if self.relators_cyclically_reduced else "freely reduced"
        pairs = "ordered" if self.ordered_pairs else "unordered"
        return f"{reduction}, {pairs}"


class CountComparison(BaseModel):
    """A published census count next to the one this run observed."""
    list_name: str
    published: int
    observed: int

    @property
    def matches(self) -> bool:
        return self.published == self.observed


class SweepSummary(BaseModel):
    """Contents of ``sweep.json``, written when a stage 6 sweep finishes."""
    finished_at: datetime = Field(default_factory=datetime.now)
    searched: int = Field(0, ge=0, description="L5 records the sweep visited")
    tally: Dict[str, int] = Field(default_factory=dict)
    wall_clock_budget: Optional[float] = None
    extended_budget: Optional[float] = None
    used_library: bool = True


class RunMetadata(BaseModel):
    """Contents of ``run.json``."""

    max_total_length: int
    relators_cyclically_reduced: bool
    ordered_pairs: bool
    min_relator_length: int
    coset_budget: int
    shard_count: int
    stage_timings: List[StageTiming] = Field(default_factory=list)
    peak_rss_mb: float = Field(0.0, ge=0.0, description="Peak resident set size of the driver process")
    started_at: datetime = Field(default_factory=datetime.now)
    finished_at: Optional[datetime] = None
    published_comparison: List[CountComparison] = Field(default_factory=list)
    convention_audit: List[ConventionCounts] = Field(default_factory=list)
    extra: Dict[str, Any] = Field(default_factory=dict)

    @property
    def convention_flags(self) -> Dict[str, Any]:
        return {
            "relators_cyclically_reduced": self.relators_cyclically_reduced,
            "ordered_pairs": self.ordered_pairs,
            "min_relator_length": self.min_relator_length,
        }


__all__ = [
    "EXCEEDED",
    "StageName",
    "ACStatus",
    "TerminalBucket",
    "CensusRecord",
    "StageTiming",
    "ConventionCounts",
    "CountComparison",
    "SweepSummary",
    "RunMetadata",
]

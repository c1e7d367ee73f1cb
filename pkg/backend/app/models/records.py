import math
from typing import Annotated, Dict, List, Literal, Optional

from pydantic import BaseModel, Field, PlainSerializer, model_validator

REPORT_VERSION = 1

# JSON has no infinity literal; PSNR of identical planes is written as "inf".
Decibels = Annotated[
    float,
    PlainSerializer(lambda v: "inf" if math.isinf(v) else v, when_used="json"),
]

ChannelName = Literal["R", "G", "B"]
LayerKind = Literal["binary", "tri"]


class SideInfo(BaseModel):
    """PP/ZP of the last round, carried in the LSBs of 16 bottom-row pixels."""

    pp: int = Field(ge=0, le=255)
    zp: int = Field(ge=0, le=255)


class RoundRecord(BaseModel):
    """Everything needed to invert one histogram-shifting round."""

    pp: int = Field(ge=0, le=255)
    zp: int = Field(ge=0, le=255)
    used_lp: bool = False
    lp_map: List[int] = Field(default_factory=list)
    bits_embedded: int = Field(ge=0)

    @model_validator(mode="after")
    def check_invariants(self) -> "RoundRecord":
        if self.pp == self.zp:
            raise ValueError("pp and zp must differ")
        if not self.used_lp and self.lp_map:
            raise ValueError("lp_map must be empty when no lowest point is used")
        if any(a >= b for a, b in zip(self.lp_map, self.lp_map[1:])):
            raise ValueError("lp_map indices must be strictly increasing")
        if self.lp_map and self.lp_map[0] < 0:
            raise ValueError("lp_map indices must be non-negative")
        return self

    @property
    def direction(self) -> int:
        return 1 if self.zp > self.pp else -1


class CompressionReport(BaseModel):
    width: int
    height: int
    before_bytes: int
    after_bytes: int
    ratio_percent: float


class RoundSummary(BaseModel):
    index: int
    pp: int
    zp: int
    used_lp: bool
    lp_count: int
    capacity_bits: int
    header_bits: int
    fragment_bits: int


class ChannelPlan(BaseModel):
    channel: ChannelName
    layer_kind: LayerKind
    payload_bits: int
    feasible: bool
    rounds: int
    shortfall_bits: int = 0
    capacity_bits: int = 0
    max_abs_change: int = 0
    round_details: List[RoundSummary] = Field(default_factory=list)


class QualityScore(BaseModel):
    psnr: Decibels
    mssim: Optional[float] = None


class MetricsReport(BaseModel):
    """Quality table: luminance plus each color component."""

    report_version: int = REPORT_VERSION
    luminance: QualityScore
    r: QualityScore
    g: QualityScore
    b: QualityScore


class CapacityPlan(BaseModel):
    report_version: int = REPORT_VERSION
    width: int
    height: int
    feasible: bool
    channels: List[ChannelPlan]
    compression: Dict[LayerKind, CompressionReport]


class EmbedReport(BaseModel):
    report_version: int = REPORT_VERSION
    width: int
    height: int
    channels: List[ChannelPlan]
    compression: Dict[LayerKind, CompressionReport]
    metrics: MetricsReport


class StatSummary(BaseModel):
    count: int
    infinite: int = 0
    average: Optional[float] = None
    variance: Optional[float] = None
    minimum: Optional[float] = None
    maximum: Optional[float] = None


class ChannelTrial(BaseModel):
    channel: ChannelName
    capacity_bits: int
    psnr: Decibels
    mssim: Optional[float] = None
    reversible: bool


class CorpusReport(BaseModel):
    report_version: int = REPORT_VERSION
    count: int
    feasible: int
    infeasible: int
    reversible: int
    b_psnr: StatSummary
    b_mssim: StatSummary
    r_psnr: StatSummary
    luminance_psnr: StatSummary
    binary_ratio: StatSummary
    tri_ratio: StatSummary
    rounds_histogram: Dict[str, int]

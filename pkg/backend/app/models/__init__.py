from .images import BiLevelImage, Channel, GrayImage, RgbImage, TriLevelLayer
from .records import (
    REPORT_VERSION,
    CapacityPlan,
    ChannelPlan,
    ChannelTrial,
    CompressionReport,
    CorpusReport,
    EmbedReport,
    MetricsReport,
    QualityScore,
    RoundRecord,
    RoundSummary,
    SideInfo,
    StatSummary,
)

__all__ = [
    "BiLevelImage",
    "Channel",
    "GrayImage",
    "RgbImage",
    "TriLevelLayer",
    "REPORT_VERSION",
    "CapacityPlan",
    "ChannelPlan",
    "ChannelTrial",
    "CompressionReport",
    "CorpusReport",
    "EmbedReport",
    "MetricsReport",
    "QualityScore",
    "RoundRecord",
    "RoundSummary",
    "SideInfo",
    "StatSummary",
]

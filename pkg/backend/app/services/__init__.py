from app.services.evaluation import EvaluationService
from app.services.fixtures import gen_illustration, gen_layers
from app.services.metrics import SsimParams, channel_metrics, mse, mssim, psnr
from app.services.packer import PackerService

__all__ = [
    "EvaluationService",
    "PackerService",
    "SsimParams",
    "channel_metrics",
    "gen_illustration",
    "gen_layers",
    "mse",
    "mssim",
    "psnr",
]

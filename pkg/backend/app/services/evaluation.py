from collections import Counter
from typing import List, Optional

import numpy as np

from app.core.config import Settings
from app.core.exceptions import InsufficientCapacity, InvalidParameter
from app.models.images import RgbImage
from app.models.records import ChannelName, ChannelTrial, CorpusReport
from app.rdh.histogram_shift import (
    compute_histogram,
    extract_and_unshift,
    select_pp,
    select_zp,
    shift_and_embed,
    side_info_mask,
)
from app.services.base import BaseService
from app.services.fixtures import MAX_COLORS, MIN_COLORS, gen_illustration, gen_layers
from app.services.metrics import mssim, psnr
from app.services.packer import CHANNEL_INDEX, CHANNEL_LAYERS, PackerService


class EvaluationService(BaseService):
    """Corpus-level quality and reversibility study over synthetic illustrations."""

    def __init__(self, config: Settings = None, packer: Optional[PackerService] = None):
        super().__init__(config)
        self.packer = packer or PackerService(config)

    def evaluate_corpus(
        self,
        count: int,
        seed: int,
        min_size: int = 64,
        max_size: int = 256,
        max_colors: int = 32,
    ) -> CorpusReport:
        """Embed and extract ``count`` seeded fixtures and summarize the results."""
        if count < 1:
            raise InvalidParameter("corpus needs at least one image")
        if not 16 <= min_size <= max_size:
            raise InvalidParameter(f"size range {min_size}..{max_size} is not usable")
        if not MIN_COLORS <= max_colors <= MAX_COLORS:
            raise InvalidParameter(f"max_colors must be in {MIN_COLORS}..{MAX_COLORS}")

        rng = np.random.default_rng(seed)
        b_psnr: List[float] = []
        b_mssim: List[float] = []
        r_psnr: List[float] = []
        luma_psnr: List[float] = []
        binary_ratio: List[float] = []
        tri_ratio: List[float] = []
        rounds = Counter()
        infeasible = reversible = 0

        for i in range(count):
            width, height = (int(v) for v in rng.integers(min_size, max_size + 1, size=2))
            colors = int(rng.integers(MIN_COLORS, max_colors + 1))
            general = gen_illustration(width, height, colors, seed=int(rng.integers(1 << 31)))
            binary_layer, tri_layer = gen_layers(general)

            try:
                marked, report = self.packer.embed(general, binary_layer, tri_layer)
            except InsufficientCapacity as e:
                self.logger.info("Image %d (%dx%d, %d colors): %s", i, width, height, colors, e.message)
                infeasible += 1
                continue

            restored = self.packer.extract(marked)
            if restored == (general, binary_layer, tri_layer):
                reversible += 1
            else:
                self.logger.error("Image %d did not round-trip", i)

            b_psnr.append(report.metrics.b.psnr)
            if report.metrics.b.mssim is not None:
                b_mssim.append(report.metrics.b.mssim)
            r_psnr.append(report.metrics.r.psnr)
            luma_psnr.append(report.metrics.luminance.psnr)
            binary_ratio.append(report.compression["binary"].ratio_percent)
            tri_ratio.append(report.compression["tri"].ratio_percent)
            for plan in report.channels:
                rounds[f"{plan.channel}:{plan.rounds}"] += 1

        feasible = count - infeasible
        self.logger.info(
            "Corpus of %d: %d feasible, %d reversible", count, feasible, reversible
        )
        return CorpusReport(
            count=count,
            feasible=feasible,
            infeasible=infeasible,
            reversible=reversible,
            b_psnr=self._summarize(b_psnr),
            b_mssim=self._summarize(b_mssim),
            r_psnr=self._summarize(r_psnr),
            luminance_psnr=self._summarize(luma_psnr),
            binary_ratio=self._summarize(binary_ratio),
            tri_ratio=self._summarize(tri_ratio),
            rounds_histogram=dict(sorted(rounds.items())),
        )

    def full_capacity_trial(self, general: RgbImage, seed: int) -> List[ChannelTrial]:
        """One round per embedding channel with a random payload as large as its capacity."""
        rng = np.random.default_rng(seed)
        mask = side_info_mask(general.height, general.width)
        trials = []
        for name in CHANNEL_LAYERS:
            trials.append(self._trial(general, name, mask, rng))
        return trials

    def _trial(
        self, general: RgbImage, name: ChannelName, mask: np.ndarray, rng: np.random.Generator
    ) -> ChannelTrial:
        channel = general.channel(CHANNEL_INDEX[name])
        histogram = compute_histogram(channel, exclude=mask)
        pp = select_pp(histogram)
        zp, used_lp = select_zp(histogram, pp, allow_adjacent_lp=False)
        payload = rng.integers(0, 2, size=histogram[pp], dtype=np.uint8)

        marked, record = shift_and_embed(channel, pp, zp, used_lp, payload, exclude=mask)
        restored, bits = extract_and_unshift(
            marked, pp, zp, record.used_lp, record.lp_map, exclude=mask
        )
        reversible = restored == channel and np.array_equal(bits, payload)

        n = self.settings.SSIM_WINDOW_SIZE
        structural = None
        if channel.height >= n and channel.width >= n:
            structural = mssim(channel, marked)
        return ChannelTrial(
            channel=name,
            capacity_bits=record.bits_embedded,
            psnr=psnr(channel, marked),
            mssim=structural,
            reversible=reversible,
        )

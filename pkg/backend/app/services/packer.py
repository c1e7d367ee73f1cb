"""Embed the special color layers into a general color layer and get them back.

The bilevel layer travels in R and the 3-bit layer in B; G is never
touched. Each channel runs histogram-shifting rounds until its sealed
container is fully embedded, then writes the last round's PP/ZP into the
LSBs of the 16 side-information pixels. Extraction reads those LSBs and
peels rounds newest-first, following the chain headers.
"""

from dataclasses import dataclass, field
from typing import Dict, List, Optional, Tuple

import numpy as np
from bitarray import bitarray

from app.codec.bitmap import compression_report, decode_bitmap, encode_bitmap
from app.core.config import Settings
from app.core.exceptions import (
    ContainerError,
    CorruptStream,
    DimensionMismatch,
    InsufficientCapacity,
    InvalidParameter,
    MalformedHeader,
    NotAMarkedImage,
    RdhError,
    RoundTooSmall,
)
from app.models.images import BiLevelImage, Channel, RgbImage, TriLevelLayer
from app.models.records import (
    CapacityPlan,
    ChannelName,
    ChannelPlan,
    CompressionReport,
    EmbedReport,
    LayerKind,
    RoundRecord,
    RoundSummary,
    SideInfo,
)
from app.rdh.container import (
    PayloadContainer,
    array_to_bits,
    bits_to_array,
    bits_to_bytes,
    build_round_payload,
    bytes_to_bits,
    header_bits_for,
    open_container,
    parse_round_payload,
    seal_container,
)
from app.rdh.histogram_shift import (
    SIDE_INFO_PIXELS,
    compute_histogram,
    extract_and_unshift,
    read_lsb_sideinfo,
    read_round_bits,
    restore_lsbs,
    select_pp,
    select_zp,
    shift_and_embed,
    side_info_mask,
    write_lsb_sideinfo,
)
from app.rdh.layers import decompose_3bit, recompose_3bit
from app.services.base import BaseService
from app.services.metrics import channel_metrics

CHANNEL_INDEX: Dict[ChannelName, int] = {"R": 0, "G": 1, "B": 2}
CHANNEL_LAYERS: Dict[ChannelName, LayerKind] = {"R": "binary", "B": "tri"}


def _chain(rounds) -> str:
    return " -> ".join(f"{r.pp}/{r.zp}" for r in rounds) or "-"


@dataclass
class ChannelRun:
    """Outcome of hiding one container in one channel."""

    marked: Channel
    records: List[RoundRecord] = field(default_factory=list)
    summaries: List[RoundSummary] = field(default_factory=list)
    payload_bits: int = 0
    shortfall_bits: int = 0

    @property
    def feasible(self) -> bool:
        return self.shortfall_bits == 0


@dataclass
class PreparedPayloads:
    containers: Dict[ChannelName, bytes]
    compression: Dict[LayerKind, CompressionReport]


class PackerService(BaseService):
    """Reversible packing of a bilevel and a 3-bit layer into an RGB image."""

    def __init__(self, config: Settings = None, max_rounds: Optional[int] = None):
        super().__init__(config)
        self.max_rounds = self.settings.MAX_ROUNDS if max_rounds is None else max_rounds
        if self.max_rounds < 1:
            raise InvalidParameter(f"max_rounds must be at least 1, got {self.max_rounds}")

    def embed(
        self, general: RgbImage, binary_layer: BiLevelImage, tri_layer: TriLevelLayer
    ) -> Tuple[RgbImage, EmbedReport]:
        """Hide both layers; raises InsufficientCapacity if either channel runs out."""
        prepared = self._prepare(general, binary_layer, tri_layer)
        runs = self._run_channels(general, prepared)

        failed = [run for run in runs.values() if not run.feasible]
        if failed:
            shortfall = sum(run.shortfall_bits for run in failed)
            rounds = max(len(run.records) for run in failed)
            self.logger.warning("Embedding infeasible: %d bits short", shortfall)
            raise InsufficientCapacity(shortfall, rounds)

        marked = general
        for name, run in runs.items():
            marked = marked.with_channel(CHANNEL_INDEX[name], run.marked)

        report = EmbedReport(
            width=general.width,
            height=general.height,
            channels=[self._channel_plan(general, name, run) for name, run in runs.items()],
            compression=prepared.compression,
            metrics=channel_metrics(general, marked),
        )
        return marked, report

    def plan_capacity(
        self, general: RgbImage, binary_layer: BiLevelImage, tri_layer: TriLevelLayer
    ) -> CapacityPlan:
        """Simulate the rounds ``embed`` would run, without raising on shortfall."""
        prepared = self._prepare(general, binary_layer, tri_layer)
        runs = self._run_channels(general, prepared)
        channels = [self._channel_plan(general, name, run) for name, run in runs.items()]
        feasible = all(plan.feasible for plan in channels)
        if not feasible:
            self.logger.warning("Capacity plan is infeasible")
        return CapacityPlan(
            width=general.width,
            height=general.height,
            feasible=feasible,
            channels=channels,
            compression=prepared.compression,
        )

    def extract(self, marked: RgbImage) -> Tuple[RgbImage, BiLevelImage, TriLevelLayer]:
        """Restore the general color layer and both special color layers."""
        if marked.width < SIDE_INFO_PIXELS:
            raise NotAMarkedImage(f"a {marked.width}-pixel-wide image cannot carry side information")

        restored = marked
        containers: Dict[ChannelName, PayloadContainer] = {}
        for name, kind in CHANNEL_LAYERS.items():
            index = CHANNEL_INDEX[name]
            try:
                channel, payload = self._recover_channel(marked.channel(index))
                container = open_container(payload)
            except (RdhError, ContainerError, CorruptStream) as e:
                raise NotAMarkedImage(f"{name} channel: {e.message}") from e
            if container.layer_kind != kind:
                raise NotAMarkedImage(
                    f"{name} channel carries a {container.layer_kind} layer, expected {kind}"
                )
            containers[name] = container
            restored = restored.with_channel(index, channel)

        try:
            binary_layer = decode_bitmap(containers["R"].compressed)
            planes = decode_bitmap(containers["B"].compressed)
            tri_layer = recompose_3bit(planes, containers["B"].original_layer_width)
        except (CorruptStream, DimensionMismatch) as e:
            raise NotAMarkedImage(f"layer data is damaged: {e.message}") from e

        if binary_layer.size != restored.size or tri_layer.size != restored.size:
            raise NotAMarkedImage("recovered layers do not match the image dimensions")
        self.logger.info("Extracted layers from %dx%d image", restored.width, restored.height)
        return restored, binary_layer, tri_layer

    def _prepare(
        self, general: RgbImage, binary_layer: BiLevelImage, tri_layer: TriLevelLayer
    ) -> PreparedPayloads:
        self._require_same_size(general, binary_layer, what="binary layer")
        self._require_same_size(general, tri_layer, what="3-bit layer")
        side_info_mask(general.height, general.width)

        planes = decompose_3bit(tri_layer)
        binary_compressed = encode_bitmap(binary_layer)
        tri_compressed = encode_bitmap(planes)
        r_bytes, b_bytes = seal_container(binary_compressed, tri_compressed, tri_layer.width)
        return PreparedPayloads(
            containers={"R": r_bytes, "B": b_bytes},
            compression={
                "binary": compression_report(binary_layer, binary_compressed),
                "tri": compression_report(planes, tri_compressed),
            },
        )

    def _run_channels(
        self, general: RgbImage, prepared: PreparedPayloads
    ) -> Dict[ChannelName, ChannelRun]:
        runs = {}
        for name, payload in prepared.containers.items():
            run = self._hide(general.channel(CHANNEL_INDEX[name]), payload)
            self.logger.info(
                "%s channel: %d payload bits in %d rounds, chain %s (%s)",
                name, run.payload_bits, len(run.records), _chain(run.records),
                "ok" if run.feasible else f"{run.shortfall_bits} bits short",
            )
            runs[name] = run
        return runs

    def _hide(self, channel: Channel, payload: bytes) -> ChannelRun:
        mask = side_info_mask(channel.height, channel.width)
        original_lsbs = (channel.samples[-1, :SIDE_INFO_PIXELS] & 1).tolist()
        remaining = bytes_to_bits(payload)
        run = ChannelRun(marked=channel, payload_bits=len(remaining))

        while remaining:
            round_index = len(run.records) + 1
            if round_index > self.max_rounds:
                break
            histogram = compute_histogram(run.marked, exclude=mask)
            pp = select_pp(histogram)
            zp, used_lp = select_zp(histogram, pp, allow_adjacent_lp=False)
            lp_map = []
            if used_lp:
                at_zp = (run.marked.samples == zp) & ~mask
                lp_map = np.flatnonzero(at_zp.ravel()).tolist()

            capacity = histogram[pp]
            try:
                bits, leftover = build_round_payload(
                    round_index,
                    run.records[-1] if run.records else None,
                    remaining,
                    capacity,
                    used_lp=used_lp,
                    lp_map=lp_map,
                    original_lsbs=original_lsbs,
                )
            except RoundTooSmall as e:
                self.logger.debug("Round %d stopped: %s", round_index, e.message)
                break

            run.marked, record = shift_and_embed(
                run.marked, pp, zp, used_lp, bits_to_array(bits), exclude=mask
            )
            header_bits = header_bits_for(round_index, len(lp_map))
            run.records.append(record)
            run.summaries.append(
                RoundSummary(
                    index=round_index,
                    pp=pp,
                    zp=zp,
                    used_lp=used_lp,
                    lp_count=len(lp_map),
                    capacity_bits=capacity,
                    header_bits=header_bits,
                    fragment_bits=len(remaining) - len(leftover),
                )
            )
            self.logger.debug(
                "Round %d: pp=%d zp=%d lp=%s capacity=%d header=%d fragment=%d",
                round_index, pp, zp, used_lp, capacity, header_bits,
                len(remaining) - len(leftover),
            )
            remaining = leftover

        run.shortfall_bits = len(remaining)
        if run.feasible:
            last = run.records[-1]
            run.marked, _ = write_lsb_sideinfo(run.marked, SideInfo(pp=last.pp, zp=last.zp))
        return run

    def _recover_channel(self, channel: Channel) -> Tuple[Channel, bytes]:
        """Undo every round of one channel; returns it and the reassembled container."""
        mask = side_info_mask(channel.height, channel.width)
        info = read_lsb_sideinfo(channel)
        pp, zp = info.pp, info.zp
        expected_bits: Optional[int] = None
        fragments: List[bitarray] = []
        peeled: List[SideInfo] = []
        current = channel

        for _ in range(self.max_rounds):
            if pp == zp:
                raise MalformedHeader(f"round names pp == zp == {pp}")
            raw = read_round_bits(current, pp, zp, exclude=mask)
            if expected_bits is not None and raw.size != expected_bits:
                raise MalformedHeader(
                    f"round carries {raw.size} bits, its successor recorded {expected_bits}"
                )
            header, fragment = parse_round_payload(array_to_bits(raw))
            current, _ = extract_and_unshift(
                current, pp, zp, header.used_lp, header.lp_map, exclude=mask
            )
            fragments.append(fragment)
            peeled.append(SideInfo(pp=pp, zp=zp))
            if header.terminal:
                current = restore_lsbs(current, header.original_lsbs)
                break
            pp, zp, expected_bits = header.prev_pp, header.prev_zp, header.prev_bits_embedded
        else:
            raise MalformedHeader(f"no first round within {self.max_rounds} rounds")

        body = bitarray(endian="big")
        for fragment in reversed(fragments):
            body.extend(fragment)
        self.logger.info(
            "Peeled %d rounds, chain %s, %d body bits",
            len(fragments), _chain(reversed(peeled)), len(body),
        )
        return current, bits_to_bytes(body)

    def _channel_plan(self, general: RgbImage, name: ChannelName, run: ChannelRun) -> ChannelPlan:
        original = general.channel(CHANNEL_INDEX[name]).samples.astype(np.int16)
        change = np.abs(run.marked.samples.astype(np.int16) - original)
        return ChannelPlan(
            channel=name,
            layer_kind=CHANNEL_LAYERS[name],
            payload_bits=run.payload_bits,
            feasible=run.feasible,
            rounds=len(run.records),
            shortfall_bits=run.shortfall_bits,
            capacity_bits=sum(s.capacity_bits for s in run.summaries),
            max_abs_change=int(change.max()),
            round_details=run.summaries,
        )

from app.rdh.container import (
    PayloadContainer,
    RoundChainHeader,
    build_round_payload,
    open_container,
    parse_round_payload,
    seal_container,
)
from app.rdh.histogram_shift import (
    Histogram,
    compute_histogram,
    extract_and_unshift,
    read_lsb_sideinfo,
    read_round_bits,
    round_capacity,
    select_pp,
    select_zp,
    shift_and_embed,
    side_info_mask,
    write_lsb_sideinfo,
)
from app.rdh.layers import decompose_3bit, recompose_3bit

"""Command-line front end for prepress batch work.

    python -m app.cli embed --general g.png --binary b.pbm --tri t.png --out marked.png
    python -m app.cli extract --marked marked.png --out-general g.png --out-binary b.png --out-tri t.png

Exit codes: 0 success, 1 file I/O, 2 insufficient capacity,
3 dimension mismatch or image too small, 4 not a marked image,
5 any other packer error. JSON goes to stdout, diagnostics to stderr.
"""

import argparse
import json
import logging
import sys
from pathlib import Path
from typing import List, Optional

from app.core.config import settings
from app.core.exceptions import PackerError
from app.core.logging import setup_logging
from app.imaging.imageio import (
    read_binary_layer,
    read_general_layer,
    read_tri_layer,
    write_image,
)
from app.services.evaluation import EvaluationService
from app.services.fixtures import gen_illustration, gen_layers
from app.services.metrics import channel_metrics
from app.services.packer import PackerService

logger = logging.getLogger("app.cli")


def _print_json(payload: dict) -> None:
    sys.stdout.write(json.dumps(payload, indent=2) + "\n")


def _marked_format(path: str) -> Optional[str]:
    suffix = Path(path).suffix.lower()
    if suffix in (".png", ".ppm"):
        return None
    return settings.MARKED_FORMAT


def cmd_embed(args: argparse.Namespace) -> int:
    general = read_general_layer(args.general)
    binary_layer = read_binary_layer(args.binary)
    tri_layer = read_tri_layer(args.tri)

    marked, report = PackerService().embed(general, binary_layer, tri_layer)
    write_image(marked, args.out, format=_marked_format(args.out))
    if args.report:
        try:
            Path(args.report).write_text(report.model_dump_json(indent=2))
        except OSError as e:
            logger.error("Cannot write report %s: %s", args.report, e)
            return 1
    logger.info(
        "Embedded: %s",
        ", ".join(f"{c.channel} {c.rounds} round(s)" for c in report.channels),
    )
    return 0


def cmd_extract(args: argparse.Namespace) -> int:
    marked = read_general_layer(args.marked)
    general, binary_layer, tri_layer = PackerService().extract(marked)
    write_image(general, args.out_general)
    write_image(binary_layer, args.out_binary)
    write_image(tri_layer, args.out_tri)
    return 0


def cmd_capacity(args: argparse.Namespace) -> int:
    general = read_general_layer(args.general)
    binary_layer = read_binary_layer(args.binary)
    tri_layer = read_tri_layer(args.tri)
    plan = PackerService().plan_capacity(general, binary_layer, tri_layer)
    _print_json(plan.model_dump(mode="json"))
    return 0


def cmd_metrics(args: argparse.Namespace) -> int:
    report = channel_metrics(read_general_layer(args.a), read_general_layer(args.b))
    _print_json(report.model_dump(mode="json"))
    return 0


def cmd_gen(args: argparse.Namespace) -> int:
    general = gen_illustration(args.width, args.height, args.colors, args.seed)
    binary_layer, tri_layer = gen_layers(general)
    outputs = {
        "general": f"{args.out_prefix}_general.png",
        "binary": f"{args.out_prefix}_binary.png",
        "tri": f"{args.out_prefix}_tri.png",
    }
    write_image(general, outputs["general"])
    write_image(binary_layer, outputs["binary"])
    write_image(tri_layer, outputs["tri"])
    _print_json(outputs)
    return 0


def cmd_bench(args: argparse.Namespace) -> int:
    report = EvaluationService().evaluate_corpus(
        count=args.count,
        seed=args.seed,
        min_size=args.min_size,
        max_size=args.max_size,
        max_colors=args.max_colors,
    )
    _print_json(report.model_dump(mode="json"))
    return 0


def cmd_serve(args: argparse.Namespace) -> int:
    import uvicorn

    uvicorn.run("main:app", host=args.host, port=args.port, log_level="info")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="packer",
        description="Reversibly pack special color layers into a general color layer.",
    )
    parser.add_argument("-v", "--verbose", action="store_true", help="debug logging")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("embed", help="hide the binary and 3-bit layers")
    p.add_argument("--general", required=True, help="RGB general color layer (PNG/PPM)")
    p.add_argument("--binary", required=True, help="bilevel layer (PBM/PNG)")
    p.add_argument("--tri", required=True, help="3-bit layer as 8-bit grayscale, values 0..7")
    p.add_argument("--out", required=True, help="marked image")
    p.add_argument("--report", help="write the JSON embed report here")
    p.set_defaults(func=cmd_embed)

    p = sub.add_parser("extract", help="restore all three layers from a marked image")
    p.add_argument("--marked", required=True)
    p.add_argument("--out-general", required=True)
    p.add_argument("--out-binary", required=True)
    p.add_argument("--out-tri", required=True)
    p.set_defaults(func=cmd_extract)

    p = sub.add_parser("capacity", help="print the round plan without embedding")
    p.add_argument("--general", required=True)
    p.add_argument("--binary", required=True)
    p.add_argument("--tri", required=True)
    p.set_defaults(func=cmd_capacity)

    p = sub.add_parser("metrics", help="PSNR/MSSIM of two RGB images")
    p.add_argument("--a", required=True)
    p.add_argument("--b", required=True)
    p.set_defaults(func=cmd_metrics)

    p = sub.add_parser("gen", help="write a synthetic illustration and its layers")
    p.add_argument("--width", type=int, required=True)
    p.add_argument("--height", type=int, required=True)
    p.add_argument("--colors", type=int, required=True)
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--out-prefix", required=True)
    p.set_defaults(func=cmd_gen)

    p = sub.add_parser("bench", help="embed/extract a seeded synthetic corpus")
    p.add_argument("--count", type=int, default=20)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--min-size", type=int, default=64)
    p.add_argument("--max-size", type=int, default=256)
    p.add_argument("--max-colors", type=int, default=32)
    p.set_defaults(func=cmd_bench)

    p = sub.add_parser("serve", help="run the HTTP API")
    p.add_argument("--host", default="127.0.0.1")
    p.add_argument("--port", type=int, default=8000)
    p.set_defaults(func=cmd_serve)
    return parser


def main(argv: Optional[List[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    setup_logging("DEBUG" if args.verbose else None)
    try:
        return args.func(args)
    except PackerError as e:
        sys.stderr.write(f"error: {e.message}\n")
        return e.exit_code


if __name__ == "__main__":
    sys.exit(main())

"""PNG and PNM reading/writing for every raster kind the packer handles.

Bilevel files follow the PBM convention on both formats: a black pixel is
ink (1), anything else background (0).
"""

import logging
import re
from pathlib import Path
from typing import BinaryIO, Literal, Optional, Union

import numpy as np
from PIL import Image, UnidentifiedImageError

from app.core.exceptions import (
    CorruptFile,
    FormatMismatch,
    ImageIOError,
    UnsupportedBitDepth,
    UnsupportedFormat,
)
from app.models.images import BiLevelImage, Channel, GrayImage, RgbImage, TriLevelLayer

logger = logging.getLogger(__name__)

ImageFormat = Literal["png", "pbm", "pgm", "ppm"]
AnyImage = Union[RgbImage, GrayImage, BiLevelImage]
PathLike = Union[str, Path]
Source = Union[PathLike, BinaryIO]

_SUFFIX_FORMATS = {".png": "png", ".pbm": "pbm", ".pgm": "pgm", ".ppm": "ppm"}
_PILLOW_FORMATS = {"png": "PNG", "pbm": "PPM", "pgm": "PPM", "ppm": "PPM"}
_UNSUPPORTED_MODES = {"P", "PA", "RGBA", "LA", "La", "RGBa", "I", "I;16", "I;16B", "I;16L", "F", "CMYK"}
_PNM_WITH_MAXVAL = (b"P2", b"P3", b"P5", b"P6")
_PNM_HEADER_PEEK = 1024


def _label(source: Source) -> str:
    if isinstance(source, (str, Path)):
        return str(source)
    return getattr(source, "name", None) or "<stream>"


def read_image(source: Source) -> AnyImage:
    """Decode a PNG or PNM file (path or binary stream) into the matching raster type."""
    path = _label(source)
    try:
        maxval = _pnm_maxval(source)
        if maxval is not None and maxval != 255:
            raise UnsupportedBitDepth(f"{path}: PNM maxval {maxval} is not supported, only 255")
        with Image.open(source) as im:
            if im.format not in ("PNG", "PPM"):
                raise UnsupportedFormat(f"{path}: {im.format} files are not supported")
            if im.mode in _UNSUPPORTED_MODES:
                raise UnsupportedBitDepth(f"{path}: mode {im.mode} is not supported")
            if "transparency" in im.info:
                raise UnsupportedBitDepth(f"{path}: transparency is not supported")
            im.load()
            return _from_pillow(im, path)
    except UnidentifiedImageError as e:
        raise UnsupportedFormat(f"{path}: unrecognised image format") from e
    except (FileNotFoundError, IsADirectoryError, PermissionError) as e:
        raise ImageIOError(f"{path}: {e.strerror or e}") from e
    except ImageIOError:
        raise
    except (OSError, SyntaxError, ValueError, EOFError) as e:
        raise CorruptFile(f"{path}: {e}") from e


def _pnm_maxval(source: Source) -> Optional[int]:
    """Maxval of a graymap or pixmap header; None for anything else."""
    if isinstance(source, (str, Path)):
        with open(source, "rb") as f:
            head = f.read(_PNM_HEADER_PEEK)
    else:
        start = source.tell()
        head = source.read(_PNM_HEADER_PEEK)
        source.seek(start)
    if head[:2] not in _PNM_WITH_MAXVAL:
        return None
    # magic, width, height, maxval; comments run to end of line
    tokens = re.sub(rb"#[^\r\n]*", b" ", head[2:]).split()
    if len(tokens) < 3 or not tokens[2].isdigit():
        return None
    return int(tokens[2])


def _from_pillow(im: Image.Image, path: str) -> AnyImage:
    if im.mode == "1":
        white = np.asarray(im, dtype=bool)
        return BiLevelImage((~white).astype(np.uint8))
    if im.mode == "L":
        return GrayImage(np.array(im, dtype=np.uint8))
    if im.mode == "RGB":
        return RgbImage(np.array(im, dtype=np.uint8))
    raise UnsupportedBitDepth(f"{path}: mode {im.mode} is not supported")


def write_image(img, path: Source, format: Optional[ImageFormat] = None) -> None:
    """Encode ``img`` losslessly; ``format`` defaults to the file suffix."""
    fmt = format or _SUFFIX_FORMATS.get(Path(path).suffix.lower())
    if fmt is None:
        raise UnsupportedFormat(f"{path}: cannot infer an output format")
    if fmt not in _PILLOW_FORMATS:
        raise UnsupportedFormat(f"unknown output format {fmt!r}")

    im = _to_pillow(img, fmt)
    try:
        im.save(path, format=_PILLOW_FORMATS[fmt])
    except OSError as e:
        raise ImageIOError(f"{_label(path)}: {e}") from e
    logger.debug("Wrote %r to %s as %s", img, _label(path), fmt)


def _to_pillow(img, fmt: str) -> Image.Image:
    if isinstance(img, BiLevelImage):
        if fmt not in ("png", "pbm"):
            raise FormatMismatch(f"a bilevel image cannot be written as {fmt}")
        background = np.where(img.samples == 0, 255, 0).astype(np.uint8)
        return Image.fromarray(background).convert("1", dither=Image.Dither.NONE)
    if isinstance(img, (GrayImage, Channel, TriLevelLayer)):
        if fmt not in ("png", "pgm"):
            raise FormatMismatch(f"a grayscale image cannot be written as {fmt}")
        return Image.fromarray(np.ascontiguousarray(img.samples))
    if isinstance(img, RgbImage):
        if fmt not in ("png", "ppm"):
            raise FormatMismatch(f"an RGB image cannot be written as {fmt}")
        return Image.fromarray(np.ascontiguousarray(img.samples))
    raise FormatMismatch(f"cannot write {type(img).__name__}")


def read_general_layer(path: Source) -> RgbImage:
    img = read_image(path)
    label = _label(path)
    if not isinstance(img, RgbImage):
        raise FormatMismatch(f"{label}: the general color layer must be an RGB image")
    return img


def read_binary_layer(path: Source) -> BiLevelImage:
    """Read a bilevel layer; an 8-bit file holding only 0 and 255 is accepted too."""
    img = read_image(path)
    label = _label(path)
    if isinstance(img, BiLevelImage):
        return img
    if isinstance(img, GrayImage) and np.isin(img.samples, (0, 255)).all():
        return BiLevelImage((img.samples == 0).astype(np.uint8))
    raise FormatMismatch(f"{label}: the binary layer must be a bilevel image")


def read_tri_layer(path: Source) -> TriLevelLayer:
    """Read a 3-bit layer stored as 8-bit grayscale with every value <= 7."""
    img = read_image(path)
    label = _label(path)
    if not isinstance(img, GrayImage):
        raise FormatMismatch(f"{label}: the 3-bit layer must be an 8-bit grayscale image")
    if int(img.samples.max()) > 7:
        raise CorruptFile(f"{label}: 3-bit layer holds values above 7")
    return TriLevelLayer.from_gray(img)

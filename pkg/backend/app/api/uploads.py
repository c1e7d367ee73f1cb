import base64
import io
from typing import Callable, TypeVar

from fastapi import HTTPException, UploadFile

from app.core.config import settings
from app.core.exceptions import PackerError
from app.imaging.imageio import write_image

T = TypeVar("T")


async def read_upload(upload: UploadFile, reader: Callable[[io.BytesIO], T]) -> T:
    """Decode an uploaded image with one of the layer readers."""
    data = await upload.read()
    if len(data) > settings.MAX_UPLOAD_SIZE:
        raise HTTPException(
            status_code=413,
            detail=f"{upload.filename} exceeds {settings.MAX_UPLOAD_SIZE} bytes",
        )
    stream = io.BytesIO(data)
    stream.name = upload.filename or "<upload>"
    try:
        return reader(stream)
    except PackerError as e:
        raise http_error(e) from e


def png_base64(img) -> str:
    buffer = io.BytesIO()
    write_image(img, buffer, format="png")
    return base64.b64encode(buffer.getvalue()).decode("ascii")


def http_error(e: PackerError) -> HTTPException:
    return HTTPException(status_code=e.status_code, detail=e.message)

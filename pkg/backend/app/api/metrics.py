from fastapi import APIRouter, File, UploadFile
from fastapi.concurrency import run_in_threadpool

from app.api.uploads import http_error, read_upload
from app.core.exceptions import PackerError
from app.imaging.imageio import read_general_layer
from app.services.metrics import channel_metrics

router = APIRouter()


@router.post("")
async def compare_images(a: UploadFile = File(...), b: UploadFile = File(...)):
    """PSNR and MSSIM of luminance and each color component."""
    original = await read_upload(a, read_general_layer)
    marked = await read_upload(b, read_general_layer)
    try:
        report = await run_in_threadpool(channel_metrics, original, marked)
    except PackerError as e:
        raise http_error(e)
    return report.model_dump(mode="json")

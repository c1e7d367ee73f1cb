from fastapi import APIRouter, File, HTTPException, UploadFile
from fastapi.concurrency import run_in_threadpool

from app.api.uploads import http_error, png_base64, read_upload
from app.core.exceptions import InsufficientCapacity, PackerError
from app.imaging.imageio import read_binary_layer, read_general_layer, read_tri_layer
from app.services.packer import PackerService

router = APIRouter()

# Initialize packer service
packer_service = PackerService()


@router.post("/embed")
async def embed_layers(
    general: UploadFile = File(...),
    binary: UploadFile = File(...),
    tri: UploadFile = File(...),
):
    """Hide both special color layers in the general color layer."""
    general_img = await read_upload(general, read_general_layer)
    binary_layer = await read_upload(binary, read_binary_layer)
    tri_layer = await read_upload(tri, read_tri_layer)
    try:
        marked, report = await run_in_threadpool(
            packer_service.embed, general_img, binary_layer, tri_layer
        )
    except InsufficientCapacity as e:
        raise HTTPException(
            status_code=e.status_code,
            detail={"message": e.message, "shortfall_bits": e.shortfall_bits},
        )
    except PackerError as e:
        raise http_error(e)
    return {"marked_png": png_base64(marked), "report": report.model_dump(mode="json")}


@router.post("/extract")
async def extract_layers(marked: UploadFile = File(...)):
    """Recover the general color layer and both special color layers."""
    marked_img = await read_upload(marked, read_general_layer)
    try:
        general, binary_layer, tri_layer = await run_in_threadpool(
            packer_service.extract, marked_img
        )
    except PackerError as e:
        raise http_error(e)
    return {
        "general_png": png_base64(general),
        "binary_png": png_base64(binary_layer),
        "tri_png": png_base64(tri_layer),
    }


@router.post("/capacity")
async def plan_capacity(
    general: UploadFile = File(...),
    binary: UploadFile = File(...),
    tri: UploadFile = File(...),
):
    """Round schedule embedding would use, without embedding anything."""
    general_img = await read_upload(general, read_general_layer)
    binary_layer = await read_upload(binary, read_binary_layer)
    tri_layer = await read_upload(tri, read_tri_layer)
    try:
        plan = await run_in_threadpool(
            packer_service.plan_capacity, general_img, binary_layer, tri_layer
        )
    except PackerError as e:
        raise http_error(e)
    return plan.model_dump(mode="json")

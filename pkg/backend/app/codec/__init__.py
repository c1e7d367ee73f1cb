from .bitmap import CompressedBitmap, compression_report, decode_bitmap, encode_bitmap

__all__ = ["CompressedBitmap", "compression_report", "decode_bitmap", "encode_bitmap"]

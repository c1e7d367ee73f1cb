from .imageio import (
    read_binary_layer,
    read_general_layer,
    read_image,
    read_tri_layer,
    write_image,
)

__all__ = [
    "read_binary_layer",
    "read_general_layer",
    "read_image",
    "read_tri_layer",
    "write_image",
]

"""Reversible packing of special color layers into a general color layer."""

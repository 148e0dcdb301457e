"""Peg-free hand biometric identification and verification toolkit."""

__version__ = "0.1.0"

FINGER_ORDER = ("little", "ring", "middle", "index", "thumb")
VALLEY_ORDER = ("thumb_index", "index_middle", "middle_ring", "ring_little")

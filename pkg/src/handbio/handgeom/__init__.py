"""Hand geometry: skeletons, landmarks, pose estimation, part normalization."""

from .skeleton import Skeleton, center_of_mass, detect_corners, skeletonize, trace_branch
from .contour import trace_contour
from .landmarks import (
    HandLandmarks,
    detect_fingertips,
    detect_handedness,
    detect_valleys,
    estimate_finger_poses,
    estimate_global_pose,
    label_valleys,
    refine_points,
)
from .normalize import NormalizedHand, crop_fingers, crop_palm, inpaint_ring_gap

__all__ = [
    "Skeleton",
    "skeletonize",
    "detect_corners",
    "center_of_mass",
    "trace_branch",
    "trace_contour",
    "HandLandmarks",
    "detect_valleys",
    "label_valleys",
    "detect_handedness",
    "detect_fingertips",
    "refine_points",
    "estimate_global_pose",
    "estimate_finger_poses",
    "NormalizedHand",
    "crop_fingers",
    "crop_palm",
    "inpaint_ring_gap",
]

"""Automatic RPE and choroid-sclera boundary segmentation for EDI-OCT
B-scans: three-set image transform, gradient-weighted grid-graph shortest
path, illumination correction, thickness mapping, and an interactive
correction service."""

from .filters import FlattenMap, HomomorphicParams
from .graph_segment import Boundary, WeightConfig
from .neutrosophic import NeutroConfig, NeutrosophicImage
from .pipeline import (
    PipelineConfig,
    SegmentationResult,
    ThicknessProfile,
    detect_choroid,
    detect_rpe,
    evaluate,
    segment,
    thickness_profile,
)
from .scan_io import GrayImage, LabelSet, Layer, load_labels, load_scan

__version__ = "0.1.0"

__all__ = [
    "Boundary",
    "FlattenMap",
    "GrayImage",
    "HomomorphicParams",
    "LabelSet",
    "Layer",
    "NeutroConfig",
    "NeutrosophicImage",
    "PipelineConfig",
    "SegmentationResult",
    "ThicknessProfile",
    "WeightConfig",
    "detect_choroid",
    "detect_rpe",
    "evaluate",
    "load_labels",
    "load_scan",
    "segment",
    "thickness_profile",
    "__version__",
]

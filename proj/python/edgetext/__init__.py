"""Curve-box text representation toolkit."""

from ._edgetext import (
    CurveBoxLabel,
    CurveParams,
    EdgetextError,
    ParamMask,
    TruncationPoints,
    cli,
    decode_maps,
    dice_loss,
    encode,
    match_detections,
    pi_loss,
    polygon_iou,
    precision_recall_hmean,
    read_tensor,
    reconstruct,
    reconstruct_batch,
    render_label_maps,
    smooth_l1,
    total_loss,
    write_tensor,
)

__all__ = [
    "CurveBoxLabel",
    "CurveParams",
    "EdgetextError",
    "ParamMask",
    "TruncationPoints",
    "cli",
    "decode_maps",
    "dice_loss",
    "encode",
    "match_detections",
    "pi_loss",
    "polygon_iou",
    "precision_recall_hmean",
    "read_tensor",
    "reconstruct",
    "reconstruct_batch",
    "render_label_maps",
    "smooth_l1",
    "total_loss",
    "write_tensor",
]

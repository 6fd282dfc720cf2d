#!/usr/bin/env python3
"""Recompute a segmentation report with numpy/scipy from HMAP directories.

Usage: crosscheck_segmentation.py PRED_DIR GT_DIR

Prints one CSV row per utterance in the same layout as `vocxai evaluate`.
Binary-mask predictions are used as-is; soft heatmaps are thresholded at
their 0.95 quantile (strictly greater). Used to vet the golden report before
it was frozen.
"""
import glob
import os
import struct
import sys

import numpy as np
from scipy.ndimage import binary_erosion, maximum_filter, uniform_filter


def read_hmap(path):
    raw = open(path, "rb").read()
    assert raw[:4] == b"HMAP", path
    dtype = raw[5]
    rows, cols = struct.unpack("<II", raw[8:16])
    if dtype == 1:
        return np.frombuffer(raw[16:], np.uint8).reshape(rows, cols).astype(bool), True
    return np.frombuffer(raw[16:], "<f4").reshape(rows, cols).astype(float), False


def boundary(m):
    cross = np.array([[0, 1, 0], [1, 1, 1], [0, 1, 0]], bool)
    return m & ~binary_erosion(m, cross, border_value=0)


def metrics(pred, gt, soft, tol=2):
    p = pred if not soft else pred > np.quantile(pred, 0.95)
    tp, fp = (p & gt).sum(), (p & ~gt).sum()
    fn, tn = (~p & gt).sum(), (~p & ~gt).sum()
    iou = tp / (tp + fp + fn) if tp + fp + fn else 1.0
    f1 = 2 * tp / (2 * tp + fp + fn) if 2 * tp + fp + fn else 1.0
    wf, wb = 1 / (gt.sum() ** 2 + 1e-8), 1 / ((~gt).sum() ** 2 + 1e-8)
    gd = (wf * 2 * tp + wb * 2 * tn) / (wf * (p.sum() + gt.sum()) + wb * ((~p).sum() + (~gt).sum()))
    bp, bg = boundary(p), boundary(gt)
    if not bp.any() and not bg.any():
        fb = 1.0
    elif not bp.any() or not bg.any():
        fb = 0.0
    else:
        size = 2 * tol + 1
        prec = (bp & maximum_filter(bg, size=size, mode="constant")).sum() / bp.sum()
        rec = (bg & maximum_filter(bp, size=size, mode="constant")).sum() / bg.sum()
        fb = 2 * prec * rec / (prec + rec) if prec + rec else 0.0
    a, b = pred.astype(float), gt.astype(float)
    mu = lambda x: uniform_filter(x, 7, mode="reflect")
    ma, mb = mu(a), mu(b)
    va, vb, cv = mu(a * a) - ma**2, mu(b * b) - mb**2, mu(a * b) - ma * mb
    c1, c2 = 1e-4, 9e-4
    ss = ((2 * ma * mb + c1) * (2 * cv + c2) / ((ma**2 + mb**2 + c1) * (va + vb + c2))).mean()
    return gd, f1, iou, fb, ss


def main():
    pred_dir, gt_dir = sys.argv[1:3]
    print("utterance_id,gdice,f1,iou,fbound,ssim")
    for path in sorted(glob.glob(os.path.join(gt_dir, "*.hmap"))):
        uid = os.path.basename(path).split(".")[0]
        gt, _ = read_hmap(path)
        pred, is_mask = read_hmap(os.path.join(pred_dir, uid + ".hmap"))
        row = metrics(pred, gt, soft=not is_mask)
        print(uid + "," + ",".join("%.2f" % (100 * v) for v in row))


if __name__ == "__main__":
    main()

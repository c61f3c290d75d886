"""Polar grid view: dense layer x azimuth depth image of a scan."""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .geometry import cart_to_polar
from .lidar import LidarConfig, ScanPoint


@dataclass
class PGVImage:
    values: np.ndarray        # (n_layers, n_azimuth) mean depths
    counts: np.ndarray        # contributors per pixel
    config: LidarConfig


def encode_pgv(scan: list[ScanPoint], config: LidarConfig) -> PGVImage:
    """Bin reflected points by (elevation, azimuth) and average their depths.

    Row 0 is the top layer (highest elevation). Each reflected point lands
    in exactly one pixel; pixels with no contributors hold
    config.unreflected_value.
    """
    n_rows, n_cols = config.n_layers, config.n_azimuth
    sums = np.zeros((n_rows, n_cols))
    counts = np.zeros((n_rows, n_cols), dtype=int)

    elevations = config.layer_elevations()
    az_start = -config.azimuth_span / 2.0
    full_circle = abs(config.azimuth_span - 2.0 * math.pi) < 1e-9
    polar = cart_to_polar([(p.x, p.y, p.z) for p in scan if p.reflected])
    for pp in polar:
        if config.n_layers == 1:
            layer = 0
        else:
            step = elevations[1] - elevations[0]
            layer = int(round((pp.phi - elevations[0]) / step))
        if layer < 0 or layer >= n_rows:
            continue
        col = int(round((pp.theta - az_start) / config.azimuth_resolution))
        if full_circle:
            col %= n_cols
        elif col < 0 or col >= n_cols:
            continue
        row = n_rows - 1 - layer  # row 0 = top layer
        sums[row, col] += pp.rho
        counts[row, col] += 1

    values = np.full((n_rows, n_cols), config.unreflected_value)
    hit = counts > 0
    values[hit] = sums[hit] / counts[hit]
    return PGVImage(values=values, counts=counts, config=config)


def pgv_to_pgm(image: PGVImage) -> bytes:
    """8-bit binary PGM: pixel = round(255 * depth / max_range), 0 when unreflected."""
    cfg = image.config
    scaled = np.floor(255.0 * image.values / cfg.max_range + 0.5)
    pix = np.clip(scaled, 0, 255).astype(np.uint8)
    pix[image.counts == 0] = 0
    h, w = pix.shape
    return b"P5\n%d %d\n255\n" % (w, h) + pix.tobytes()

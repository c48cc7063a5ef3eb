"""Text region detection: MSER candidates filtered by geometry and stroke width."""

from __future__ import annotations

import json
from typing import Any, Mapping, Optional, Union

import numpy as np

from . import _core
from ._core import ConfigError, DecodeError, FixtureError, decode, encode_pgm, encode_png, invert, stretch

Config = Optional[Union[str, Mapping[str, Any]]]

__all__ = [
    "ConfigError",
    "DecodeError",
    "FixtureError",
    "decode",
    "default_config",
    "detect",
    "detect_regions",
    "encode_pgm",
    "encode_png",
    "invert",
    "region_props",
    "render_text_fixture",
    "stretch",
    "stroke_stats",
]


def _config_text(config: Config) -> str:
    if config is None:
        return "{}"
    if isinstance(config, str):
        return config
    return json.dumps(config)


def default_config() -> dict:
    return json.loads(_core.default_config())


def detect(image: np.ndarray, config: Config = None) -> dict:
    """Run the full pipeline and return the result document."""
    return json.loads(_core.detect(image, _config_text(config)))


def detect_regions(image: np.ndarray, config: Config = None) -> list:
    """Raw MSERs as (pixels, polarity, source_level); pixels is an (N, 2) x, y array."""
    return _core.detect_regions(image, _config_text(config))


def region_props(pixels) -> dict:
    return json.loads(_core.region_props(np.asarray(pixels, dtype=np.int32)))


def stroke_stats(pixels, end_trim: int = 2) -> dict:
    widths, mean, stddev, variation = _core.stroke_stats(np.asarray(pixels, dtype=np.int32), end_trim)
    return {"widths": widths, "mean": mean, "stddev": stddev, "variation": variation}


def render_text_fixture(text: str, height: int = 14, x: int = 10, y: int = 10,
                        canvas_width: int = 640, canvas_height: int = 480):
    """Black-on-white word image and its tight ink box."""
    image, box = _core.render_text_fixture(text, height, x, y, canvas_width, canvas_height)
    return image, json.loads(box)

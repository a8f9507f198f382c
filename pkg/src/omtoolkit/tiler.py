"""Any-resolution image tiling.

An arbitrary-resolution image is matched to the best grid of fixed-size
square tiles (the grid cell budget excludes the optional global thumbnail),
resized to fit that grid's canvas, padded, and sliced row-major. Token
accounting is exact: every tile and the thumbnail cost ``tokens_per_tile``
vision tokens.

Grid scoring is a total order evaluated in exact rational arithmetic:
maximize effective resolution (area of the aspect-preserving fit into the
candidate canvas, capped at the original area), then minimize wasted canvas
area, then cell count, then rows.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import numpy as np
from PIL import Image

from .errors import ConfigError, InputError

PAD_COLOR = (128, 128, 128)


@dataclass(frozen=True)
class TilerConfig:
    """Tiling knobs. Defaults give 576 tokens per 336px tile (14px patches)."""

    base_tile_px: int = 336
    max_tiles: int = 6
    tokens_per_tile: int = 576
    thumbnail_enabled: bool = True

    def __post_init__(self) -> None:
        if self.base_tile_px <= 0:
            raise ConfigError(f"base_tile_px must be > 0, got {self.base_tile_px}")
        if self.max_tiles < 1:
            raise ConfigError(f"max_tiles must be >= 1, got {self.max_tiles}")
        if self.tokens_per_tile <= 0:
            raise ConfigError(f"tokens_per_tile must be > 0, got {self.tokens_per_tile}")


@dataclass(frozen=True)
class GridChoice:
    rows: int
    cols: int

    @property
    def cells(self) -> int:
        return self.rows * self.cols


@dataclass(frozen=True)
class TileLayout:
    """Full slicing plan for one image.

    ``scaled_size`` is the padded canvas (cols*base, rows*base): the image
    is resized aspect-preserving to fit it, padded with mid-gray, and the
    result is what ``slice_pixels`` consumes. ``tile_rects`` are (x, y, w, h)
    pixel rectangles in row-major order partitioning that canvas.
    """

    grid: GridChoice
    scaled_size: tuple[int, int]
    tile_rects: tuple[tuple[int, int, int, int], ...]
    has_thumbnail: bool
    total_image_units: int
    total_tokens: int


def _fit_scale(image_w: int, image_h: int, canvas_w: int, canvas_h: int) -> Fraction:
    """Aspect-preserving scale factor fitting the image inside the canvas."""
    if canvas_w * image_h <= canvas_h * image_w:
        return Fraction(canvas_w, image_w)
    return Fraction(canvas_h, image_h)


def _check_dims(image_w: int, image_h: int) -> None:
    if image_w <= 0 or image_h <= 0:
        raise InputError(f"image dimensions must be positive, got {image_w}x{image_h}")


def select_grid(image_w: int, image_h: int, cfg: TilerConfig) -> GridChoice:
    """Pick the grid (rows*cols <= max_tiles) maximizing effective resolution.

    Effective resolution = area after aspect-preserving scale-to-fit into
    the candidate canvas, capped at the original area. Ties break by least
    wasted canvas area, then fewest cells, then fewest rows. All comparisons
    use exact fractions, so the order is total and deterministic.
    """
    _check_dims(image_w, image_h)
    original_area = Fraction(image_w * image_h)
    best: tuple | None = None
    best_grid: GridChoice | None = None
    for rows in range(1, cfg.max_tiles + 1):
        for cols in range(1, cfg.max_tiles // rows + 1):
            canvas_w = cols * cfg.base_tile_px
            canvas_h = rows * cfg.base_tile_px
            scale = _fit_scale(image_w, image_h, canvas_w, canvas_h)
            effective = min(original_area * scale * scale, original_area)
            waste = Fraction(canvas_w * canvas_h) - effective
            key = (-effective, waste, rows * cols, rows)
            if best is None or key < best:
                best = key
                best_grid = GridChoice(rows=rows, cols=cols)
    assert best_grid is not None
    return best_grid


def layout_image(image_w: int, image_h: int, cfg: TilerConfig) -> TileLayout:
    """Compute the tile layout and token accounting for one image."""
    _check_dims(image_w, image_h)
    grid = select_grid(image_w, image_h, cfg)
    canvas_w = grid.cols * cfg.base_tile_px
    canvas_h = grid.rows * cfg.base_tile_px
    rects = tuple(
        (c * cfg.base_tile_px, r * cfg.base_tile_px, cfg.base_tile_px, cfg.base_tile_px)
        for r in range(grid.rows)
        for c in range(grid.cols)
    )
    # A 1x1 grid already encodes the whole image once; a thumbnail there
    # would be a duplicate encoding.
    has_thumbnail = cfg.thumbnail_enabled and grid.cells > 1
    units = grid.cells + (1 if has_thumbnail else 0)
    return TileLayout(
        grid=grid,
        scaled_size=(canvas_w, canvas_h),
        tile_rects=rects,
        has_thumbnail=has_thumbnail,
        total_image_units=units,
        total_tokens=units * cfg.tokens_per_tile,
    )


def fit_size(image_w: int, image_h: int, canvas_w: int, canvas_h: int) -> tuple[int, int]:
    """Resized dimensions: aspect-preserving fit, one edge fills the canvas.

    Rounding is half-up on the non-binding edge; results never exceed the
    canvas and never collapse below one pixel.
    """
    if canvas_w * image_h <= canvas_h * image_w:
        new_w = canvas_w
        new_h = int(Fraction(image_h * canvas_w, image_w) + Fraction(1, 2))
        new_h = max(1, min(canvas_h, new_h))
    else:
        new_h = canvas_h
        new_w = int(Fraction(image_w * canvas_h, image_h) + Fraction(1, 2))
        new_w = max(1, min(canvas_w, new_w))
    return new_w, new_h


def resize_and_pad(image: np.ndarray, layout: TileLayout, cfg: TilerConfig) -> np.ndarray:
    """Resize (bilinear) to fit the layout canvas and pad with mid-gray.

    Accepts an (H, W, 3) uint8 raster; returns the (canvas_h, canvas_w, 3)
    canvas that slice_pixels expects. Content is anchored at the top-left.
    """
    img = _as_rgb(image)
    canvas_w, canvas_h = layout.scaled_size
    h, w = img.shape[:2]
    new_w, new_h = fit_size(w, h, canvas_w, canvas_h)
    if (new_w, new_h) != (w, h):
        img = np.asarray(
            Image.fromarray(img).resize((new_w, new_h), Image.BILINEAR), dtype=np.uint8
        )
    canvas = np.empty((canvas_h, canvas_w, 3), dtype=np.uint8)
    canvas[:, :] = PAD_COLOR
    canvas[:new_h, :new_w] = img
    return canvas


def slice_pixels(image: np.ndarray, layout: TileLayout, cfg: TilerConfig) -> list[np.ndarray]:
    """Slice a prepared canvas into row-major tiles (thumbnail last if any).

    The input must already be the padded canvas, i.e. its dimensions must
    equal layout.scaled_size.
    """
    img = _as_rgb(image)
    canvas_w, canvas_h = layout.scaled_size
    if img.shape[1] != canvas_w or img.shape[0] != canvas_h:
        raise InputError(
            f"canvas is {img.shape[1]}x{img.shape[0]}, layout expects {canvas_w}x{canvas_h}"
        )
    tiles = [img[y : y + h, x : x + w].copy() for (x, y, w, h) in layout.tile_rects]
    if layout.has_thumbnail:
        thumb_layout = TileLayout(
            grid=GridChoice(1, 1),
            scaled_size=(cfg.base_tile_px, cfg.base_tile_px),
            tile_rects=((0, 0, cfg.base_tile_px, cfg.base_tile_px),),
            has_thumbnail=False,
            total_image_units=1,
            total_tokens=cfg.tokens_per_tile,
        )
        tiles.append(resize_and_pad(img, thumb_layout, cfg))
    return tiles


def tile_image(image: np.ndarray, cfg: TilerConfig) -> tuple[TileLayout, list[np.ndarray]]:
    """End-to-end: layout, resize+pad, slice. Returns (layout, tiles)."""
    img = _as_rgb(image)
    h, w = img.shape[:2]
    layout = layout_image(w, h, cfg)
    canvas = resize_and_pad(img, layout, cfg)
    return layout, slice_pixels(canvas, layout, cfg)


def layout_to_dict(layout: TileLayout) -> dict:
    """JSON-ready form matching the layout.json schema."""
    return {
        "grid": {"rows": layout.grid.rows, "cols": layout.grid.cols},
        "scaled": list(layout.scaled_size),
        "rects": [list(r) for r in layout.tile_rects],
        "thumbnail": layout.has_thumbnail,
        "tokens": layout.total_tokens,
    }


def _as_rgb(image: np.ndarray) -> np.ndarray:
    arr = np.asarray(image)
    if arr.ndim != 3 or arr.shape[2] != 3:
        raise InputError(f"expected an (H, W, 3) raster, got shape {arr.shape}")
    return arr.astype(np.uint8, copy=False)

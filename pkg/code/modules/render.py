"""
끌림 영역(basin) 래스터 렌더링 모듈

주요 기능:
- Viewport: 복소평면 시야 + 픽셀 크기
- BasinRenderer: 행 타일 단위 병렬 렌더링 (ThreadPoolExecutor, RENEWT_THREADS)
- encode_ppm: 바이너리 PPM(P6) 인코딩 (비트 단위 결정적 출력)
- save_png: Pillow 를 이용한 PNG 저장 (편의 기능)
- default_palette: 근마다 다른 색상, 외래 주기는 빨강, 미결정은 검정
"""

import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from pathlib import Path
from typing import List, Optional, Sequence, Tuple, Union

import numpy as np
from PIL import Image, ImageColor

from .dynamics import ROOT_EPS, CycleInfo, iterate_orbits_batch
from .errors import InvalidParameter, PaletteTooSmall
from .logger import LoggerManager
from .newton_map import RelaxedNewtonMap

logger = LoggerManager("Render")

SENTINEL = -1
MAX_PIXELS = 16384
TILE_ROWS = 32
MIN_BRIGHTNESS = 0.35
UNDECIDED_BLACK = (0, 0, 0)

RGB = Tuple[int, int, int]


@dataclass(frozen=True)
class Viewport:
    center: complex
    width: float
    px_width: int
    px_height: int

    def __post_init__(self):
        object.__setattr__(self, "center", complex(self.center))
        if self.width <= 0:
            raise InvalidParameter(f"width 는 양수여야 합니다: {self.width}")
        for name in ("px_width", "px_height"):
            value = getattr(self, name)
            if not 1 <= value <= MAX_PIXELS:
                raise InvalidParameter(f"{name} 는 1 이상 {MAX_PIXELS} 이하여야 합니다: {value}")

    @property
    def height(self) -> float:
        """픽셀 종횡비와 같은 평면 높이"""
        return self.width * self.px_height / self.px_width

    def pixel_centers(self, rows: Optional[slice] = None) -> np.ndarray:
        """행은 위에서 아래로 (허수부 감소), 열은 왼쪽에서 오른쪽으로"""
        step = self.width / self.px_width
        left = self.center.real - self.width / 2
        top = self.center.imag + self.height / 2
        row_index = np.arange(self.px_height)[rows if rows is not None else slice(None)]
        xs = left + (np.arange(self.px_width) + 0.5) * step
        ys = top - (row_index + 0.5) * step
        return xs[None, :] + 1j * ys[:, None]

    def to_dict(self) -> dict:
        return {"center": self.center, "width": self.width, "px_width": self.px_width, "px_height": self.px_height}


@dataclass
class BasinImage:
    labels: np.ndarray
    iters: np.ndarray
    legend: List[dict]
    budget: int

    @property
    def shape(self) -> Tuple[int, int]:
        return self.labels.shape

    def fraction(self, label: int) -> float:
        return float(np.mean(self.labels == label))

    def cycle_fraction(self) -> float:
        cycle_labels = [entry["index"] for entry in self.legend if entry["kind"] == "cycle"]
        return float(np.mean(np.isin(self.labels, cycle_labels))) if cycle_labels else 0.0

    def legend_json(self) -> dict:
        """사이드카 JSON 범례 {index → attractor descriptor}"""
        legend = {str(entry["index"]): entry for entry in self.legend}
        legend[str(SENTINEL)] = {"index": SENTINEL, "kind": "undecided"}
        return legend

    def to_dict(self) -> dict:
        counts = {str(label): int(count) for label, count in zip(*np.unique(self.labels, return_counts=True))}
        return {
            "width": int(self.labels.shape[1]),
            "height": int(self.labels.shape[0]),
            "budget": self.budget,
            "label_counts": counts,
            "legend": self.legend_json(),
        }


def build_legend(N: RelaxedNewtonMap, cycles: Sequence[CycleInfo]) -> List[dict]:
    legend = [
        {"index": i, "kind": "root", "value": root, "multiplicity": mult}
        for i, (root, mult) in enumerate(N.p.roots)
    ]
    offset = len(legend)
    legend.extend(
        {"index": offset + j, "kind": "cycle", "period": c.period, "points": list(c.points), "class": c.classification}
        for j, c in enumerate(cycles)
    )
    return legend


class BasinRenderer:
    """행 타일 병렬 렌더러"""

    def __init__(self, threads: Optional[int] = None, tile_rows: int = TILE_ROWS):
        if threads is None:
            threads = int(os.getenv("RENEWT_THREADS", "0")) or (os.cpu_count() or 1)
        self.threads = max(1, threads)
        self.tile_rows = tile_rows
        self.logger = logger

    def render(self, N: RelaxedNewtonMap, extra_cycles: Sequence[CycleInfo], vp: Viewport,
               budget: int = 1000, eps: float = ROOT_EPS) -> BasinImage:
        self.logger.log_function_start(
            "render_basins", size=f"{vp.px_width}x{vp.px_height}", budget=budget, threads=self.threads
        )
        labels = np.empty((vp.px_height, vp.px_width), dtype=np.int64)
        iters = np.empty((vp.px_height, vp.px_width), dtype=np.int64)

        def render_tile(start: int) -> None:
            rows = slice(start, min(start + self.tile_rows, vp.px_height))
            tile_labels, tile_iters = iterate_orbits_batch(N, vp.pixel_centers(rows), budget, eps, extra_cycles)
            # 각 타일은 서로 겹치지 않는 행에만 기록
            labels[rows] = tile_labels
            iters[rows] = tile_iters

        with ThreadPoolExecutor(max_workers=self.threads) as pool:
            list(pool.map(render_tile, range(0, vp.px_height, self.tile_rows)))

        image = BasinImage(labels, iters, build_legend(N, extra_cycles), budget)
        self.logger.log_function_end("render_basins", f"sentinel={image.fraction(SENTINEL):.4%}")
        return image


def render_basins(N: RelaxedNewtonMap, extra_cycles: Sequence[CycleInfo], vp: Viewport,
                  budget: int = 1000, eps: float = ROOT_EPS) -> BasinImage:
    return BasinRenderer().render(N, extra_cycles, vp, budget, eps)


def default_palette(root_count: int, cycle_count: int = 0) -> List[RGB]:
    """근: 빨강을 피한 서로 다른 색상, 주기: 빨강 계열, 마지막: 미결정(검정)"""
    hues = np.linspace(40, 320, root_count) if root_count > 1 else [200]
    palette = [ImageColor.getrgb(f"hsv({int(round(hue))},75%,95%)") for hue in hues]
    for j in range(cycle_count):
        palette.append((255, min(200, 50 * j), min(200, 50 * j)))
    palette.append(UNDECIDED_BLACK)
    return palette


def _rgb_array(img: BasinImage, palette: Sequence[RGB], shading: str) -> np.ndarray:
    if len(palette) < len(img.legend) + 1:
        raise PaletteTooSmall(f"팔레트 색 {len(palette)}개 < 범례 {len(img.legend)} + 1")
    if shading not in ("flat", "by_iterations"):
        raise InvalidParameter(f"shading 은 flat 또는 by_iterations 이어야 합니다: {shading}")
    colors = np.asarray(palette, dtype=np.float64)
    index = np.where(img.labels == SENTINEL, len(palette) - 1, img.labels)
    rgb = colors[index]
    if shading == "by_iterations":
        factor = np.clip(1 - img.iters / max(img.budget, 1), MIN_BRIGHTNESS, 1.0)
        rgb = rgb * factor[..., None]
    return np.clip(np.round(rgb), 0, 255).astype(np.uint8)


def encode_ppm(img: BasinImage, palette: Sequence[RGB], shading: str = "flat") -> bytes:
    """바이너리 PPM P6, 8비트 채널, 위에서 아래 행 순서"""
    rgb = _rgb_array(img, palette, shading)
    height, width = img.labels.shape
    return f"P6\n{width} {height}\n255\n".encode("ascii") + rgb.tobytes()


def save_png(img: BasinImage, palette: Sequence[RGB], path: Union[str, Path], shading: str = "flat") -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    Image.fromarray(_rgb_array(img, palette, shading)).save(path)
    logger.log_success(f"PNG 저장: {path}")
    return path


def save_ppm(img: BasinImage, palette: Sequence[RGB], path: Union[str, Path], shading: str = "flat") -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_bytes(encode_ppm(img, palette, shading))
    logger.log_success(f"PPM 저장: {path}")
    return path

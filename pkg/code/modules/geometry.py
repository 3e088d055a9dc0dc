"""
Julia 집합 기하 모듈

주요 기능:
- poles: 기약 분모의 근 (모두 Julia 집합 위, ∞ 의 원상)
- sample_julia: 역반복(inverse iteration)으로 Julia 집합 표본 추출
- line_predicate / numeric_line_check: Julia 집합이 직선인지 판정 (이론 판정 + SVD 주축 수치 검증)
- symmetry_order: 원점 회전 대칭 차수 추정 (부분 Hausdorff 거리, scipy cKDTree)
- basin_unbounded_probe: 직접 끌림 영역이 반경 R 까지 닿는지 휴리스틱 탐침
- export_samples_csv: 표본 CSV 저장 ("re,im")
"""

import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import List, Optional, Sequence, Tuple, Union

import numpy as np
from scipy.spatial import cKDTree

from .dynamics import ROOT_EPS, iterate_orbits_batch
from .errors import InvalidParameter, NotAFixedRoot
from .logger import LoggerManager
from .newton_map import RelaxedNewtonMap
from .poly_core import FactoredPolynomial
from .polyroot import all_roots

logger = LoggerManager("Geometry")

BURN_IN_LEVELS = 20
DEFAULT_DEPTH = 50
# 부분 Hausdorff 거리에서 사용하는 순위 분위수 (1.0 이면 고전 Hausdorff 거리)
HAUSDORFF_QUANTILE = 0.5
TAU_FACTOR = 3.0
PROBE_DIRECTIONS = 72
REAL_H_TOL = 1e-12


@dataclass(frozen=True)
class JuliaSample:
    """역반복 표본. parents[i] 는 points[i] 의 상(image) 입니다: N(points[i]) ≈ parents[i]"""
    points: np.ndarray
    parents: np.ndarray
    seed: complex
    depth: int

    def __len__(self) -> int:
        return len(self.points)

    def to_dict(self) -> dict:
        return {"count": len(self.points), "seed": self.seed, "depth": self.depth}


@dataclass(frozen=True)
class LineResult:
    is_line: bool
    point: Optional[complex] = None
    direction: Optional[complex] = None

    def to_dict(self) -> dict:
        return {"is_line": self.is_line, "point": self.point, "direction": self.direction}


@dataclass(frozen=True)
class LineFit:
    max_deviation: float
    point: complex
    direction: complex
    within_tolerance: bool

    def to_dict(self) -> dict:
        return {
            "max_deviation": self.max_deviation,
            "point": self.point,
            "direction": self.direction,
            "within_tolerance": self.within_tolerance,
        }


@dataclass(frozen=True)
class SymmetryEstimate:
    order: int
    hausdorff_defects: Tuple[Tuple[int, float], ...]
    tau: float
    line_case: bool = False
    # 방향 거리의 분위수 (0.5 = 중앙값, 1.0 = 고전 Hausdorff)
    quantile: float = HAUSDORFF_QUANTILE

    def to_dict(self) -> dict:
        return {
            "order": self.order,
            "tau": self.tau,
            "quantile": self.quantile,
            "defects": [{"order": n, "defect": d} for n, d in self.hausdorff_defects],
            "line_case": self.line_case,
        }


@dataclass(frozen=True)
class BasinProbe:
    root: complex
    radius: float
    angle: Optional[float]
    witness: Optional[Tuple[complex, ...]]
    surviving_directions: int
    heuristic: bool = field(default=True, init=False)

    @property
    def found(self) -> bool:
        return self.witness is not None

    def to_dict(self) -> dict:
        return {
            "root": self.root,
            "radius": self.radius,
            "angle": self.angle,
            "found": self.found,
            "vertices": len(self.witness) if self.witness else 0,
            "surviving_directions": self.surviving_directions,
            "heuristic": self.heuristic,
        }


def poles(N: RelaxedNewtonMap) -> List[complex]:
    """기약 분모의 근 (중복 포함)"""
    if N.den.degree < 1:
        return []
    return all_roots(N.den)


def _points_of(samples: Union[JuliaSample, Sequence[complex], np.ndarray]) -> np.ndarray:
    if isinstance(samples, JuliaSample):
        return np.asarray(samples.points, dtype=complex)
    return np.asarray(samples, dtype=complex).ravel()


class JuliaSampler:
    """역반복 Julia 표본 추출기"""

    def __init__(self, N: RelaxedNewtonMap, burn_in: int = BURN_IN_LEVELS):
        self.N = N
        self.burn_in = burn_in
        self.logger = logger
        self.poles = poles(N)
        if not self.poles:
            raise InvalidParameter("극점이 없는 사상은 역반복을 시작할 수 없습니다.")

    def preimages(self, w: complex) -> List[complex]:
        """num(z) − w·den(z) = 0 의 해"""
        equation = self.N.num - self.N.den.scale(w)
        return all_roots(equation)

    def sample(self, count: int, depth: int = DEFAULT_DEPTH, rng_seed: int = 0) -> JuliaSample:
        if count < 1 or depth < 1:
            raise InvalidParameter(f"count, depth 는 1 이상이어야 합니다: count={count}, depth={depth}")
        self.logger.log_function_start("sample_julia", count=count, depth=depth, rng_seed=rng_seed)
        rng = np.random.default_rng(rng_seed)
        seed = self.poles[0]
        points: List[complex] = []
        parents: List[complex] = []

        while len(points) < count:
            # 체인마다 극점에서 다시 시작
            w = self.poles[int(rng.integers(len(self.poles)))]
            for level in range(self.burn_in + depth):
                candidates = self.preimages(w)
                z = candidates[int(rng.integers(len(candidates)))]
                if level >= self.burn_in:
                    points.append(z)
                    parents.append(w)
                    if len(points) >= count:
                        break
                w = z

        result = JuliaSample(np.asarray(points, dtype=complex), np.asarray(parents, dtype=complex), seed, depth)
        self.logger.log_function_end("sample_julia", f"{len(result)} points")
        return result


def sample_julia(N: RelaxedNewtonMap, count: int, depth: int = DEFAULT_DEPTH, rng_seed: int = 0) -> JuliaSample:
    return JuliaSampler(N).sample(count, depth, rng_seed)


def _canonical_direction(direction: complex) -> complex:
    direction = direction / abs(direction)
    if direction.imag < 0 or (direction.imag == 0 and direction.real < 0):
        direction = -direction
    return direction


def line_predicate(p: FactoredPolynomial, h: complex) -> LineResult:
    """두 근, 같은 중복도, 실수 h 일 때만 Julia 집합이 직선 (두 근의 수직이등분선)"""
    h = complex(h)
    if len(p.roots) != 2:
        return LineResult(False)
    (r1, m1), (r2, m2) = p.roots
    if m1 != m2 or abs(h.imag) > REAL_H_TOL:
        return LineResult(False)
    return LineResult(True, (r1 + r2) / 2, _canonical_direction(1j * (r2 - r1)))


def numeric_line_check(samples, tol: float = 1e-6) -> LineFit:
    """SVD 주축으로 직선을 맞추고 최대 수직 편차를 반환합니다."""
    points = _points_of(samples)
    if points.size < 2:
        raise InvalidParameter("직선 적합에는 최소 2개의 점이 필요합니다.")
    if points.size < 10:
        logger.log_warning_with_icon(f"표본이 {points.size}개뿐이라 직선 판정의 근거가 약합니다.")
    center = points.mean()
    coords = np.column_stack([(points - center).real, (points - center).imag])
    _, _, vt = np.linalg.svd(coords, full_matrices=False)
    direction = _canonical_direction(complex(vt[0, 0], vt[0, 1]))
    # 주축에 대한 수직 성분 = Im(conj(direction)·(z − c))
    deviation = float(np.max(np.abs((np.conj(direction) * (points - center)).imag)))
    return LineFit(deviation, complex(center), direction, deviation < tol)


def _directed_partial_hausdorff(source: np.ndarray, tree: cKDTree, quantile: float) -> float:
    distances, _ = tree.query(np.column_stack([source.real, source.imag]), k=1)
    return float(np.quantile(distances, quantile))


def median_spacing(points: np.ndarray) -> float:
    coords = np.column_stack([points.real, points.imag])
    distances, _ = cKDTree(coords).query(coords, k=2)
    return float(np.median(distances[:, 1]))


def symmetry_order(samples, max_order: int, tau: Optional[float] = None,
                   quantile: float = HAUSDORFF_QUANTILE) -> SymmetryEstimate:
    """
    원점 중심 2π/n 회전에 대한 대칭 부분 Hausdorff 거리로 회전 대칭 차수를 추정합니다.
    τ 를 주지 않으면 표본 최근접 이웃 간격 중앙값의 3배를 사용합니다.
    """
    points = _points_of(samples)
    if points.size == 0:
        raise InvalidParameter("표본이 비어 있습니다.")
    if max_order < 1:
        raise InvalidParameter(f"max_order 는 1 이상이어야 합니다: {max_order}")
    if tau is None:
        tau = TAU_FACTOR * median_spacing(points) if points.size > 1 else 0.0

    tree = cKDTree(np.column_stack([points.real, points.imag]))
    defects = []
    order = 1
    for n in range(1, max_order + 1):
        rotated = points * np.exp(2j * np.pi / n)
        rotated_tree = cKDTree(np.column_stack([rotated.real, rotated.imag]))
        defect = max(
            _directed_partial_hausdorff(rotated, tree, quantile),
            _directed_partial_hausdorff(points, rotated_tree, quantile),
        )
        defects.append((n, defect))
        if n == 1 or defect < tau:
            order = n
    # 원점을 지나는 직선은 π 회전 대칭이므로 따로 표시
    fit = numeric_line_check(points) if points.size >= 2 else None
    line_case = bool(
        fit is not None and fit.within_tolerance
        and abs((np.conj(fit.direction) * -fit.point).imag) < 1e-6
    )
    return SymmetryEstimate(order, tuple(defects), float(tau), line_case, float(quantile))


class BasinProber:
    """직접 끌림 영역 비유계성 휴리스틱 탐침"""

    def __init__(self, N: RelaxedNewtonMap, budget: int = 500, eps: float = ROOT_EPS,
                 directions: int = PROBE_DIRECTIONS):
        self.N = N
        self.budget = budget
        self.eps = eps
        self.directions = directions
        self.logger = logger

    def _root_index(self, root: complex) -> int:
        for index, (r, mult) in enumerate(self.N.p.roots):
            if abs(root - r) <= 1e-9 * max(1.0, abs(r)):
                if abs(1 - self.N.h / mult) >= 1:
                    raise NotAFixedRoot(f"근 {root} 는 끌개 고정점이 아닙니다 (|1 − h/m| ≥ 1).")
                return index
        raise NotAFixedRoot(f"{root} 는 p 의 근이 아닙니다.")

    def probe(self, root: complex, R: float, delta: float) -> BasinProbe:
        root = complex(root)
        self.logger.log_function_start("basin_unbounded_probe", root=root, R=R, delta=delta)
        index = self._root_index(root)
        max_root = max(abs(r) for r in self.N.roots)
        if R <= 10 * max_root:
            raise InvalidParameter(f"R={R} 는 10·max|root| = {10 * max_root} 보다 커야 합니다.")
        if delta <= 0:
            raise InvalidParameter(f"delta 는 양수여야 합니다: {delta}")

        steps = int(math.ceil((R + abs(root)) / delta))
        distances = delta * np.arange(steps + 1)
        angles = 2 * np.pi * np.arange(self.directions) / self.directions
        # 각도 순서대로 나열된 (방향 × 꼭짓점) 격자
        polylines = root + distances[None, :] * np.exp(1j * angles)[:, None]
        reach = np.argmax(np.abs(polylines) >= R, axis=1)
        labels, _ = iterate_orbits_batch(self.N, polylines, self.budget, self.eps)

        surviving = []
        for j in range(self.directions):
            last = int(reach[j])
            if np.all(labels[j, : last + 1] == index):
                surviving.append(j)

        if surviving:
            j = surviving[0]
            witness = tuple(complex(v) for v in polylines[j, : int(reach[j]) + 1])
            result = BasinProbe(root, float(R), float(angles[j]), witness, len(surviving))
        else:
            result = BasinProbe(root, float(R), None, None, 0)
        self.logger.log_function_end("basin_unbounded_probe", f"found={result.found} (heuristic)")
        return result


def basin_unbounded_probe(N: RelaxedNewtonMap, root: complex, R: float, delta: float,
                          budget: int = 500) -> BasinProbe:
    return BasinProber(N, budget).probe(root, R, delta)


def export_samples_csv(samples, path: Union[str, Path]) -> Path:
    """한 줄에 "re,im" 하나"""
    points = _points_of(samples)
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    np.savetxt(path, np.column_stack([points.real, points.imag]), delimiter=",", fmt="%.17g")
    logger.log_success(f"Julia 표본 {points.size}개 저장: {path}")
    return path


def invariance_defect(N: RelaxedNewtonMap, sample: JuliaSample) -> float:
    """max |N(z) − w| / max(1, |w|) over (z, w = parent)"""
    values = [abs(N(z) - w) / max(1.0, abs(w)) for z, w in zip(sample.points, sample.parents)]
    return float(max(values)) if values else 0.0


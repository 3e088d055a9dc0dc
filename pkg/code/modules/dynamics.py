"""
궤도 동역학 모듈

주요 기능:
- iterate_orbit: 한 초기값의 궤도를 근 수렴 / 끌개 주기 / 발산 / 미결정으로 판정
- detect_cycle: Brent 방식 주기 후보 탐지 + N^q(z) − z 에 대한 감쇠 뉴턴 보정
- classify_convergence: 모든 임계점 궤도로 수렴성 판정 (증거 수준, 증명 아님)
- iterate_orbits_batch: numpy 벡터화 궤도 반복 (렌더링, 비유계성 탐침용)
"""

import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import List, Optional, Sequence, Tuple

import numpy as np
from numpy.polynomial import polynomial as npoly

from .errors import PoleInput
from .logger import LoggerManager
from .newton_map import (
    RelaxedNewtonMap,
    critical_points,
    eval_map,
    is_infinity,
    map_derivative,
)

logger = LoggerManager("Dynamics")

DEFAULT_BUDGET = 2000
ROOT_EPS = 1e-8
CONFIRM_STEPS = 5
ESCAPE_STREAK = 10
MAX_PERIOD = 64
# Brent 탐지가 주기 64까지 닿는 꼬리 길이
TAIL_LENGTH = 130
CANDIDATE_RTOL = 1e-6
REFINE_STEPS = 60
REFINED_RTOL = 1e-10
FALLBACK_RTOL = 1e-8
CYCLE_ROOT_SEPARATION = 1e-6
REPELLING_SLACK = 1e-6
PARABOLIC_BAND = 1e-4
SUPERATTRACTING_CYCLE_TOL = 1e-8

CONVERGED_TO_ROOT = "converged_to_root"
ATTRACTED_TO_CYCLE = "attracted_to_cycle"
DIVERGED_TO_INFINITY = "diverged_to_infinity"
UNDECIDED = "undecided"

CONVERGENT_EVIDENCE = "ConvergentEvidence"
NON_CONVERGENT = "NonConvergent"
UNDECIDED_VERDICT = "Undecided"

CYCLE_SUPERATTRACTING = "superattracting"
CYCLE_ATTRACTING = "attracting"
CYCLE_PARABOLIC_SUSPECT = "parabolic-suspect"


@dataclass(frozen=True)
class CycleInfo:
    period: int
    points: Tuple[complex, ...]
    multiplier: complex
    classification: str
    residual: float = 0.0

    @property
    def is_attracting(self) -> bool:
        return self.classification in (CYCLE_SUPERATTRACTING, CYCLE_ATTRACTING)

    def distance_to(self, z: complex) -> float:
        return min(abs(z - w) for w in self.points)

    def same_cycle(self, other: "CycleInfo", tol: float = 1e-6) -> bool:
        return self.period == other.period and all(other.distance_to(w) <= tol * max(1.0, abs(w)) for w in self.points)

    def to_dict(self) -> dict:
        return {
            "period": self.period,
            "points": list(self.points),
            "multiplier": self.multiplier,
            "class": self.classification,
        }


@dataclass(frozen=True)
class OrbitOutcome:
    kind: str
    iterations: int
    seed: complex
    root_index: Optional[int] = None
    cycle: Optional[CycleInfo] = None
    via_pole: bool = False

    def to_dict(self) -> dict:
        data = {"seed": self.seed, "kind": self.kind, "iterations": self.iterations}
        if self.root_index is not None:
            data["root_index"] = self.root_index
        if self.cycle is not None:
            data["cycle"] = self.cycle.to_dict()
        if self.kind == DIVERGED_TO_INFINITY:
            data["via_pole"] = self.via_pole
        return data


@dataclass(frozen=True)
class ConvergenceVerdict:
    status: str
    outcomes: Tuple[OrbitOutcome, ...]
    cycles: Tuple[CycleInfo, ...] = ()

    @property
    def cycle(self) -> Optional[CycleInfo]:
        return self.cycles[0] if self.cycles else None

    def to_dict(self) -> dict:
        return {
            "status": self.status,
            "cycles": [c.to_dict() for c in self.cycles],
            "orbits": [o.to_dict() for o in self.outcomes],
        }


def _nearest_root(z: complex, roots: Sequence[complex], eps: float) -> Optional[int]:
    for index, root in enumerate(roots):
        if abs(z - root) <= eps * max(1.0, abs(root)):
            return index
    return None


def _confirms_contraction(N: RelaxedNewtonMap, z: complex, root: complex) -> bool:
    """포획 이후 CONFIRM_STEPS 동안 근까지의 거리가 증가하지 않는지 확인 (반올림 바닥 허용)"""
    floor = 1e-14 * max(1.0, abs(root))
    distance = abs(z - root)
    for _ in range(CONFIRM_STEPS):
        z = eval_map(N, z)
        if is_infinity(z):
            return False
        next_distance = abs(z - root)
        if next_distance > distance and next_distance > floor:
            return False
        distance = next_distance
    return True


def _orbit_derivative(N: RelaxedNewtonMap, z: complex, period: int):
    """(N^q(z), 궤도 점들, (N^q)′(z)). 극점을 만나면 None"""
    points = []
    slope = 1 + 0j
    w = z
    for _ in range(period):
        points.append(w)
        try:
            slope *= map_derivative(N, w)
        except PoleInput:
            return None
        w = eval_map(N, w)
        if is_infinity(w):
            return None
    return w, points, slope


def _residual(N: RelaxedNewtonMap, z: complex, period: int) -> float:
    w = z
    for _ in range(period):
        w = eval_map(N, w)
        if is_infinity(w):
            return math.inf
    return abs(w - z)


def _brent_period(tail: Sequence[complex]) -> Optional[Tuple[int, int]]:
    """Brent 의 power/lam 탐색. (주기 후보, 후보 위치) 또는 None"""
    power = lam = 1
    tortoise = 0
    for hare in range(1, len(tail)):
        if abs(tail[hare] - tail[tortoise]) <= CANDIDATE_RTOL * max(1.0, abs(tail[tortoise])):
            return (lam, hare) if lam <= MAX_PERIOD else None
        if power == lam:
            tortoise = hare
            power *= 2
            lam = 0
        lam += 1
    return None


def _refine(N: RelaxedNewtonMap, z: complex, period: int) -> Optional[complex]:
    """F(z) = N^q(z) − z 에 대한 감쇠 뉴턴 반복"""
    for _ in range(REFINE_STEPS):
        state = _orbit_derivative(N, z, period)
        if state is None:
            return None
        image, _, slope = state
        residual = abs(image - z)
        if residual <= 1e-14 * max(1.0, abs(z)):
            return z
        if slope == 1:
            return None
        delta = (image - z) / (slope - 1)
        step = 1.0
        for _ in range(12):
            trial = z - step * delta
            if _residual(N, trial, period) < residual:
                z = trial
                break
            step /= 2
        else:
            return z
    return z


def classify_cycle(multiplier: complex) -> str:
    """승수 λ 로 주기 분류 (척력 주기는 detect_cycle 에서 이미 제외)"""
    magnitude = abs(multiplier)
    if magnitude < SUPERATTRACTING_CYCLE_TOL:
        return CYCLE_SUPERATTRACTING
    if magnitude < 1 - PARABOLIC_BAND:
        return CYCLE_ATTRACTING
    # |λ| ∈ [1−1e−4, 1+1e−6]: 위상과 무관하게 판정 보류
    return CYCLE_PARABOLIC_SUSPECT


def detect_cycle(tail: Sequence[complex], N: RelaxedNewtonMap) -> Optional[CycleInfo]:
    """
    과도 구간 이후 궤도 꼬리에서 끌개(또는 중립) 주기를 찾습니다.
    보정이 실패하거나 보정된 주기가 척력(|승수| > 1 + 1e−6)이면 None.
    """
    tail = [complex(z) for z in tail]
    if len(tail) < 2 or any(is_infinity(z) for z in tail):
        return None
    found = _brent_period(tail)
    if found is None:
        return None
    period, position = found
    candidate = tail[position]

    refined = _refine(N, candidate, period)
    if refined is None or _residual(N, refined, period) > REFINED_RTOL * max(1.0, abs(refined)):
        if _residual(N, candidate, period) >= FALLBACK_RTOL * max(1.0, abs(candidate)):
            return None
        refined = candidate

    state = _orbit_derivative(N, refined, period)
    if state is None:
        return None
    _, points, _ = state
    # 최소 주기로 축소
    for divisor in range(1, period):
        if period % divisor == 0 and abs(points[divisor] - points[0]) <= FALLBACK_RTOL * max(1.0, abs(points[0])):
            period = divisor
            points = points[:divisor]
            break

    multiplier = 1 + 0j
    try:
        for w in points:
            multiplier *= map_derivative(N, w)
    except PoleInput:
        return None
    if abs(multiplier) > 1 + REPELLING_SLACK:
        return None

    start = min(range(period), key=lambda i: (points[i].real, points[i].imag))
    points = points[start:] + points[:start]
    return CycleInfo(
        period=period,
        points=tuple(points),
        multiplier=multiplier,
        classification=classify_cycle(multiplier),
        residual=_residual(N, points[0], period),
    )


def iterate_orbit(N: RelaxedNewtonMap, z0: complex, budget: int = DEFAULT_BUDGET,
                  eps: float = ROOT_EPS) -> OrbitOutcome:
    """초기값 z0 의 궤도를 budget 번까지 반복하여 판정합니다 (항상 결과를 반환)."""
    roots = N.roots
    radius = 1e6 * (1 + max(abs(r) for r in roots))
    search_from = budget // 2
    z = complex(z0)
    tail: List[complex] = []
    streak = 0

    for iteration in range(budget + 1):
        if is_infinity(z):
            return OrbitOutcome(DIVERGED_TO_INFINITY, iteration, z0, via_pole=True)

        index = _nearest_root(z, roots, eps)
        if index is not None and _confirms_contraction(N, z, roots[index]):
            return OrbitOutcome(CONVERGED_TO_ROOT, iteration, z0, root_index=index)

        if abs(z) > radius:
            streak += 1
            if streak >= ESCAPE_STREAK:
                return OrbitOutcome(DIVERGED_TO_INFINITY, iteration, z0)
        else:
            streak = 0

        if iteration >= search_from:
            tail.append(z)
            if len(tail) == TAIL_LENGTH:
                cycle = detect_cycle(tail, N)
                if cycle is not None:
                    if cycle.period == 1:
                        index = _nearest_root(cycle.points[0], roots, CYCLE_ROOT_SEPARATION)
                        if index is not None:
                            return OrbitOutcome(CONVERGED_TO_ROOT, iteration, z0, root_index=index)
                    return OrbitOutcome(ATTRACTED_TO_CYCLE, iteration, z0, cycle=cycle)
                tail = []

        if iteration < budget:
            z = eval_map(N, z)

    return OrbitOutcome(UNDECIDED, budget, z0)


class OrbitClassifier:
    """임계점 궤도 기반 수렴성 판정기"""

    def __init__(self, budget: int = DEFAULT_BUDGET, eps: float = ROOT_EPS, max_workers: Optional[int] = None):
        self.budget = budget
        self.eps = eps
        self.max_workers = max_workers or min(8, os.cpu_count() or 1)
        self.logger = logger

    def classify(self, N: RelaxedNewtonMap) -> ConvergenceVerdict:
        self.logger.log_function_start("classify_convergence", h=N.h, budget=self.budget)
        seeds = critical_points(N)
        # 결과는 임계점 순서대로 병합
        with ThreadPoolExecutor(max_workers=self.max_workers) as pool:
            outcomes = list(pool.map(lambda c: iterate_orbit(N, c, self.budget, self.eps), seeds))

        cycles: List[CycleInfo] = []
        undecided = False
        for outcome in outcomes:
            if outcome.kind == CONVERGED_TO_ROOT:
                continue
            if outcome.kind == DIVERGED_TO_INFINITY and outcome.via_pole:
                # 극점을 지나 ∞ 에 도달한 임계점은 Julia 집합 위에 있음
                continue
            if outcome.kind == ATTRACTED_TO_CYCLE and outcome.cycle.is_attracting:
                if min(outcome.cycle.distance_to(r) for r in N.roots) > CYCLE_ROOT_SEPARATION:
                    if not any(outcome.cycle.same_cycle(c) for c in cycles):
                        cycles.append(outcome.cycle)
                    continue
            undecided = True

        if cycles:
            status = NON_CONVERGENT
        elif undecided:
            status = UNDECIDED_VERDICT
        else:
            status = CONVERGENT_EVIDENCE
        verdict = ConvergenceVerdict(status, tuple(outcomes), tuple(cycles))
        self.logger.log_function_end("classify_convergence", status)
        return verdict


def classify_convergence(N: RelaxedNewtonMap, budget: int = DEFAULT_BUDGET,
                         eps: float = ROOT_EPS) -> ConvergenceVerdict:
    return OrbitClassifier(budget, eps).classify(N)


def iterate_orbits_batch(N: RelaxedNewtonMap, seeds, budget: int = DEFAULT_BUDGET,
                         eps: float = ROOT_EPS, cycles: Sequence[CycleInfo] = ()):
    """
    초기값 배열을 한꺼번에 반복합니다.

    Returns:
        (labels, iterations): labels 는 근 번호, 근 개수 + 주기 번호, 또는 −1 (미결정)
    """
    seeds = np.asarray(seeds, dtype=complex)
    shape = seeds.shape
    z = seeds.ravel().copy()
    labels = np.full(z.shape, -1, dtype=np.int64)
    iterations = np.full(z.shape, budget, dtype=np.int64)

    roots = np.asarray(N.roots, dtype=complex)
    root_tol = eps * np.maximum(1.0, np.abs(roots))
    cycle_points = np.asarray([w for c in cycles for w in c.points], dtype=complex)
    cycle_labels = np.asarray([len(roots) + i for i, c in enumerate(cycles) for _ in c.points], dtype=np.int64)
    cycle_tol = eps * np.maximum(1.0, np.abs(cycle_points))
    num = N.num.as_array()
    den = N.den.as_array()

    active = np.arange(z.size)
    with np.errstate(all="ignore"):
        for iteration in range(budget + 1):
            if active.size == 0:
                break
            za = z[active]
            done = ~np.isfinite(za)

            hits = np.abs(za[:, None] - roots[None, :]) <= root_tol[None, :]
            root_hit = hits.any(axis=1) & ~done
            labels[active[root_hit]] = np.argmax(hits[root_hit], axis=1)
            done |= root_hit

            if cycle_points.size:
                close = np.abs(za[:, None] - cycle_points[None, :]) <= cycle_tol[None, :]
                cycle_hit = close.any(axis=1) & ~done
                labels[active[cycle_hit]] = cycle_labels[np.argmax(close[cycle_hit], axis=1)]
                done |= cycle_hit

            iterations[active[done]] = iteration
            active = active[~done]
            if iteration == budget or active.size == 0:
                break
            za = z[active]
            denominator = npoly.polyval(za, den)
            image = npoly.polyval(za, num) / denominator
            image[denominator == 0] = np.inf
            z[active] = image

    return labels.reshape(shape), iterations.reshape(shape)

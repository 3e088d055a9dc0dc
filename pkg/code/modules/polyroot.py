"""
다항식 근 계산 모듈

주요 기능:
- Aberth–Ehrlich 동시 반복으로 모든 근 계산 (중복 근은 근접한 단순 근사로 반환)
- 단일 연결(single linkage) 군집화로 중복도 복원 (scipy.cluster.hierarchy)
- 계수 입력 → FactoredPolynomial 변환
"""

import cmath
import math
from dataclasses import dataclass
from typing import List, Optional, Sequence

import numpy as np
from numpy.polynomial import polynomial as npoly
from scipy.cluster.hierarchy import fcluster, linkage

from .errors import InvalidParameter, NoConvergence
from .poly_core import FactoredPolynomial, Polynomial, eval_poly

DEFAULT_TOL = 1e-10
DEFAULT_MAX_SWEEPS = 200
# 계수 입력에서 중복 근을 하나로 묶는 반경
DEFAULT_CLUSTER_RADIUS = 1e-4
# 초기 원 배치를 대칭에서 벗어나게 하는 고정 회전각 (황금비 기반, 무리수)
ROTATION_OFFSET = math.pi * (3 - math.sqrt(5)) / 2


@dataclass(frozen=True)
class RootCluster:
    center: complex
    multiplicity: int
    residual: float = 0.0

    def to_dict(self) -> dict:
        return {"center": self.center, "multiplicity": self.multiplicity, "residual": self.residual}


def quadratic_roots(a: complex, b: complex, c: complex) -> List[complex]:
    """az² + bz + c = 0 의 두 근 (상쇄 오차를 피하는 형태)"""
    disc = cmath.sqrt(b * b - 4 * a * c)
    q = -(b + disc) / 2 if abs(b + disc) >= abs(b - disc) else -(b - disc) / 2
    if q == 0:
        return [0j, 0j]
    return [q / a, c / q]


class RootSolver:
    """Aberth–Ehrlich 근 계산기"""

    def __init__(self, tol: float = DEFAULT_TOL, max_sweeps: int = DEFAULT_MAX_SWEEPS):
        if tol <= 0:
            raise InvalidParameter(f"tol 은 양수여야 합니다: {tol}")
        self.tol = tol
        self.max_sweeps = max_sweeps

    def all_roots(self, p: Polynomial) -> List[complex]:
        """
        p 의 모든 근을 중복 포함하여 반환합니다.

        Raises:
            InvalidParameter: degree < 1
            NoConvergence: max_sweeps 이후에도 |p(z)| > tol·scale 인 근사가 남은 경우
        """
        if p.degree < 1:
            raise InvalidParameter(f"근 계산에는 degree ≥ 1 이 필요합니다 (degree={p.degree})")

        coeffs = p.as_array()
        # 정확히 0인 근은 먼저 분리 (단항식은 상대 잔차 기준을 만족할 수 없음)
        zeros = int(np.argmax(coeffs != 0))
        coeffs = coeffs[zeros:]
        roots = [0j] * zeros

        degree = len(coeffs) - 1
        if degree == 1:
            roots.append(complex(-coeffs[0] / coeffs[1]))
        elif degree == 2:
            roots.extend(quadratic_roots(complex(coeffs[2]), complex(coeffs[1]), complex(coeffs[0])))
        elif degree > 2:
            roots.extend(self._aberth(coeffs))
        return sorted(roots, key=lambda z: (z.real, z.imag))

    def _aberth(self, coeffs: np.ndarray) -> List[complex]:
        degree = len(coeffs) - 1
        monic = coeffs / coeffs[-1]
        deriv = npoly.polyder(monic)
        abs_coeffs = np.abs(monic)

        # Cauchy 상계 위의 회전된 단위근 배치
        bound = 1 + float(np.max(abs_coeffs[:-1]))
        angles = 2 * np.pi * np.arange(degree) / degree + ROTATION_OFFSET
        z = bound * np.exp(1j * angles)

        eps = np.finfo(float).eps
        converged = np.zeros(degree, dtype=bool)
        with np.errstate(divide="ignore", invalid="ignore"):
            for _ in range(self.max_sweeps):
                active = ~converged
                if not active.any():
                    break
                za = z[active]
                values = npoly.polyval(za, monic)
                scale = npoly.polyval(np.abs(za), abs_coeffs)
                frozen = np.abs(values) <= 4 * degree * eps * scale
                slopes = npoly.polyval(za, deriv)
                ratio = values / slopes
                diff = za[:, None] - z[None, :]
                # 자기 자신(및 정확히 겹친 근사) 항은 0
                same = diff == 0
                inv = np.where(same, 0, 1 / np.where(same, 1, diff))
                idx = np.flatnonzero(active)
                correction = ratio / (1 - ratio * inv.sum(axis=1))
                bad = ~np.isfinite(correction)
                if bad.any():
                    # 기울기 0 또는 충돌: 작은 결정적 섭동
                    correction[bad] = 1e-8 * (1 + np.abs(za[bad])) * np.exp(1j * ROTATION_OFFSET)
                correction[frozen] = 0
                z[idx] = za - correction
                converged[idx[frozen]] = True
                converged[idx[np.abs(correction) <= eps * np.abs(za)]] = True

        values = np.abs(npoly.polyval(z, monic))
        scale = npoly.polyval(np.abs(z), abs_coeffs)
        if np.any(values > self.tol * scale):
            worst = float(np.max(values / scale))
            raise NoConvergence(
                f"Aberth 반복이 {self.max_sweeps}회 안에 수렴하지 않았습니다 (최대 상대 잔차 {worst:.3e})"
            )
        return [complex(v) for v in z]


_DEFAULT_SOLVER = RootSolver()


def all_roots(p: Polynomial, tol: float = DEFAULT_TOL, max_sweeps: int = DEFAULT_MAX_SWEEPS) -> List[complex]:
    solver = _DEFAULT_SOLVER if (tol, max_sweeps) == (DEFAULT_TOL, DEFAULT_MAX_SWEEPS) else RootSolver(tol, max_sweeps)
    return solver.all_roots(p)


def cluster_roots(approx: Sequence[complex], radius: float,
                  p: Optional[Polynomial] = None) -> List[RootCluster]:
    """
    단일 연결 군집화. 군집 중심은 산술 평균, residual 은 p 가 주어진 경우 max |p| over 구성원.
    군집 순서는 각 군집이 처음 등장한 순서를 따릅니다.
    """
    points = [complex(z) for z in approx]
    if not points:
        return []
    if len(points) == 1:
        labels = np.array([1])
    else:
        coords = np.column_stack([np.real(points), np.imag(points)])
        labels = fcluster(linkage(coords, method="single"), t=radius, criterion="distance")

    clusters = []
    seen = []
    for label in labels:
        if label in seen:
            continue
        seen.append(label)
        members = [z for z, lab in zip(points, labels) if lab == label]
        residual = max(abs(eval_poly(p, z)) for z in members) if p is not None else 0.0
        clusters.append(RootCluster(complex(np.mean(members)), len(members), float(residual)))
    return clusters


def factor_polynomial(p: Polynomial, radius: float = DEFAULT_CLUSTER_RADIUS) -> FactoredPolynomial:
    """계수형 다항식을 all_roots + cluster_roots 로 인수분해"""
    clusters = cluster_roots(all_roots(p), radius, p)
    return FactoredPolynomial(p.leading, tuple((c.center, c.multiplicity) for c in clusters))

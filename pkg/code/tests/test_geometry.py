"""
geometry 테스트

직선 판정, Julia 표본 추출, 회전 대칭 추정, 끌림 영역 탐침, CSV 저장을 테스트합니다.
"""

import cmath
import sys
from pathlib import Path

import numpy as np
import pytest

sys.path.insert(0, str(Path(__file__).parent.parent))

from modules.constructions import composite_rep, two_root_rep, unicritical_rep
from modules.errors import InvalidParameter, NotAFixedRoot
from modules.geometry import (
    basin_unbounded_probe,
    export_samples_csv,
    invariance_defect,
    line_predicate,
    numeric_line_check,
    poles,
    sample_julia,
    symmetry_order,
)
from modules.newton_map import build_map


@pytest.fixture(scope="module")
def classical_sample(classical_quadratic):
    """z² − 1 (h = 1) 의 Julia 표본: 허수축 위"""
    return sample_julia(classical_quadratic, 300, depth=30, rng_seed=1)


class TestLinePredicate:
    """직선 판정 테스트"""

    def test_equal_multiplicities_real_h(self):
        """(z−1)(z+1), 실수 h → 허수축"""
        result = line_predicate(two_root_rep(1, 1), 1.3)
        assert result.is_line
        assert abs(result.point) < 1e-15
        assert cmath.isclose(result.direction, 1j)

    @pytest.mark.parametrize("p, h", [
        (two_root_rep(1, 2), 1.0),
        (two_root_rep(2, 2), 1 + 0.5j),
        (unicritical_rep(3), 1.0),
    ])
    def test_not_a_line(self, p, h):
        """중복도가 다르거나, h 가 복소수이거나, 근이 셋 이상이면 직선 아님"""
        assert not line_predicate(p, h).is_line


class TestJuliaSample:
    """역반복 표본 테스트"""

    def test_poles(self, classical_quadratic):
        """(z² + 1)/(2z) 의 극점은 0"""
        assert np.allclose(poles(classical_quadratic), [0])

    def test_sample_size(self, classical_sample):
        """요청한 개수만큼 추출"""
        assert len(classical_sample) == 300
        assert classical_sample.to_dict()["count"] == 300

    def test_invariance(self, classical_quadratic, classical_sample):
        """N(z) ≈ 부모 점"""
        assert invariance_defect(classical_quadratic, classical_sample) < 1e-8

    def test_numeric_line(self, classical_sample):
        """표본이 허수축 위의 직선"""
        fit = numeric_line_check(classical_sample)
        assert fit.within_tolerance
        assert abs(abs(fit.direction.imag) - 1) < 1e-6
        assert abs(fit.point.real) < 1e-6

    def test_deterministic(self, classical_quadratic):
        """같은 시드 → 같은 표본"""
        first = sample_julia(classical_quadratic, 20, depth=5, rng_seed=9)
        second = sample_julia(classical_quadratic, 20, depth=5, rng_seed=9)
        assert np.array_equal(first.points, second.points)

    def test_invalid_count(self, classical_quadratic):
        """count < 1 거부"""
        with pytest.raises(InvalidParameter):
            sample_julia(classical_quadratic, 0)


class TestNumericLineCheck:
    """SVD 직선 적합 테스트"""

    def test_off_line_points(self):
        """원 위의 점은 직선이 아님"""
        points = np.exp(2j * np.pi * np.arange(40) / 40)
        assert not numeric_line_check(points).within_tolerance

    def test_needs_two_points(self):
        """점 하나로는 적합 불가"""
        with pytest.raises(InvalidParameter):
            numeric_line_check([1 + 1j])

    @pytest.mark.slow
    def test_real_h_stays_on_imaginary_axis(self):
        """(z−1)(z+1), h = 0.7 의 Julia 표본은 허수축"""
        fit = numeric_line_check(sample_julia(build_map(two_root_rep(1, 1), 0.7), 5000))
        assert fit.max_deviation < 1e-6
        assert abs(fit.direction.real) < 1e-9
        assert abs(fit.point.real) < 1e-6

    @pytest.mark.slow
    @pytest.mark.parametrize("p, h", [
        (two_root_rep(1, 1), 0.5 + 0.3j),
        (two_root_rep(1, 2), 1.5),
    ])
    def test_julia_set_off_line(self, p, h):
        """복소 h 이거나 중복도가 다르면 Julia 집합은 직선에서 벗어남"""
        fit = numeric_line_check(sample_julia(build_map(p, h), 5000))
        assert fit.max_deviation > 1e-2
        assert not fit.within_tolerance


class TestSymmetryOrder:
    """회전 대칭 추정 테스트"""

    def test_five_fold(self):
        """나선 팔 5개로 만든 점 집합의 차수는 5"""
        r = np.linspace(0.5, 2.0, 100)
        base = r * np.exp(0.3j * r)
        points = np.concatenate([base * np.exp(2j * np.pi * k / 5) for k in range(5)])
        estimate = symmetry_order(points, max_order=6)
        assert estimate.order == 5
        defects = dict(estimate.hausdorff_defects)
        assert defects[5] < 1e-12
        assert not estimate.line_case

    def test_line_through_origin(self):
        """원점을 지나는 직선은 line_case"""
        points = 1j * np.linspace(-3, 3, 61)
        assert symmetry_order(points, max_order=4).line_case

    def test_invalid_max_order(self):
        """max_order < 1 거부"""
        with pytest.raises(InvalidParameter):
            symmetry_order([1, -1], max_order=0)

    def test_quantile_reported(self):
        """JSON 에 방향 거리 분위수를 함께 기록"""
        points = np.exp(2j * np.pi * np.arange(12) / 12)
        assert symmetry_order(points, max_order=2).to_dict()["quantile"] == 0.5
        assert symmetry_order(points, max_order=2, quantile=1.0).quantile == 1.0

    @pytest.mark.slow
    def test_composite_julia_set_three_fold(self, ref_h):
        """z(z³−1) 의 Julia 표본은 3차 대칭이고 2, 4차는 아님"""
        estimate = symmetry_order(sample_julia(build_map(composite_rep(1, 3), ref_h), 5000), max_order=4)
        defects = dict(estimate.hausdorff_defects)
        assert estimate.order == 3
        assert defects[3] < estimate.tau
        assert defects[2] >= estimate.tau
        assert defects[4] >= estimate.tau



class TestBasinProbe:
    """직접 끌림 영역 탐침 테스트"""

    def test_half_plane_reaches_radius(self, classical_quadratic):
        """근 1 의 끌림 영역(오른쪽 반평면)은 실축 방향으로 R 까지"""
        probe = basin_unbounded_probe(classical_quadratic, 1, R=20, delta=0.05)
        assert probe.found
        assert probe.angle == 0
        assert abs(probe.witness[-1]) >= 20
        assert probe.to_dict()["heuristic"] is True

    def test_not_a_root(self, classical_quadratic):
        """근이 아닌 점 거부"""
        with pytest.raises(NotAFixedRoot):
            basin_unbounded_probe(classical_quadratic, 2, R=20, delta=0.05)

    def test_repelling_root(self):
        """|1 − h/m| ≥ 1 인 근 거부"""
        N = build_map(two_root_rep(1, 1), 2.5)
        with pytest.raises(NotAFixedRoot):
            basin_unbounded_probe(N, 1, R=20, delta=0.05)

    def test_radius_too_small(self, classical_quadratic):
        """R ≤ 10·max|root| 거부"""
        with pytest.raises(InvalidParameter):
            basin_unbounded_probe(classical_quadratic, 1, R=5, delta=0.05)


class TestExport:
    """CSV 저장 테스트"""

    def test_csv_round_trip(self, classical_sample, temp_dir):
        """한 줄에 re,im"""
        path = export_samples_csv(classical_sample, temp_dir / "julia" / "samples.csv")
        data = np.loadtxt(path, delimiter=",")
        assert data.shape == (300, 2)
        assert np.allclose(data[:, 0] + 1j * data[:, 1], classical_sample.points)

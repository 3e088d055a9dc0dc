"""
newton_map 테스트

사상 구성, 고정점/승수/지표, 임계점, 항등식, 특성화 보조정리를 테스트합니다.
"""

import cmath
import math
import sys
from pathlib import Path

import numpy as np
import pytest

sys.path.insert(0, str(Path(__file__).parent.parent))

from modules.constructions import composite_rep, two_root_rep, unicritical_rep
from modules.errors import (
    DegenerateInput,
    InvalidParameter,
    NonIntegerMultiplicity,
    NotRealizable,
    PoleInput,
)
from modules.newton_map import (
    ATTRACTING,
    EQUAL_MULTIPLIERS,
    INDEX_RATIO,
    REPELLING,
    SUPERATTRACTING,
    SUPERATTRACTING_PAIR,
    MobiusMap,
    QuadraticData,
    build_map,
    characterize_quadratic,
    critical_equation,
    critical_points,
    equal_multiplicity_reduction,
    equal_power_check,
    eval_map,
    fixed_points,
    infinity_multiplier_numeric,
    is_infinity,
    map_derivative,
    map_report,
    quadratic_data_from_multipliers,
    recognize_class,
    reconstruct_general,
    residue_index_sum,
    scaling_defect,
)
from modules.poly_core import AffineMap, FactoredPolynomial, derivative, expand, random_factored

H_REF = complex(2, math.pi) / 4


def _same_points(first, second, tol):
    a = np.asarray(first, dtype=complex)
    b = np.asarray(second, dtype=complex)
    if a.size != b.size:
        return False
    distance = np.abs(a[:, None] - b[None, :])
    return distance.min(axis=1).max() < tol and distance.min(axis=0).max() < tol


class TestBuildMap:
    """사상 구성 테스트"""

    def test_classical_quadratic(self, classical_quadratic):
        """z² − 1, h = 1 → (z² + 1)/(2z)"""
        assert np.allclose(classical_quadratic.num.coeffs, [1, 0, 1])
        assert np.allclose(classical_quadratic.den.coeffs, [0, 2])

    def test_reduced_degree_counts_distinct_roots(self):
        """기약 차수 = 서로 다른 근의 개수"""
        N = build_map(FactoredPolynomial(1, ((0, 3), (1, 1), (2j, 2))), 1.0)
        assert N.reduced_degree == 3
        assert N.degree == 6

    def test_matches_direct_formula(self):
        """기약형 값 = z − h·p/p′"""
        p = FactoredPolynomial(2 - 1j, ((1, 2), (-1 + 0.5j, 1), (0.3j, 3)))
        h = 0.8 + 0.4j
        N = build_map(p, h)
        for z in (0.7 + 0.2j, -2 + 1j, 3j):
            direct = z - h * p(z) / _derivative(p, z)
            assert cmath.isclose(eval_map(N, z), direct, rel_tol=1e-10)

    def test_zero_h_rejected(self):
        """h = 0 거부"""
        with pytest.raises(InvalidParameter):
            build_map(two_root_rep(1, 1), 0)

    @pytest.mark.parametrize("p", [
        FactoredPolynomial(1, ((1, 1),)),
        FactoredPolynomial(2, ((0.5, 4),)),
    ])
    def test_degenerate_rejected(self, p):
        """선형/단항식 거부"""
        with pytest.raises(DegenerateInput):
            build_map(p, 1.0)

    def test_pole_maps_to_infinity(self, classical_quadratic):
        """극점 z = 0 과 ∞ 는 ∞ 로"""
        assert is_infinity(eval_map(classical_quadratic, 0))
        assert is_infinity(eval_map(classical_quadratic, complex(math.inf, 0)))

    def test_derivative_at_pole(self, classical_quadratic):
        """극점에서 도함수는 PoleInput"""
        with pytest.raises(PoleInput):
            map_derivative(classical_quadratic, 0)


def _derivative(p, z):
    return derivative(expand(p))(z)


class TestFixedPoints:
    """고정점, 승수, 지표 테스트"""

    def test_two_root_example(self):
        """(z−1)(z+1)², h = 1.5 → 승수 −0.5, 0.25, ∞ 는 2"""
        records = fixed_points(build_map(two_root_rep(1, 2), 1.5))
        by_location = {("inf" if r.at_infinity else r.location): r for r in records}
        assert cmath.isclose(by_location[1].multiplier, -0.5)
        assert cmath.isclose(by_location[-1].multiplier, 0.25)
        assert cmath.isclose(by_location["inf"].multiplier, 2)
        assert by_location[1].classification == ATTRACTING
        assert by_location["inf"].classification == REPELLING

    def test_unicritical_multiplier(self, cubic_unity_map, ref_h):
        """z³ − 1 의 근 승수 1 − h, |1 − h| ≈ 0.931"""
        for record in fixed_points(cubic_unity_map):
            if not record.at_infinity:
                assert cmath.isclose(record.multiplier, 1 - ref_h)
                assert abs(record.multiplier) == pytest.approx(0.931, abs=1e-3)

    def test_superattracting_at_classical(self, classical_quadratic):
        """h = m 이면 초끌개"""
        roots = [r for r in fixed_points(classical_quadratic) if not r.at_infinity]
        assert all(r.classification == SUPERATTRACTING for r in roots)

    def test_infinity_omitted_when_h_equals_degree(self):
        """h = d 이면 ∞ 는 고정점 목록에서 제외"""
        records = fixed_points(build_map(two_root_rep(1, 1), 2.0))
        assert not any(r.at_infinity for r in records)

    def test_numeric_multipliers(self):
        """근 승수는 수치 도함수와, ∞ 승수는 등각 사상 도함수와 일치"""
        rng = np.random.default_rng(11)
        for _ in range(10):
            p = random_factored(rng, max_degree=6)
            h = p.min_multiplicity * (1 + 0.5 * cmath.exp(1j * rng.uniform(0, 2 * math.pi)))
            N = build_map(p, h)
            for root, m in p.roots:
                assert abs(map_derivative(N, root) - (1 - h / m)) < 1e-10
            d = p.degree
            assert abs(infinity_multiplier_numeric(N) - d / (d - h)) < 1e-8

    def test_index_sum(self):
        """잔류 지표의 합은 1"""
        rng = np.random.default_rng(5)
        for _ in range(10):
            p = random_factored(rng, max_degree=6)
            h = complex(rng.uniform(0.2, 1.8), rng.uniform(-0.5, 0.5)) * p.min_multiplicity
            assert abs(residue_index_sum(build_map(p, h)) - 1) < 1e-9


class TestCriticalPoints:
    """임계점 테스트"""

    def test_classical_quadratic(self, classical_quadratic):
        """고전 뉴턴 z² − 1 의 임계점은 근 ±1"""
        assert _same_points(critical_points(classical_quadratic), [1, -1], 1e-12)

    @pytest.mark.parametrize("p, kind", [
        (two_root_rep(2, 3), "two_root"),
        (unicritical_rep(4), "unicritical"),
        (composite_rep(1, 3), "composite"),
        (FactoredPolynomial(1, ((0, 1), (1, 1), (2, 1))), "general"),
    ])
    def test_recognize_class(self, p, kind):
        """닫힌 형태 클래스 인식"""
        assert recognize_class(p)[0] == kind

    @pytest.mark.parametrize("p", [
        two_root_rep(1, 1), two_root_rep(2, 3), unicritical_rep(3), unicritical_rep(5),
        composite_rep(1, 3), composite_rep(2, 2),
    ])
    def test_closed_form_matches_general(self, p):
        """닫힌 형태와 일반 풀이의 임계점 일치"""
        N = build_map(p, H_REF * p.min_multiplicity)
        closed = critical_points(N)
        assert len(closed) == 2 * N.reduced_degree - 2
        assert _same_points(closed, critical_points(N, method="general"), 1e-8)

    def test_unicritical_formula(self, cubic_unity_map, ref_h):
        """z³ − 1: 0 과 z³ = 2h/(3 − h)"""
        points = critical_points(cubic_unity_map)
        nonzero = [z for z in points if abs(z) > 1e-12]
        assert len(nonzero) == 3
        for z in nonzero:
            assert cmath.isclose(z ** 3, 2 * ref_h / (3 - ref_h), rel_tol=1e-12)

    def test_critical_equation_vanishes(self, cubic_unity_map):
        """기약 전 임계점 방정식이 임계점에서 0"""
        equation = critical_equation(cubic_unity_map)
        for z in critical_points(cubic_unity_map):
            assert abs(equation(z)) < 1e-10 * max(1.0, equation.max_abs())


class TestIdentities:
    """N_{h,p} = N_{nh,pⁿ} 과 Scaling property 테스트"""

    def test_equal_power(self):
        """거듭제곱 항등식"""
        rng = np.random.default_rng(2)
        for n in (1, 2, 3):
            p = random_factored(rng, max_degree=4)
            assert equal_power_check(p, 0.7 + 0.2j, n) < 1e-12

    def test_equal_multiplicity_reduction(self):
        """(z−1)²(z+1)², h = 2 → z² − 1 의 고전 뉴턴"""
        q, difference = equal_multiplicity_reduction(two_root_rep(2, 2), 2.0)
        assert q.multiplicities == [1, 1]
        assert difference < 1e-12

    def test_equal_multiplicity_requires_equal(self):
        """중복도가 다르면 거부"""
        with pytest.raises(InvalidParameter):
            equal_multiplicity_reduction(two_root_rep(1, 2), 1.0)

    def test_scaling_defect(self):
        """아핀 켤레 교환 결함"""
        rng = np.random.default_rng(9)
        p = random_factored(rng, max_degree=5)
        points = rng.uniform(-3, 3, 50) + 1j * rng.uniform(-3, 3, 50)
        defect = scaling_defect(p, AffineMap(1.3 - 0.4j, 0.2 + 0.9j), 0.6 + 1.1j, 0.9 + 0.1j, points)
        assert defect < 1e-9


class TestMobiusMap:
    """Möbius 변환 테스트"""

    def test_sending_to_infinity(self):
        """φ(β) = ∞, φ(∞) = 0"""
        phi = MobiusMap.sending_to_infinity(2)
        assert is_infinity(phi(2))
        assert phi(complex(math.inf, 0)) == 0

    def test_inverse_compose(self):
        """φ ∘ φ⁻¹ 는 항등"""
        phi = MobiusMap(1, 2j, 3, 4)
        z = 0.3 - 0.8j
        assert cmath.isclose(phi.compose(phi.inverse())(z), z)

    def test_singular_rejected(self):
        """행렬식 0 거부"""
        with pytest.raises(InvalidParameter):
            MobiusMap(1, 2, 2, 4)


class TestCharacterization:
    """특성화 보조정리 테스트"""

    def test_equal_multipliers(self):
        """같은 승수 λ → h = 1 − λ, k = m = 1"""
        result = characterize_quadratic(quadratic_data_from_multipliers(0.5, 0.5))
        assert result.case == EQUAL_MULTIPLIERS
        assert (result.h, result.k, result.m) == (0.5, 1, 1)

    def test_superattracting_pair(self):
        """초끌개 + 승수 1/3 → (z−1)²(z+1)³, h = 2"""
        data = quadratic_data_from_multipliers(0, 1 / 3)
        assert data.case == SUPERATTRACTING_PAIR
        result = characterize_quadratic(data)
        assert (result.h, result.k, result.m) == (2, 2, 3)
        records = [r for r in fixed_points(build_map(result.polynomial, result.h)) if not r.at_infinity]
        assert sorted(abs(r.multiplier) for r in records) == pytest.approx([0, 1 / 3])

    def test_index_ratio_with_multipliers(self):
        """승수 (0.5, 0.75) → k/m = 1/2, h = 0.5"""
        data = quadratic_data_from_multipliers(0.5, 0.75)
        assert data.case == INDEX_RATIO
        result = characterize_quadratic(data)
        assert (result.k, result.m) == (1, 2)
        assert cmath.isclose(result.h, 0.5)
        assert not result.free_scale

    def test_index_ratio_free_scale(self):
        """승수 없이 비만 주면 h = 1 대표와 free_scale"""
        result = characterize_quadratic(QuadraticData(INDEX_RATIO, 3 / 2))
        assert (result.k, result.m, result.free_scale) == (3, 2, True)

    def test_not_realizable(self):
        """(0,1) 밖의 초끌개 쌍 거부"""
        with pytest.raises(NotRealizable):
            characterize_quadratic(QuadraticData(SUPERATTRACTING_PAIR, 1.5))

    def test_reconstruct_with_finite_repelling(self):
        """척력 고정점 β = 3 을 ∞ 로 보내 p 복원"""
        result = reconstruct_general([(1, -0.5), (-1, 0.25)], 3, 1.5)
        roots = dict((round(r.real, 12), m) for r, m in result.p.roots)
        assert roots == {-0.5: 1, -0.25: 2}
        assert result.multiplier_error < 1e-10

    def test_reconstruct_round_trip(self):
        """map_report 승수로부터 원래 중복도 복원"""
        N = build_map(FactoredPolynomial(1, ((1, 1), (-1, 2), (2j, 3))), 1.5)
        report = map_report(N)
        fps = [(r["value"], r["multiplier"]) for r in report["roots"]]
        result = reconstruct_general(fps, complex(math.inf, 0), 1.5)
        assert result.p.multiplicities == [1, 2, 3]
        assert result.phi.is_identity

    def test_non_integer_multiplicity(self):
        """h/(1 − μ) 가 정수가 아니면 거부"""
        with pytest.raises(NonIntegerMultiplicity):
            reconstruct_general([(0, 0.3), (1, 0)], complex(math.inf, 0), 1.0)


class TestMapReport:
    """map_report 테스트"""

    def test_report_fields(self):
        """보고서 필드와 지표 합"""
        report = map_report(build_map(two_root_rep(1, 2), 1.5))
        assert set(report) == {"h", "roots", "infinity", "critical_points", "reduced_degree", "index_sum"}
        assert len(report["roots"]) == 2
        assert cmath.isclose(report["infinity"]["multiplier"], 2)
        assert cmath.isclose(report["index_sum"], 1)

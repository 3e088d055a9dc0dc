"""
poly_core 테스트

다항식 연산, 아핀 켤레, 삼차식 축약, 입력 문법을 테스트합니다.
"""

import cmath
import sys
from pathlib import Path

import numpy as np
import pytest

sys.path.insert(0, str(Path(__file__).parent.parent))

from modules.errors import InvalidParameter, PolynomialSyntaxError, UnicriticalInput
from modules.poly_core import (
    AffineMap,
    FactoredPolynomial,
    Polynomial,
    affine_conjugate,
    almost_equal,
    derivative,
    eval_poly,
    expand,
    normalize,
    parse_coefficients,
    parse_complex,
    parse_factored,
    power,
    random_factored,
    reduce_cubic,
    roots_of_unity,
)


class TestPolynomial:
    """Polynomial 기본 연산 테스트"""

    def test_trailing_zeros_trimmed(self):
        """끝의 0 계수 제거"""
        assert Polynomial((1, 2, 0, 0)).degree == 1

    def test_eval_horner(self):
        """z² − 1 을 z = 2 에서 평가"""
        assert eval_poly(Polynomial((-1, 0, 1)), 2) == 3

    def test_eval_array(self):
        """배열 평가는 스칼라 평가와 일치"""
        p = Polynomial((1, -2j, 3))
        zs = np.array([0.5, 1j, -2 + 1j])
        assert np.allclose(eval_poly(p, zs), [eval_poly(p, z) for z in zs])

    def test_derivative(self):
        """(z³ − 3z + 5)′ = 3z² − 3"""
        assert derivative(Polynomial((5, -3, 0, 1))).coeffs == (-3, 0, 3)

    def test_derivative_of_constant(self):
        """상수의 도함수는 0"""
        assert derivative(Polynomial((4,))).is_zero

    def test_power(self):
        """(z + 1)² = z² + 2z + 1"""
        assert power(Polynomial((1, 1)), 2).coeffs == (1, 2, 1)

    def test_power_rejects_zero_exponent(self):
        """지수 0 거부"""
        with pytest.raises(InvalidParameter):
            power(Polynomial((1, 1)), 0)

    def test_snapped(self):
        """잡음 수준의 허수부 제거"""
        p = Polynomial((1 + 1e-17j, 0, 2)).snapped()
        assert p.coeffs[0].imag == 0.0


class TestFactoredPolynomial:
    """인수분해형 테스트"""

    def test_expand(self):
        """(z−1)(z+1)² = z³ + z² − z − 1"""
        p = FactoredPolynomial(1, ((1, 1), (-1, 2)))
        assert almost_equal(expand(p), Polynomial((-1, -1, 1, 1)))

    def test_degree_and_multiplicities(self):
        """차수 = 중복도 합"""
        p = FactoredPolynomial(2, ((0, 3), (1j, 1)))
        assert p.degree == 4
        assert p.multiplicities == [3, 1]
        assert p.min_multiplicity == 1

    def test_rejects_merged_roots(self):
        """병합 반경 안의 두 근 거부"""
        with pytest.raises(InvalidParameter):
            FactoredPolynomial(1, ((1, 1), (1 + 1e-12, 1)))

    def test_rejects_zero_multiplicity(self):
        """중복도 0 거부"""
        with pytest.raises(InvalidParameter):
            FactoredPolynomial(1, ((1, 0),))

    def test_power(self):
        """pⁿ 은 중복도만 n배"""
        p = FactoredPolynomial(2, ((1, 1), (-1, 2))).power(3)
        assert p.multiplicities == [3, 6]
        assert p.leading == 8

    def test_affine_pullback_matches_coefficients(self):
        """인수분해형 λ(p∘T) 와 계수 합성 결과 일치"""
        p = FactoredPolynomial(1.5 - 0.5j, ((1, 2), (-1 + 1j, 1)))
        T = AffineMap(0.7 + 0.2j, -0.3 + 1j)
        g = p.affine_pullback(T, 2 - 1j)
        assert almost_equal(expand(g), affine_conjugate(expand(p), T, 2 - 1j), rtol=1e-12)

    def test_random_factored_degree(self):
        """무작위 인수분해형은 차수 상한과 근 간격을 지킴"""
        rng = np.random.default_rng(7)
        for _ in range(20):
            p = random_factored(rng, max_degree=6)
            assert 2 <= p.degree <= 6
            roots = p.distinct_roots
            assert all(abs(a - b) >= 1e-2 for i, a in enumerate(roots) for b in roots[i + 1:])


class TestAffineMap:
    """아핀 사상 테스트"""

    def test_compose_and_inverse(self):
        """T ∘ T⁻¹ = id"""
        T = AffineMap(2 - 1j, 0.5)
        identity = T.compose(T.inverse())
        assert cmath.isclose(identity.a, 1) and abs(identity.b) < 1e-15

    def test_rejects_zero_scale(self):
        """a = 0 거부"""
        with pytest.raises(InvalidParameter):
            AffineMap(0, 1)


class TestReductions:
    """삼차식 축약과 정규화 테스트"""

    def test_reduce_cubic(self):
        """축약 결과가 z³ − 3z + a 와 일치"""
        p = Polynomial((1 + 2j, -1, 3 - 1j, 2))
        a, T, lam = reduce_cubic(p)
        assert almost_equal(affine_conjugate(p, T, lam), Polynomial((a, -3, 0, 1)), rtol=1e-12)

    def test_reduce_cubic_already_reduced(self):
        """z³ − 3z + 1 은 a = 1 로 유지"""
        a, _, _ = reduce_cubic(Polynomial((1, -3, 0, 1)))
        assert cmath.isclose(a, 1) or cmath.isclose(a, -1)

    def test_reduce_cubic_unicritical(self):
        """z³ − 1 은 축약 불가"""
        with pytest.raises(UnicriticalInput):
            reduce_cubic(Polynomial((-1, 0, 0, 1)))

    def test_normalize(self):
        """정규화 결과는 monic 이고 (d−1)차 계수 0"""
        q, T = normalize(Polynomial((3, 1, 6, 2)))
        assert q.leading == 1 and q.coeffs[2] == 0

    def test_roots_of_unity_exact_axes(self):
        """4차 단위근은 축 위의 정확한 값"""
        assert roots_of_unity(4) == [1, 1j, -1, -1j]


class TestParsers:
    """입력 문법 테스트"""

    @pytest.mark.parametrize("text, expected", [
        ("1.5", 1.5),
        ("-2i", -2j),
        ("0.5+0.7853981634i", 0.5 + 0.7853981634j),
        ("1-i", 1 - 1j),
        ("i", 1j),
        ("1e-3+2e1i", 0.001 + 20j),
    ])
    def test_parse_complex(self, text, expected):
        """복소수 리터럴"""
        assert parse_complex(text) == expected

    @pytest.mark.parametrize("text", ["", "abc", "1 + 2i", "1+2k"])
    def test_parse_complex_rejects(self, text):
        """잘못된 복소수 리터럴 거부"""
        with pytest.raises(PolynomialSyntaxError):
            parse_complex(text)

    def test_parse_coefficients(self):
        """오름차순 계수 목록"""
        assert parse_coefficients("-1,0,1").coeffs == (-1, 0, 1)

    def test_parse_coefficients_rejects_empty(self):
        """빈 항목 거부"""
        with pytest.raises(PolynomialSyntaxError):
            parse_coefficients("1,,2")

    def test_parse_factored(self):
        """'(1^1,-1^2);1' → (z−1)(z+1)²"""
        p = parse_factored("(1^1,-1^2);1")
        assert p.roots == ((1, 1), (-1, 2)) and p.leading == 1

    def test_parse_factored_default_leading(self):
        """최고차 계수 생략 시 1"""
        assert parse_factored("(0^2,1i)").leading == 1

    @pytest.mark.parametrize("text", ["1^1,-1^2", "(1^x)", "()", "(1,1)"])
    def test_parse_factored_rejects(self, text):
        """잘못된 인수분해 형식 거부 (겹친 근 포함)"""
        with pytest.raises(PolynomialSyntaxError):
            parse_factored(text)

"""
대표 다항식 생성 및 비수렴 삼차식 구성 모듈

주요 기능:
- two_root_rep / unicritical_rep / composite_rep / cubic_rep: h-수렴 클래스 대표형과 삼차 일매개변수족
- parse_family: "two_root:k,m", "unicritical:n", "composite:m,n", "cubic:a" 문법
- nonconvergent_cubic: 2-주기 초끌개(superattracting) 주기를 갖는 z³ − 3z + a 구성
- verify_superattracting_2cycle: 구성 내부와 독립적인 잔차 재계산
"""

import cmath
from dataclasses import dataclass, field
from typing import Optional

from .dynamics import NON_CONVERGENT, ConvergenceVerdict, classify_convergence
from .errors import InputError, InvalidParameter, PolynomialSyntaxError, VerificationFailure
from .logger import LoggerManager
from .newton_map import RelaxedNewtonMap, build_map, eval_map, is_infinity, map_derivative
from .poly_core import FactoredPolynomial, Polynomial, parse_complex, roots_of_unity
from .polyroot import factor_polynomial

logger = LoggerManager("Constructions")

# 구성 불변식 허용오차
CRITICAL_RTOL = 1e-10
FIXED_RTOL = 1e-10
MULTIPLIER_TOL = 1e-8
CLOSED_FORM_RTOL = 1e-10
# ξ ≈ 0 (h ≈ 1) 이면 a 의 식 ((h−3)ξ⁴+6ξ²+3(h−1))/(2hξ) 가 0/0 이 되어 닫힌 형태로 대체
XI_ZERO_TOL = 1e-12


def two_root_rep(k: int, m: int) -> FactoredPolynomial:
    """(z−1)ᵏ(z+1)ᵐ"""
    if k < 1 or m < 1:
        raise InvalidParameter(f"k, m 은 1 이상이어야 합니다: k={k}, m={m}")
    return FactoredPolynomial(1, ((1, k), (-1, m)))


def unicritical_rep(n: int) -> FactoredPolynomial:
    """zⁿ − 1"""
    if n < 2:
        raise InvalidParameter(f"n 은 2 이상이어야 합니다: n={n}")
    return FactoredPolynomial(1, tuple((w, 1) for w in roots_of_unity(n)))


def composite_rep(m: int, n: int) -> FactoredPolynomial:
    """zᵐ(zⁿ − 1)"""
    if m < 1 or n < 2:
        raise InvalidParameter(f"m ≥ 1, n ≥ 2 가 필요합니다: m={m}, n={n}")
    return FactoredPolynomial(1, ((0, m),) + tuple((w, 1) for w in roots_of_unity(n)))


def cubic_rep(a: complex) -> FactoredPolynomial:
    """z³ − 3z + a (a = ±2 이면 이중근)"""
    return factor_polynomial(Polynomial((complex(a), -3, 0, 1)))


def parse_family(text: str) -> FactoredPolynomial:
    name, _, args = text.strip().partition(":")
    try:
        if name == "cubic":
            return cubic_rep(parse_complex(args))
        values = [int(v) for v in args.split(",")] if args else []
        if name == "two_root" and len(values) == 2:
            return two_root_rep(*values)
        if name == "unicritical" and len(values) == 1:
            return unicritical_rep(*values)
        if name == "composite" and len(values) == 2:
            return composite_rep(*values)
    except InputError:
        raise
    except ValueError as e:
        raise PolynomialSyntaxError(f"클래스 매개변수 형식 오류: '{text}'") from e
    raise PolynomialSyntaxError(
        f"알 수 없는 클래스: '{text}' (two_root:k,m | unicritical:n | composite:m,n | cubic:a)"
    )


def critical_residual(h: complex, a: complex, z: complex) -> float:
    """(3−h)z⁴ − 6z² + 2ahz + 3(1−h), 항 크기 합으로 정규화"""
    terms = [(3 - h) * z ** 4, -6 * z ** 2, 2 * a * h * z, 3 * (1 - h)]
    return abs(sum(terms)) / max(1.0, sum(abs(t) for t in terms))


def second_iterate(h: complex, a: complex, z: complex) -> complex:
    """
    N²_{h,p}(z), p = z³ − 3z + a, Φ(z) = (3−h)z³ − 3(1−h)z − ah 를 통한 닫힌 형태:
        [(3−h)Φ³ − 27(1−h)Φ(z²−1)² − 27ah(z²−1)³] / [9(z²−1)(Φ² − 9(z²−1)²)]
    """
    phi = (3 - h) * z ** 3 - 3 * (1 - h) * z - a * h
    u = z * z - 1
    top = (3 - h) * phi ** 3 - 27 * (1 - h) * phi * u ** 2 - 27 * a * h * u ** 3
    bottom = 9 * u * (phi ** 2 - 9 * u ** 2)
    if bottom == 0:
        return complex(float("inf"), 0.0)
    return top / bottom


def two_periodic_sextic(h: complex, a: complex) -> Polynomial:
    """N²(z) − z 에서 p 인수를 제거하고 남은 6차 인수 (오름차순 계수)"""
    h = complex(h)
    a = complex(a)
    return Polynomial((
        a * a * h ** 3 - 3 * a * a * h ** 2 - 27 * h + 54,
        -(6 * a * h ** 3 - 27 * a * h ** 2 + 18 * a * h),
        9 * h ** 3 - 54 * h ** 2 + 135 * h - 162,
        2 * a * h ** 3 - 15 * a * h ** 2 + 18 * a * h,
        -(6 * h ** 3 - 54 * h ** 2 + 153 * h - 162),
        0,
        h ** 3 - 12 * h ** 2 + 45 * h - 54,
    ))


def closed_form_a(h: complex, sign: int) -> complex:
    """±2(h⁴−12h³+57h²−127h+108) / (h(h²−8h+13)√(h²−8h+13)), 주가지(principal branch) 제곱근"""
    disc = h * h - 8 * h + 13
    return sign * 2 * (h ** 4 - 12 * h ** 3 + 57 * h ** 2 - 127 * h + 108) / (h * disc * cmath.sqrt(disc))


def _newton_derivative(h: complex, a: complex, z: complex) -> complex:
    """N′(z) = [(3−h)z⁴ − 6z² + 2ahz + 3(1−h)] / [3(z²−1)²]"""
    return ((3 - h) * z ** 4 - 6 * z ** 2 + 2 * a * h * z + 3 * (1 - h)) / (3 * (z * z - 1) ** 2)


def _newton_step(h: complex, a: complex, z: complex) -> complex:
    """N(z) = [(3−h)z³ − 3(1−h)z − ah] / [3(z²−1)]"""
    return ((3 - h) * z ** 3 - 3 * (1 - h) * z - a * h) / (3 * (z * z - 1))


@dataclass(frozen=True)
class CycleReport:
    residual_fix: float
    residual_crit: float
    multiplier_mag: float
    residual_sextic: float

    def passes(self) -> bool:
        return (self.residual_fix < FIXED_RTOL and self.residual_crit < CRITICAL_RTOL
                and self.multiplier_mag < MULTIPLIER_TOL)

    def to_dict(self) -> dict:
        return {
            "residual_fix": self.residual_fix,
            "residual_crit": self.residual_crit,
            "multiplier_mag": self.multiplier_mag,
            "residual_sextic": self.residual_sextic,
        }


@dataclass(frozen=True)
class NonconvergentCubic:
    h: complex
    sign: int
    a: complex
    xi: complex
    partner: complex
    map: RelaxedNewtonMap = field(repr=False, compare=False)

    @property
    def polynomial(self) -> Polynomial:
        return Polynomial((self.a, -3, 0, 1))

    def to_dict(self) -> dict:
        return {
            "h": self.h,
            "sign": "+" if self.sign > 0 else "-",
            "a": self.a,
            "xi": self.xi,
            "partner": self.partner,
        }


def parse_sign(sign) -> int:
    if sign in (1, "+", "+1", "plus"):
        return 1
    if sign in (-1, "-", "-1", "minus"):
        return -1
    raise InvalidParameter(f"sign 은 '+' 또는 '-' 이어야 합니다: {sign!r}")


def verify_superattracting_2cycle(c: NonconvergentCubic) -> CycleReport:
    """
    구성 결과를 p 의 계수만으로 다시 검증합니다 (기약형/근 계산과 독립).

    - residual_fix: |N²(ξ) − ξ| (Φ 를 통한 닫힌 형태)
    - residual_crit: 임계점 방정식 잔차 (정규화)
    - multiplier_mag: |N′(ξ)·N′(N(ξ))|
    - residual_sextic: 6차 2-주기 방정식 잔차 (계수 크기로 정규화)
    """
    h, a, xi = c.h, c.a, c.xi
    image = second_iterate(h, a, xi)
    residual_fix = abs(image - xi) if not cmath.isinf(image) else float("inf")
    partner = _newton_step(h, a, xi)
    multiplier = _newton_derivative(h, a, xi) * _newton_derivative(h, a, partner)

    sextic = two_periodic_sextic(h, a)
    scale = sum(abs(coeff) * abs(xi) ** i for i, coeff in enumerate(sextic.coeffs))
    residual_sextic = abs(sextic(xi)) / max(1.0, scale)
    return CycleReport(residual_fix, critical_residual(h, a, xi), abs(multiplier), residual_sextic)


def nonconvergent_cubic(h: complex, sign=1) -> NonconvergentCubic:
    """
    h (|h−1| < 1) 에 대해 N_{h,p}, p = z³ − 3z + a 가 2-주기 초끌개 주기 {ξ, N(ξ)} 를 갖도록 a 를 구성합니다.
    ξ = sign·(h−1)/√(h²−8h+13) 이고 a 는 임계점 방정식에서 구하며 닫힌 형태와 교차 검증합니다.

    Raises:
        InvalidParameter: |h−1| ≥ 1, h = 0, 또는 h² − 8h + 13 = 0
        VerificationFailure: 불변식이 허용오차를 넘는 경우 (구성 결과를 반환하지 않음)
    """
    h = complex(h)
    sign = parse_sign(sign)
    logger.log_function_start("nonconvergent_cubic", h=h, sign="+" if sign > 0 else "-")
    disc = h * h - 8 * h + 13
    if h == 0 or abs(h - 1) >= 1 or disc == 0:
        raise InvalidParameter(f"h={h} 는 |h−1| < 1, h ≠ 0, h²−8h+13 ≠ 0 을 만족해야 합니다.")

    xi = sign * (h - 1) / cmath.sqrt(disc)
    closed = closed_form_a(h, sign)
    if abs(xi) <= XI_ZERO_TOL:
        a = closed
    else:
        a = ((h - 3) * xi ** 4 + 6 * xi ** 2 + 3 * (h - 1)) / (2 * h * xi)
        if abs(a - closed) > CLOSED_FORM_RTOL * max(1.0, abs(a)):
            raise VerificationFailure(f"a 의 두 계산값이 다릅니다: {a} vs 닫힌 형태 {closed}")

    if min(abs(a - 2), abs(a + 2)) <= 1e-9:
        raise VerificationFailure(f"a={a} 가 ±2 입니다 (중근 삼차식).")

    N = build_map(cubic_rep(a), h)
    partner = eval_map(N, xi)
    if is_infinity(partner):
        raise VerificationFailure("ξ 가 극점입니다.")
    back = eval_map(N, partner)
    multiplier = map_derivative(N, xi) * map_derivative(N, partner)
    polynomial_value = abs(a + xi ** 3 - 3 * xi)

    problems = []
    if critical_residual(h, a, xi) >= CRITICAL_RTOL:
        problems.append(f"임계점 잔차 {critical_residual(h, a, xi):.3e}")
    if is_infinity(back) or abs(back - xi) >= FIXED_RTOL * max(1.0, abs(xi)):
        problems.append(f"|N²(ξ) − ξ| = {abs(back - xi):.3e}")
    if abs(multiplier) >= MULTIPLIER_TOL:
        problems.append(f"|(N²)′(ξ)| = {abs(multiplier):.3e}")
    if polynomial_value <= 1e-12:
        problems.append("ξ 가 p 의 근입니다")
    if problems:
        logger.log_error_with_icon("비수렴 삼차식 검증 실패: " + ", ".join(problems))
        raise VerificationFailure("비수렴 삼차식 검증 실패: " + ", ".join(problems))

    result = NonconvergentCubic(h=h, sign=sign, a=a, xi=xi, partner=partner, map=N)
    logger.log_function_end("nonconvergent_cubic", f"a={a}, xi={xi}, partner={partner}")
    return result


def construction_report(c: NonconvergentCubic, budget: int = 2000,
                        verdict: Optional[ConvergenceVerdict] = None) -> dict:
    """CLI JSON: {h, sign, a, xi, partner, residuals, verdict}"""
    report = verify_superattracting_2cycle(c)
    verdict = verdict or classify_convergence(c.map, budget)
    if verdict.status != NON_CONVERGENT:
        logger.log_warning_with_icon(f"구성된 사상의 판정이 {verdict.status} 입니다.")
    data = c.to_dict()
    data["residuals"] = report.to_dict()
    data["verdict"] = verdict.to_dict()
    return data

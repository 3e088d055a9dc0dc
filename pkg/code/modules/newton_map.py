"""
완화 뉴턴 사상 모듈

주요 기능:
- N_{h,p}(z) = z − h·p(z)/p′(z) 의 기약 유리식(num/den) 생성
- 고정점, 승수(multiplier), 잔류 고정점 지표(residue index), 임계점 분석
- N_{h,p} = N_{nh,pⁿ} 항등식 수치 검증, Scaling property 결함 측정
- 이차/일반 특성화 보조정리 (승수 자료 → (h, p) 재구성)
- Möbius 변환

기약형은 인수분해형 p 에서 (z−r)^{m−1} 인수를 해석적으로 약분하여 만듭니다.
p = L·Π(z−rᵢ)^{mᵢ} 이면 q = Π(z−rᵢ), s = Σ mᵢ·Π_{j≠i}(z−rⱼ) 에 대해
    num = z·s − h·q,  den = s.
"""

import cmath
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, List, Optional, Sequence, Tuple

import numpy as np
from numpy.polynomial import polynomial as npoly

from .errors import (
    DegenerateInput,
    InvalidParameter,
    NonIntegerMultiplicity,
    NotRealizable,
    ParabolicFixedPoint,
    PoleInput,
    VerificationFailure,
)
from .logger import LoggerManager
from .poly_core import (
    AffineMap,
    FactoredPolynomial,
    Polynomial,
    derivative,
    eval_poly,
    expand,
    roots_of_unity,
)
from .polyroot import all_roots, quadratic_roots

logger = LoggerManager("NewtonMap")

INFINITY = complex(math.inf, 0.0)
# |den(z)| ≤ POLE_RTOL·Σ|cᵢ||z|ⁱ 이면 극점으로 간주
POLE_RTOL = 1e-13
SUPERATTRACTING_TOL = 1e-12
INDIFFERENT_TOL = 1e-12
INTEGER_TOL = 1e-6
# 닫힌 형태 클래스 인식 허용오차
CLASS_TOL = 1e-12

SUPERATTRACTING = "superattracting"
ATTRACTING = "attracting"
REPELLING = "repelling"
INDIFFERENT = "indifferent"


def is_infinity(z) -> bool:
    return cmath.isinf(complex(z))


def in_admissible_disk(h: complex, m: int) -> bool:
    """h ∈ D_m(m) = {z : |z − m| < m}"""
    return abs(complex(h) - m) < m


def classify_multiplier(multiplier: complex) -> str:
    magnitude = abs(multiplier)
    if magnitude <= SUPERATTRACTING_TOL:
        return SUPERATTRACTING
    if abs(magnitude - 1) <= INDIFFERENT_TOL:
        return INDIFFERENT
    return ATTRACTING if magnitude < 1 else REPELLING


@dataclass(frozen=True)
class RelaxedNewtonMap:
    h: complex
    p: FactoredPolynomial
    num: Polynomial
    den: Polynomial
    reduced_degree: int
    num_prime: Polynomial = field(init=False, repr=False, compare=False)
    den_prime: Polynomial = field(init=False, repr=False, compare=False)
    den_abs: Polynomial = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "num_prime", derivative(self.num))
        object.__setattr__(self, "den_prime", derivative(self.den))
        object.__setattr__(self, "den_abs", Polynomial.from_array(np.abs(self.den.as_array())))

    @property
    def roots(self) -> List[complex]:
        return self.p.distinct_roots

    @property
    def degree(self) -> int:
        """d = deg(p)"""
        return self.p.degree

    def __call__(self, z):
        return eval_map(self, z)

    def derivative(self, z) -> complex:
        return map_derivative(self, z)

    def to_dict(self) -> dict:
        return {
            "h": self.h,
            "p": self.p.to_dict(),
            "num": list(self.num.coeffs),
            "den": list(self.den.coeffs),
            "reduced_degree": self.reduced_degree,
        }


@dataclass(frozen=True)
class FixedPointRecord:
    location: complex
    multiplier: complex
    multiplicity_of_root: Optional[int]
    classification: str
    residue_index: complex

    @property
    def at_infinity(self) -> bool:
        return is_infinity(self.location)

    def to_dict(self) -> dict:
        return {
            "location": self.location,
            "multiplier": self.multiplier,
            "multiplicity": self.multiplicity_of_root,
            "class": self.classification,
            "index": self.residue_index,
        }


@dataclass(frozen=True)
class MobiusMap:
    """z ↦ (az + b)/(cz + d), ad − bc ≠ 0"""
    a: complex
    b: complex
    c: complex
    d: complex

    def __post_init__(self):
        for name in ("a", "b", "c", "d"):
            object.__setattr__(self, name, complex(getattr(self, name)))
        if self.a * self.d - self.b * self.c == 0:
            raise InvalidParameter("Möbius 변환의 행렬식이 0입니다.")

    @classmethod
    def identity(cls) -> "MobiusMap":
        return cls(1, 0, 0, 1)

    @classmethod
    def sending_to_infinity(cls, beta: complex) -> "MobiusMap":
        """φ(z) = 1/(z − β), φ(β) = ∞"""
        return cls(0, 1, 1, -complex(beta))

    @property
    def is_identity(self) -> bool:
        return self.b == 0 and self.c == 0 and self.a == self.d

    def __call__(self, z) -> complex:
        if is_infinity(z):
            return self.a / self.c if self.c != 0 else INFINITY
        denominator = self.c * z + self.d
        if denominator == 0:
            return INFINITY
        return (self.a * z + self.b) / denominator

    def compose(self, other: "MobiusMap") -> "MobiusMap":
        """self ∘ other"""
        return MobiusMap(
            self.a * other.a + self.b * other.c,
            self.a * other.b + self.b * other.d,
            self.c * other.a + self.d * other.c,
            self.c * other.b + self.d * other.d,
        )

    def inverse(self) -> "MobiusMap":
        return MobiusMap(self.d, -self.b, -self.c, self.a)

    def to_dict(self) -> dict:
        return {"a": self.a, "b": self.b, "c": self.c, "d": self.d}


def build_map(p: FactoredPolynomial, h: complex) -> RelaxedNewtonMap:
    """
    N_{h,p} 의 기약형을 생성합니다.

    Raises:
        DegenerateInput: p 가 선형이거나 단항식 (N_{h,p} 가 선형)
        InvalidParameter: h = 0
    """
    h = complex(h)
    logger.log_function_start("build_map", degree=p.degree, distinct=len(p.roots), h=h)
    if h == 0:
        raise InvalidParameter("완화 매개변수 h 는 0이 될 수 없습니다.")
    if p.degree <= 1 or len(p.roots) < 2:
        raise DegenerateInput("서로 다른 근이 2개 이상인 다항식이 필요합니다 (선형/단항식이면 N_{h,p} 는 선형).")

    roots = p.distinct_roots
    q = npoly.polyfromroots(roots)
    s = np.zeros(len(roots), dtype=complex)
    for i, (_, mult) in enumerate(p.roots):
        s = npoly.polyadd(s, mult * npoly.polyfromroots(roots[:i] + roots[i + 1:]))
    num = npoly.polysub(npoly.polymul([0, 1], s), h * q)

    N = RelaxedNewtonMap(
        h=h,
        p=p,
        num=Polynomial.from_array(num).snapped(),
        den=Polynomial.from_array(s).snapped(),
        reduced_degree=len(roots),
    )

    m = p.min_multiplicity
    if not in_admissible_disk(h, m):
        logger.log_warning_with_icon(f"h={h} 가 D_{m}({m}) 밖에 있습니다 (근이 끌개 고정점이 아닐 수 있음)")
    logger.log_function_end("build_map", f"reduced_degree={N.reduced_degree}")
    return N


def eval_map(N: RelaxedNewtonMap, z) -> complex:
    """확장 복소평면 위의 N(z). 극점과 ∞ 는 ∞ 로 보냅니다."""
    if is_infinity(z):
        return INFINITY
    den = eval_poly(N.den, z)
    if abs(den) <= POLE_RTOL * eval_poly(N.den_abs, abs(z)).real:
        return INFINITY
    value = complex(eval_poly(N.num, z) / den)
    return value if not cmath.isinf(value) and not cmath.isnan(value) else INFINITY


def map_derivative(N: RelaxedNewtonMap, z: complex) -> complex:
    """N′(z) = (num′·den − num·den′)/den²"""
    den = eval_poly(N.den, z)
    if abs(den) <= POLE_RTOL * eval_poly(N.den_abs, abs(z)).real:
        raise PoleInput(f"z={z} 는 N_{{h,p}} 의 극점입니다.")
    top = eval_poly(N.num_prime, z) * den - eval_poly(N.num, z) * eval_poly(N.den_prime, z)
    return complex(top / (den * den))


def contour_derivative(f: Callable[[complex], complex], z0: complex,
                       radius: float, nodes: int = 32) -> complex:
    """원 위 사다리꼴 규칙으로 계산한 해석함수의 도함수 (Cauchy 적분)"""
    theta = 2 * np.pi * np.arange(nodes) / nodes
    units = np.exp(1j * theta)
    values = np.array([f(z0 + radius * u) for u in units], dtype=complex)
    return complex(np.mean(values / units) / radius)


def infinity_multiplier_numeric(N: RelaxedNewtonMap, step: Optional[float] = None) -> complex:
    """w ↦ 1/N(1/w) 의 0 에서의 수치 도함수 (∞ 의 승수)"""
    lead = N.num.leading
    bound = 1 + max(abs(c / lead) for c in N.num.coeffs[:-1])
    radius = step if step is not None else 0.25 / bound

    def chart(w: complex) -> complex:
        value = eval_map(N, 1 / w)
        return 0j if is_infinity(value) else 1 / value

    return contour_derivative(chart, 0j, radius)


def fixed_points(N: RelaxedNewtonMap) -> List[FixedPointRecord]:
    """근마다 승수 1−h/m, ∞ 는 d/(d−h). h = d 이면 ∞ 는 고정점이 아니므로 제외합니다."""
    h = N.h
    records = []
    for root, mult in N.p.roots:
        multiplier = 1 - h / mult
        records.append(FixedPointRecord(root, multiplier, mult, classify_multiplier(multiplier), mult / h))

    d = N.degree
    if abs(d - h) > CLASS_TOL:
        multiplier = d / (d - h)
        records.append(FixedPointRecord(INFINITY, multiplier, None, classify_multiplier(multiplier), (h - d) / h))
    return records


def residue_index_sum(N: RelaxedNewtonMap) -> complex:
    records = fixed_points(N)
    for record in records:
        if abs(record.multiplier - 1) <= CLASS_TOL:
            raise ParabolicFixedPoint(f"고정점 {record.location} 의 승수가 1입니다.")
    return sum((r.residue_index for r in records), 0j)


def critical_equation(N: RelaxedNewtonMap) -> Polynomial:
    """(1−h)(p′)² + h·p·p″ (기약 전)"""
    p = expand(N.p)
    dp = derivative(p)
    ddp = derivative(dp)
    return dp * dp * (1 - N.h) + p * ddp * N.h


def _critical_numerator(N: RelaxedNewtonMap) -> Polynomial:
    """기약 사상의 num′·den − num·den′"""
    return N.num_prime * N.den - N.num * N.den_prime


def recognize_class(p: FactoredPolynomial) -> Tuple[str, Tuple[int, ...]]:
    """
    닫힌 형태 임계점 공식을 쓸 수 있는 대표형인지 판별합니다.

    Returns:
        ("two_root", ()), ("unicritical", (n,)), ("composite", (m, n)) 또는 ("general", ())
    """
    k = len(p.roots)
    if k == 2:
        return "two_root", ()

    def matches_unity(points: Sequence[complex], n: int) -> bool:
        unity = roots_of_unity(n)
        return all(min(abs(z - w) for w in unity) <= CLASS_TOL for z in points)

    if k >= 3 and all(m == 1 for m in p.multiplicities) and matches_unity(p.distinct_roots, k):
        return "unicritical", (k,)

    at_zero = [(r, m) for r, m in p.roots if abs(r) <= CLASS_TOL]
    others = [(r, m) for r, m in p.roots if abs(r) > CLASS_TOL]
    if len(at_zero) == 1 and len(others) >= 2 and all(m == 1 for _, m in others):
        n = len(others)
        if matches_unity([r for r, _ in others], n):
            return "composite", (at_zero[0][1], n)
    return "general", ()


def _nth_roots(w: complex, n: int) -> List[complex]:
    if w == 0:
        return [0j] * n
    base = cmath.exp(cmath.log(w) / n)
    return [base * u for u in roots_of_unity(n)]


def critical_points(N: RelaxedNewtonMap, method: str = "auto") -> List[complex]:
    """
    N_{h,p} 의 임계점 (중복 포함, 개수 2·reduced_degree − 2).

    Args:
        method: "auto" 는 인식된 클래스의 닫힌 형태를 사용, "general" 은 항상 근 계산
    """
    h = N.h
    kind, params = recognize_class(N.p) if method == "auto" else ("general", ())

    if kind == "two_root":
        C, B, A = N.num.coeffs + (0j,) * (3 - len(N.num.coeffs))
        E, D = N.den.coeffs + (0j,) * (2 - len(N.den.coeffs))
        if abs(A * D) > CLASS_TOL:
            return quadratic_roots(A * D, 2 * A * E, B * E - C * D)
    elif kind == "unicritical":
        (n,) = params
        if abs(n - h) > CLASS_TOL:
            return [0j] * (n - 2) + _nth_roots(h * (n - 1) / (n - h), n)
    elif kind == "composite":
        m, n = params
        A = (m + n) * (m + n - h)
        B = 2 * (m * m + m * n - m * h) + n * n * h - n * h
        C = m * (m - h)
        if abs(A) > CLASS_TOL:
            points = []
            for w in quadratic_roots(A, -B, C):
                points.extend(_nth_roots(w, n))
            return points

    return all_roots(_critical_numerator(N))


def map_difference(first: RelaxedNewtonMap, second: RelaxedNewtonMap) -> float:
    """분모 최고차 계수로 정규화한 두 기약형의 최대 계수 차이"""
    def normalized(N: RelaxedNewtonMap):
        lead = N.den.leading
        return N.num.as_array() / lead, N.den.as_array() / lead

    num1, den1 = normalized(first)
    num2, den2 = normalized(second)
    return float(max(np.max(np.abs(npoly.polysub(num1, num2))), np.max(np.abs(npoly.polysub(den1, den2)))))


def equal_power_check(p: FactoredPolynomial, h: complex, n: int) -> float:
    """N_{h,p} 와 N_{nh,pⁿ} 의 최대 계수 차이"""
    return map_difference(build_map(p, h), build_map(p.power(n), n * complex(h)))


def equal_multiplicity_reduction(p: FactoredPolynomial, h: complex) -> Tuple[FactoredPolynomial, float]:
    """
    모든 근의 중복도가 m 으로 같으면 p = c·qᵐ 이고 N_{h,p} = N_{h/m,q} 입니다.
    h = m 이면 N_{h,p} 는 q 의 고전 뉴턴 사상입니다.

    Returns:
        (q, 최대 계수 차이)
    """
    mults = set(p.multiplicities)
    if len(mults) != 1:
        raise InvalidParameter(f"모든 근의 중복도가 같아야 합니다: {sorted(mults)}")
    (m,) = mults
    q = FactoredPolynomial(1, tuple((r, 1) for r in p.distinct_roots))
    return q, map_difference(build_map(p, h), build_map(q, complex(h) / m))


def scaling_defect(p: FactoredPolynomial, T: AffineMap, lam: complex, h: complex,
                   points: Sequence[complex]) -> float:
    """
    g = λ(p∘T) 에 대해 max |T(N_{h,g}(z)) − N_{h,p}(T(z))| / max(1, |N_{h,p}(T(z))|).
    극점에 걸린 점은 건너뜁니다.
    """
    Np = build_map(p, h)
    Ng = build_map(p.affine_pullback(T, lam), h)
    worst = 0.0
    for z in points:
        expected = eval_map(Np, T(z))
        image = eval_map(Ng, z)
        if is_infinity(expected) or is_infinity(image):
            continue
        worst = max(worst, abs(T(image) - expected) / max(1.0, abs(expected)))
    return worst


# ----------------------------------------------------------------------
# 특성화 보조정리
# ----------------------------------------------------------------------
EQUAL_MULTIPLIERS = "equal_multipliers"
SUPERATTRACTING_PAIR = "superattracting"
INDEX_RATIO = "index_ratio"


@dataclass(frozen=True)
class QuadraticData:
    """
    이차 사상의 두 끌개 고정점 자료.

    case:
        equal_multipliers - value = 공통 승수 λ
        superattracting   - value = 다른 끌개 고정점의 승수 n/m
        index_ratio       - value = 잔류 지표 비 ι(1)/ι(−1) = k/m
    multipliers: index_ratio 에서 실제 승수 (λ₁, λ₂) 를 알면 h 가 확정됩니다.
    """
    case: str
    value: complex
    multipliers: Optional[Tuple[complex, complex]] = None


@dataclass(frozen=True)
class QuadraticCharacterization:
    h: complex
    k: int
    m: int
    case: str
    free_scale: bool = False

    @property
    def polynomial(self) -> FactoredPolynomial:
        """(z−1)ᵏ(z+1)ᵐ"""
        return FactoredPolynomial(1, ((1, self.k), (-1, self.m)))

    def to_dict(self) -> dict:
        return {"h": self.h, "k": self.k, "m": self.m, "case": self.case, "free_scale": self.free_scale}


def _as_positive_fraction(value: complex, max_denominator: int = 1000) -> Optional[Fraction]:
    value = complex(value)
    if abs(value.imag) > 1e-9 or value.real <= 0:
        return None
    fraction = Fraction(value.real).limit_denominator(max_denominator)
    if abs(float(fraction) - value.real) > 1e-9:
        return None
    return fraction


def quadratic_data_from_multipliers(lambda1: complex, lambda2: complex) -> QuadraticData:
    """두 끌개 승수로부터 이차 특성화 보조정리의 경우를 고릅니다 (λ₁ 은 z=1, λ₂ 는 z=−1)."""
    lambda1, lambda2 = complex(lambda1), complex(lambda2)
    if abs(lambda1 - lambda2) <= SUPERATTRACTING_TOL:
        return QuadraticData(EQUAL_MULTIPLIERS, lambda1)
    if abs(lambda1) <= SUPERATTRACTING_TOL:
        return QuadraticData(SUPERATTRACTING_PAIR, lambda2)
    if abs(lambda2) <= SUPERATTRACTING_TOL:
        return QuadraticData(SUPERATTRACTING_PAIR, lambda1)
    return QuadraticData(INDEX_RATIO, (1 - lambda2) / (1 - lambda1), (lambda1, lambda2))


def characterize_quadratic(data: QuadraticData) -> QuadraticCharacterization:
    """
    두 끌개 + 한 척력 고정점을 갖는 이차 사상과 켤레인 N_{h,p}, p = (z−1)ᵏ(z+1)ᵐ 을 찾습니다.

    Raises:
        NotRealizable: 자료가 보조정리의 어느 경우에도 맞지 않음
    """
    logger.log_function_start("characterize_quadratic", case=data.case, value=data.value)
    value = complex(data.value)

    if data.case == EQUAL_MULTIPLIERS:
        if abs(value) >= 1:
            raise NotRealizable(f"승수 {value} 는 끌개가 아닙니다.")
        result = QuadraticCharacterization(1 - value, 1, 1, data.case)

    elif data.case == SUPERATTRACTING_PAIR:
        ratio = _as_positive_fraction(value)
        if ratio is None or ratio >= 1:
            raise NotRealizable(f"다른 승수 {value} 가 (0,1) 안의 유리수 n/m 이 아닙니다.")
        n, m = ratio.numerator, ratio.denominator
        result = QuadraticCharacterization(complex(m - n), m - n, m, data.case)

    elif data.case == INDEX_RATIO:
        ratio = _as_positive_fraction(value)
        if ratio is None:
            raise NotRealizable(f"지표 비 {value} 가 양의 유리수 k/m 이 아닙니다.")
        k, m = ratio.numerator, ratio.denominator
        if data.multipliers is not None:
            lambda1, lambda2 = (complex(v) for v in data.multipliers)
            if abs(lambda1) >= 1 or abs(lambda2) >= 1:
                raise NotRealizable("두 고정점이 모두 끌개여야 합니다.")
            result = QuadraticCharacterization(k * (1 - lambda1), k, m, data.case)
        else:
            # h = 1/c 는 c 만큼의 자유도를 가지며 c = 1 대표를 반환
            result = QuadraticCharacterization(1 + 0j, k, m, data.case, free_scale=True)
    else:
        raise NotRealizable(f"알 수 없는 경우: {data.case}")

    logger.log_function_end("characterize_quadratic", result.to_dict())
    return result


@dataclass(frozen=True)
class Reconstruction:
    phi: MobiusMap
    p: FactoredPolynomial
    multiplier_error: float

    def to_dict(self) -> dict:
        return {"phi": self.phi.to_dict(), "p": self.p.to_dict(), "multiplier_error": self.multiplier_error}


def reconstruct_general(fps: Sequence[Tuple[complex, complex]], repelling: complex,
                        h: complex) -> Reconstruction:
    """
    하나의 척력 고정점을 제외한 모든 고정점이 끌개인 사상에서 φ 와 p = Π(z − φ(αᵢ))^{mᵢ} 를 복원합니다.
    mᵢ = h/(1−μᵢ) 는 양의 정수에서 INTEGER_TOL 이내여야 합니다.

    Raises:
        NonIntegerMultiplicity: mᵢ 가 양의 정수가 아님
        VerificationFailure: 재구성한 N_{h,p} 가 입력 승수를 재현하지 못함
    """
    h = complex(h)
    logger.log_function_start("reconstruct_general", fixed_points=len(fps), repelling=repelling, h=h)
    if h == 0:
        raise InvalidParameter("완화 매개변수 h 는 0이 될 수 없습니다.")
    phi = MobiusMap.identity() if is_infinity(repelling) else MobiusMap.sending_to_infinity(repelling)

    roots = []
    expected = []
    for location, multiplier in fps:
        location, multiplier = complex(location), complex(multiplier)
        if not is_infinity(repelling) and abs(location - repelling) <= INTEGER_TOL:
            raise InvalidParameter(f"끌개 고정점 {location} 가 척력 고정점과 겹칩니다.")
        if abs(1 - multiplier) <= CLASS_TOL:
            raise ParabolicFixedPoint(f"고정점 {location} 의 승수가 1입니다.")
        ratio = h / (1 - multiplier)
        mult = round(ratio.real)
        if mult < 1 or abs(ratio - mult) > INTEGER_TOL:
            raise NonIntegerMultiplicity(ratio, location)
        roots.append((phi(location), mult))
        expected.append((phi(location), multiplier, abs(h) * abs(ratio - mult) / (abs(ratio) * mult)))

    p = FactoredPolynomial(1, tuple(roots))
    records = [r for r in fixed_points(build_map(p, h)) if not r.at_infinity]
    error = 0.0
    for location, multiplier, slack in expected:
        record = min(records, key=lambda r: abs(r.location - location))
        deviation = abs(record.multiplier - multiplier)
        if abs(record.location - location) > 1e-9 or deviation > 1e-8 + slack:
            raise VerificationFailure(f"재구성 검증 실패: 고정점 {location} 의 승수 차이 {deviation:.3e}")
        error = max(error, deviation)

    result = Reconstruction(phi, p, error)
    logger.log_function_end("reconstruct_general", f"multiplicities={p.multiplicities}")
    return result


def map_report(N: RelaxedNewtonMap) -> dict:
    """고정점/승수/지표/임계점 JSON 조각"""
    records = fixed_points(N)
    roots = [r for r in records if not r.at_infinity]
    infinity = next((r for r in records if r.at_infinity), None)
    try:
        index_sum = residue_index_sum(N)
    except ParabolicFixedPoint:
        index_sum = None
    return {
        "h": N.h,
        "roots": [
            {
                "value": r.location,
                "multiplicity": r.multiplicity_of_root,
                "multiplier": r.multiplier,
                "class": r.classification,
                "index": r.residue_index,
            }
            for r in roots
        ],
        "infinity": (
            {"multiplier": infinity.multiplier, "class": infinity.classification, "index": infinity.residue_index}
            if infinity is not None else None
        ),
        "critical_points": critical_points(N),
        "reduced_degree": N.reduced_degree,
        "index_sum": index_sum,
    }

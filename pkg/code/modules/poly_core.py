"""
다항식 코어 모듈

주요 기능:
- Polynomial: 오름차순 복소 계수의 밀집(dense) 다항식
- FactoredPolynomial: 서로 다른 근 + 양의 정수 중복도 (p의 기준 표현)
- AffineMap: z ↦ a·z + b, Scaling property 계산용 아핀 변환
- eval_poly / derivative / expand / power / affine_conjugate / reduce_cubic / normalize
- CLI 문법 파서: parse_complex, parse_coefficients, parse_factored

계수 연산은 numpy.polynomial.polynomial 을 사용합니다.
"""

import cmath
import math
import re
from dataclasses import dataclass, field
from typing import Iterable, List, Sequence, Tuple, Union

import numpy as np
from numpy.polynomial import polynomial as npoly

from .errors import InvalidParameter, PolynomialSyntaxError, UnicriticalInput

# 서로 다른 근으로 인정하는 최소 거리
MERGE_RADIUS = 1e-9
# 계수 비교 상대 허용오차 (최대 계수 크기 기준)
COEFF_RTOL = 1e-12

Number = Union[int, float, complex]


def _as_complex_tuple(values: Iterable[Number]) -> Tuple[complex, ...]:
    return tuple(complex(v) for v in values)


@dataclass(frozen=True)
class Polynomial:
    """오름차순 계수 다항식. 끝의 0 계수는 생성 시 제거됩니다 (영다항식은 (0,))."""
    coeffs: Tuple[complex, ...]

    def __post_init__(self):
        coeffs = list(_as_complex_tuple(self.coeffs)) or [0j]
        while len(coeffs) > 1 and coeffs[-1] == 0:
            coeffs.pop()
        object.__setattr__(self, "coeffs", tuple(coeffs))

    @classmethod
    def from_array(cls, array) -> "Polynomial":
        return cls(tuple(np.asarray(array, dtype=complex).tolist()))

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    @property
    def leading(self) -> complex:
        return self.coeffs[-1]

    @property
    def is_zero(self) -> bool:
        return len(self.coeffs) == 1 and self.coeffs[0] == 0

    def as_array(self) -> np.ndarray:
        return np.asarray(self.coeffs, dtype=complex)

    def max_abs(self) -> float:
        return float(np.max(np.abs(self.as_array())))

    def scale(self, factor: Number) -> "Polynomial":
        return Polynomial.from_array(self.as_array() * complex(factor))

    def __call__(self, z):
        return eval_poly(self, z)

    def __add__(self, other: "Polynomial") -> "Polynomial":
        return Polynomial.from_array(npoly.polyadd(self.as_array(), other.as_array()))

    def __sub__(self, other: "Polynomial") -> "Polynomial":
        return Polynomial.from_array(npoly.polysub(self.as_array(), other.as_array()))

    def __mul__(self, other):
        if isinstance(other, Polynomial):
            return Polynomial.from_array(npoly.polymul(self.as_array(), other.as_array()))
        return self.scale(other)

    __rmul__ = __mul__

    def __neg__(self) -> "Polynomial":
        return self.scale(-1)

    def snapped(self, rtol: float = 1e-13) -> "Polynomial":
        """최대 계수 대비 rtol 이하인 실수부/허수부를 0으로 정리"""
        arr = self.as_array()
        threshold = rtol * float(np.max(np.abs(arr)))
        re_part = np.where(np.abs(arr.real) <= threshold, 0.0, arr.real)
        im_part = np.where(np.abs(arr.imag) <= threshold, 0.0, arr.imag)
        return Polynomial.from_array(re_part + 1j * im_part)

    def to_dict(self) -> dict:
        return {"coeffs": list(self.coeffs), "degree": self.degree}


@dataclass(frozen=True)
class AffineMap:
    """z ↦ a·z + b"""
    a: complex = 1 + 0j
    b: complex = 0j

    def __post_init__(self):
        object.__setattr__(self, "a", complex(self.a))
        object.__setattr__(self, "b", complex(self.b))
        if self.a == 0:
            raise InvalidParameter("아핀 변환의 scale a 는 0이 될 수 없습니다.")

    @classmethod
    def identity(cls) -> "AffineMap":
        return cls(1, 0)

    def __call__(self, z):
        return self.a * z + self.b

    def compose(self, other: "AffineMap") -> "AffineMap":
        """self ∘ other"""
        return AffineMap(self.a * other.a, self.a * other.b + self.b)

    def inverse(self) -> "AffineMap":
        return AffineMap(1 / self.a, -self.b / self.a)

    def as_polynomial(self) -> Polynomial:
        return Polynomial((self.b, self.a))

    def to_dict(self) -> dict:
        return {"a": self.a, "b": self.b}


@dataclass(frozen=True)
class FactoredPolynomial:
    """leading · Π (z − rᵢ)^{mᵢ}. 근은 서로 MERGE_RADIUS 보다 멀리 떨어져 있어야 합니다."""
    leading: complex
    roots: Tuple[Tuple[complex, int], ...] = field(default_factory=tuple)

    def __post_init__(self):
        leading = complex(self.leading)
        if leading == 0:
            raise InvalidParameter("최고차 계수는 0이 될 수 없습니다.")
        roots = []
        for root, mult in self.roots:
            if int(mult) != mult or mult < 1:
                raise InvalidParameter(f"중복도는 양의 정수여야 합니다: {mult}")
            roots.append((complex(root), int(mult)))
        for i, (ri, _) in enumerate(roots):
            for rj, _ in roots[i + 1:]:
                if abs(ri - rj) <= MERGE_RADIUS:
                    raise InvalidParameter(f"근 {ri} 와 {rj} 가 병합 반경 {MERGE_RADIUS} 이내입니다.")
        object.__setattr__(self, "leading", leading)
        object.__setattr__(self, "roots", tuple(roots))

    @property
    def degree(self) -> int:
        return sum(m for _, m in self.roots)

    @property
    def distinct_roots(self) -> List[complex]:
        return [r for r, _ in self.roots]

    @property
    def multiplicities(self) -> List[int]:
        return [m for _, m in self.roots]

    @property
    def min_multiplicity(self) -> int:
        return min(self.multiplicities)

    def expand(self) -> Polynomial:
        return expand(self)

    def __call__(self, z):
        value = self.leading
        for root, mult in self.roots:
            value = value * (z - root) ** mult
        return value

    def power(self, n: int) -> "FactoredPolynomial":
        """pⁿ: 근은 같고 중복도만 n배"""
        if n < 1:
            raise InvalidParameter(f"거듭제곱 지수는 양의 정수여야 합니다: {n}")
        return FactoredPolynomial(self.leading ** n, tuple((r, m * n) for r, m in self.roots))

    def affine_pullback(self, T: AffineMap, lam: Number = 1) -> "FactoredPolynomial":
        """g = λ·(p∘T) 의 인수분해형. 근 T⁻¹(rᵢ), 최고차 계수 λ·lead·aᵈ"""
        inv = T.inverse()
        leading = complex(lam) * self.leading * T.a ** self.degree
        return FactoredPolynomial(leading, tuple((inv(r), m) for r, m in self.roots))

    def to_dict(self) -> dict:
        return {
            "leading": self.leading,
            "roots": [{"value": r, "multiplicity": m} for r, m in self.roots],
        }


def eval_poly(p: Polynomial, z):
    """Horner 평가. 배열 입력은 numpy polyval 로 처리"""
    if isinstance(z, np.ndarray):
        return npoly.polyval(z, p.as_array())
    value = 0j
    for c in reversed(p.coeffs):
        value = value * z + c
    return value


def derivative(p: Polynomial) -> Polynomial:
    if p.degree == 0:
        return Polynomial((0j,))
    return Polynomial.from_array(npoly.polyder(p.as_array()))


def expand(f: FactoredPolynomial) -> Polynomial:
    flat = [r for r, m in f.roots for _ in range(m)]
    if not flat:
        return Polynomial((f.leading,))
    return Polynomial.from_array(npoly.polyfromroots(flat) * f.leading)


def power(p: Polynomial, n: int) -> Polynomial:
    if n < 1:
        raise InvalidParameter(f"거듭제곱 지수는 양의 정수여야 합니다: {n}")
    return Polynomial.from_array(npoly.polypow(p.as_array(), n))


def compose_affine(p: Polynomial, T: AffineMap) -> Polynomial:
    """p∘T (Horner 방식의 다항식 합성)"""
    inner = T.as_polynomial().as_array()
    result = np.array([p.coeffs[-1]], dtype=complex)
    for c in reversed(p.coeffs[:-1]):
        result = npoly.polyadd(npoly.polymul(result, inner), [c])
    return Polynomial.from_array(result)


def affine_conjugate(p: Polynomial, T: AffineMap, lam: Number) -> Polynomial:
    """g = λ·(p∘T)"""
    if complex(lam) == 0:
        raise InvalidParameter("λ 는 0이 될 수 없습니다.")
    return compose_affine(p, T).scale(lam)


def coefficient_distance(p: Polynomial, q: Polynomial) -> float:
    """최대 계수 차이 |Δcᵢ|"""
    return float(np.max(np.abs(npoly.polysub(p.as_array(), q.as_array()))))


def almost_equal(p: Polynomial, q: Polynomial, rtol: float = COEFF_RTOL) -> bool:
    scale = max(p.max_abs(), q.max_abs(), 1e-300)
    return coefficient_distance(p, q) <= rtol * scale


def reduce_cubic(p: Polynomial) -> Tuple[complex, AffineMap, complex]:
    """
    비 unicritical 삼차식을 z³ − 3z + a 로 축약합니다.

    Returns:
        (a, T, λ): affine_conjugate(p, T, λ) = z³ − 3z + a
    """
    if p.degree != 3:
        raise InvalidParameter(f"삼차 다항식이 필요합니다 (degree={p.degree})")
    lead = p.leading
    # monic 기준 z³ + a₁z² + a₂z + a₃
    a2, a1 = p.coeffs[1] / lead, p.coeffs[2] / lead
    discriminant = a1 * a1 - 3 * a2
    if abs(discriminant) <= COEFF_RTOL * max(1.0, abs(a1) ** 2, abs(a2)):
        raise UnicriticalInput("a₁² = 3a₂ 인 삼차식은 z³−3z+a 꼴로 축약할 수 없습니다.")
    xi = -a1 / 3
    A = cmath.sqrt(discriminant / 9)
    T = AffineMap(A, xi)
    lam = 1 / (lead * A ** 3)
    a = eval_poly(p, xi) * lam
    return a, T, lam


def normalize(p: Polynomial) -> Tuple[Polynomial, AffineMap]:
    """monic 이고 (d−1)차 계수가 0인 q = (1/lead)·(p∘T)"""
    d = p.degree
    if d < 2:
        raise InvalidParameter(f"정규화에는 degree ≥ 2 가 필요합니다 (degree={d})")
    shift = -p.coeffs[d - 1] / (d * p.leading)
    T = AffineMap(1, shift)
    coeffs = list(affine_conjugate(p, T, 1 / p.leading).coeffs)
    coeffs[d - 1] = 0j
    coeffs[d] = 1 + 0j
    return Polynomial(tuple(coeffs)), T


def roots_of_unity(n: int) -> List[complex]:
    """e^{2πij/n}, 부동소수 잡음(|x| < 1e−15)은 0으로 정리"""
    roots = []
    for j in range(n):
        w = cmath.exp(2j * math.pi * j / n)
        re_part = 0.0 if abs(w.real) < 1e-15 else w.real
        im_part = 0.0 if abs(w.imag) < 1e-15 else w.imag
        roots.append(complex(re_part, im_part))
    return roots


# ----------------------------------------------------------------------
# 텍스트 문법 (CLI / WebUI 입력)
#   complex    := real | real ("+"|"-") [unsigned] "i" | [sign] [unsigned] "i"
#   coeffs     := complex ("," complex)*                 (오름차순)
#   factored   := "(" root ("," root)* ")" [";" complex]
#   root       := complex ["^" integer]
# ----------------------------------------------------------------------
_COMPLEX_RE = re.compile(r"[0-9.eE+\-]*[0-9.][0-9eE+\-]*[ij]?|[+\-]?[ij]")


def parse_complex(text: str) -> complex:
    token = text.strip()
    if not token or not _COMPLEX_RE.fullmatch(token):
        raise PolynomialSyntaxError(f"복소수 형식이 아닙니다: '{text}' (예: 1.5, -2i, 0.5+0.3i)")
    if token[-1] in "ij":
        token = token[:-1] + ("1j" if len(token) == 1 or token[-2] in "+-" else "j")
    try:
        return complex(token)
    except ValueError as e:
        raise PolynomialSyntaxError(f"복소수 형식이 아닙니다: '{text}'") from e


def parse_coefficients(text: str) -> Polynomial:
    parts = text.split(",")
    if any(not part.strip() for part in parts):
        raise PolynomialSyntaxError(f"계수 목록이 비어 있습니다: '{text}'")
    return Polynomial(tuple(parse_complex(part) for part in parts))


def parse_factored(text: str) -> FactoredPolynomial:
    match = re.fullmatch(r"\s*\((?P<roots>[^)]*)\)\s*(?:;\s*(?P<lead>\S+))?\s*", text)
    if not match or not match.group("roots").strip():
        raise PolynomialSyntaxError(f"인수분해 형식이 아닙니다: '{text}' (예: (1^1,-1^2);1)")
    roots = []
    for item in match.group("roots").split(","):
        value, _, mult = item.strip().partition("^")
        if mult and not mult.strip().isdigit():
            raise PolynomialSyntaxError(f"중복도는 양의 정수여야 합니다: '{item}'")
        roots.append((parse_complex(value), int(mult) if mult else 1))
    leading = parse_complex(match.group("lead")) if match.group("lead") else 1
    try:
        return FactoredPolynomial(leading, tuple(roots))
    except InvalidParameter as e:
        raise PolynomialSyntaxError(str(e)) from e


def random_factored(rng: np.random.Generator, max_degree: int = 6,
                    min_separation: float = 1e-2, max_roots: int = None) -> FactoredPolynomial:
    """서로 충분히 떨어진 근을 갖는 무작위 인수분해형 (테스트/평가용)"""
    max_roots = max_roots or max_degree
    while True:
        k = int(rng.integers(2, min(max_roots, max_degree) + 1))
        roots = rng.uniform(-2, 2, k) + 1j * rng.uniform(-2, 2, k)
        gaps = [abs(x - y) for i, x in enumerate(roots) for y in roots[i + 1:]]
        if min(gaps) < min_separation:
            continue
        budget = max_degree - k
        mults = [1] * k
        for i in range(k):
            extra = int(rng.integers(0, budget + 1)) if budget > 0 else 0
            mults[i] += extra
            budget -= extra
        leading = complex(rng.uniform(0.5, 2), rng.uniform(-1, 1))
        return FactoredPolynomial(leading, tuple((complex(r), m) for r, m in zip(roots, mults)))


"""
모듈 패키지 초기화

이 패키지는 완화 뉴턴 사상 N_{h,p}(z) = z − h·p(z)/p′(z) 분석 도구의 핵심 모듈들을 포함합니다.

모듈 구성:
- poly_core.py: 복소 계수 다항식, 아핀 사상, 입력 문법
- polyroot.py: Aberth 동시 근 계산 및 중근 군집화
- newton_map.py: 사상 구성, 고정점/승수/지표, 임계점, 특성화
- dynamics.py: 궤도 반복, 주기 검출, 수렴성 판정
- geometry.py: Julia 집합 표본, 직선/대칭 판정, 끌림 영역 탐침
- constructions.py: 클래스 대표와 비수렴 삼차식 구성
- render.py: 끌림 영역 래스터 렌더링
- serialization.py: JSON 직렬화
- errors.py: 예외 계층
- logger.py: 로깅 기능
"""

__version__ = "0.1.0"

from .logger import LoggerManager
from .errors import RelaxedNewtonError, InputError, SolverFailure, VerificationFailure
from .poly_core import Polynomial, FactoredPolynomial, AffineMap
from .newton_map import RelaxedNewtonMap, build_map
from .dynamics import classify_convergence
from .constructions import nonconvergent_cubic
from .render import Viewport, render_basins
from .analysis_system import AnalysisSystemInitializer, AnalysisQueryProcessor

__all__ = [
    "LoggerManager",
    "RelaxedNewtonError",
    "InputError",
    "SolverFailure",
    "VerificationFailure",
    "Polynomial",
    "FactoredPolynomial",
    "AffineMap",
    "RelaxedNewtonMap",
    "build_map",
    "classify_convergence",
    "nonconvergent_cubic",
    "Viewport",
    "render_basins",
    "AnalysisSystemInitializer",
    "AnalysisQueryProcessor",
]

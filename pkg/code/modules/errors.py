"""
예외 계층 모듈

라이브러리 코드는 아래 예외를 발생시키고, CLI / 평가 도구 / WebUI가 이를 받아
기계가 읽을 수 있는 오류 코드(code)와 종료 코드(exit_code)로 변환합니다.

- 입력 오류 (exit 2): ValueError 계열
- 수치 실패 / 검증 실패 (exit 3)
"""


class RelaxedNewtonError(Exception):
    """모든 도메인 예외의 기반 클래스"""
    code = "error"
    exit_code = 2


class InputError(RelaxedNewtonError, ValueError):
    """잘못된 입력으로 인한 오류"""
    code = "input_error"


class PolynomialSyntaxError(InputError):
    code = "polynomial_syntax"


class DegenerateInput(InputError):
    """선형 다항식이나 단항식처럼 N_{h,p}가 선형이 되는 입력"""
    code = "degenerate_input"


class UnicriticalInput(InputError):
    """a₁² = 3a₂ 인 삼차식 (z³−3z+a 꼴로 축약 불가)"""
    code = "unicritical_input"


class InvalidParameter(InputError):
    code = "invalid_parameter"


class NotAFixedRoot(InvalidParameter):
    """끌개 고정점(근)이 아닌 점을 근으로 넘긴 경우"""
    code = "not_a_fixed_root"


class NotRealizable(InputError):
    """승수 패턴이 이차 특성화 보조정리의 어느 경우에도 맞지 않음"""
    code = "not_realizable"


class NonIntegerMultiplicity(InputError):
    """h/(1−μ)가 양의 정수에 가깝지 않음"""
    code = "non_integer_multiplicity"

    def __init__(self, value: complex, location=None):
        self.value = value
        self.location = location
        where = f" (고정점 {location})" if location is not None else ""
        super().__init__(f"중복도 h/(1−μ) = {value} 가 양의 정수가 아닙니다{where}")


class PoleInput(InputError):
    code = "pole_input"


class ParabolicFixedPoint(InputError):
    """승수가 1인 고정점 (잔류 지표 1/(1−λ) 정의 불가)"""
    code = "parabolic_fixed_point"


class PaletteTooSmall(InputError):
    code = "palette_too_small"


class SolverFailure(RelaxedNewtonError, RuntimeError):
    code = "solver_failure"
    exit_code = 3


class NoConvergence(SolverFailure):
    """Aberth–Ehrlich 반복이 잔차 목표에 도달하지 못함"""
    code = "no_convergence"


class VerificationFailure(RelaxedNewtonError, ArithmeticError):
    """구성 결과가 불변식 허용오차를 만족하지 못함"""
    code = "verification_failure"
    exit_code = 3

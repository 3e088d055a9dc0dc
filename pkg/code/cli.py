"""
CLI 완화 뉴턴 분석 도구

webui와 동일한 분석 시스템을 사용하여 하위 명령별 결과를 JSON 으로 출력하는 CLI 도구입니다.
결과 JSON 은 표준 출력, 로그와 오류는 표준 에러로 나갑니다.

종료 코드: 0 성공, 2 입력 오류, 3 검증/수치 실패

복소수 문법 (공백 없음):
    complex  ::= real | imag | real sign imag
    real     ::= ["+"|"-"] number
    imag     ::= ["+"|"-"] [number] "i"
예: 1.5, -2i, 0.5+0.7853981634i
음수 값도 그대로 쓸 수 있습니다: --h -0.5+1i, --coeffs -1,0,1

다항식 입력 (정확히 하나):
    --coeffs   "c0,c1,...,cd"           오름차순 복소 계수
    --factored "(r1^m1,r2^m2,...);lead"  근^중복도 목록과 최고차 계수
    --class    two_root:k,m | unicritical:n | composite:m,n | cubic:a
"""

import argparse
import json
import sys
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Dict, List, Optional

from dotenv import load_dotenv

# 환경 설정
script_dir = Path(__file__).parent.absolute()
sys.path.insert(0, str(script_dir))
load_dotenv(script_dir / '.env')

from modules import AnalysisSystemInitializer, AnalysisQueryProcessor
from modules.analysis_system import load_multiplier_file
from modules.errors import RelaxedNewtonError
from modules.logger import LoggerManager
from modules.serialization import dumps

POLYNOMIAL_SUBCOMMANDS = ("analyze", "classify", "render", "line-test", "symmetry", "probe", "sample")

# 음수 복소수 값 ('-1,0,1', '-0.5+1i') 을 받는 옵션
VALUE_FLAGS = ("--coeffs", "--factored", "--class", "--h", "--center", "--root")


def join_option_values(argv: List[str]) -> List[str]:
    """값 옵션과 다음 토큰을 '--flag=value' 로 합칩니다.

    argparse 는 '-' 로 시작하는 값을 새 옵션으로 읽기 때문에 '--h -0.5+1i' 형태를 미리 합칩니다.
    """
    joined: List[str] = []
    tokens = iter(argv)
    for token in tokens:
        if token in VALUE_FLAGS:
            value = next(tokens, None)
            joined.append(token if value is None else f"{token}={value}")
        else:
            joined.append(token)
    return joined


@dataclass
class RunConfig:
    """파싱된 명령행 설정"""
    subcommand: str
    source: Dict[str, Optional[str]] = field(default_factory=dict)
    h: Optional[str] = None
    options: Dict[str, Any] = field(default_factory=dict)

    @classmethod
    def from_namespace(cls, args: argparse.Namespace) -> "RunConfig":
        values = dict(vars(args))
        subcommand = values.pop("subcommand")
        source = {
            "coeffs": values.pop("coeffs", None),
            "factored": values.pop("factored", None),
            "family": values.pop("family", None),
        }
        h = values.pop("h", None)
        return cls(subcommand, source, h, values)


def _add_polynomial_arguments(parser: argparse.ArgumentParser) -> None:
    group = parser.add_mutually_exclusive_group(required=True)
    group.add_argument("--coeffs", help="오름차순 복소 계수 'c0,c1,...'")
    group.add_argument("--factored", help="'(r^m,...);lead'")
    group.add_argument("--class", dest="family", help="two_root:k,m | unicritical:n | composite:m,n | cubic:a")
    parser.add_argument("--h", required=True, help="완화 매개변수 (예: 0.5+0.7853981634i)")


def _add_sampling_arguments(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--count", type=int, default=5000, help="Julia 표본 개수")
    parser.add_argument("--depth", type=int, default=50, help="역반복 깊이")
    parser.add_argument("--rng-seed", dest="rng_seed", type=int, default=0)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="relaxed-newton",
        description="완화 뉴턴 사상 N_{h,p}(z) = z − h·p(z)/p′(z) 분석 도구",
        formatter_class=argparse.RawDescriptionHelpFormatter,
        epilog=__doc__,
    )
    sub = parser.add_subparsers(dest="subcommand", required=True)

    analyze = sub.add_parser("analyze", help="고정점, 승수, 지표, 임계점")
    _add_polynomial_arguments(analyze)

    classify = sub.add_parser("classify", help="임계점 궤도 기반 수렴성 판정")
    _add_polynomial_arguments(classify)
    classify.add_argument("--budget", type=int, default=2000)
    classify.add_argument("--eps", type=float, default=1e-8)

    render = sub.add_parser("render", help="끌림 영역 이미지 (PPM/PNG) + 범례 JSON")
    _add_polynomial_arguments(render)
    render.add_argument("--center", default="0")
    render.add_argument("--width", type=float, default=4.0)
    render.add_argument("--px-width", dest="px_width", type=int, default=800)
    render.add_argument("--px-height", dest="px_height", type=int, default=None)
    render.add_argument("--budget", type=int, default=1000)
    render.add_argument("--eps", type=float, default=1e-8)
    render.add_argument("--shading", choices=("flat", "by_iterations"), default="flat")
    render.add_argument("--out", required=True, help=".ppm 또는 .png")

    construct = sub.add_parser("construct-nonconvergent", help="2-주기 초끌개 주기를 갖는 삼차식 구성")
    construct.add_argument("--h", required=True)
    construct.add_argument("--sign", choices=("+", "-"), default="+")
    construct.add_argument("--budget", type=int, default=2000)

    line = sub.add_parser("line-test", help="Julia 집합 직선 판정")
    _add_polynomial_arguments(line)
    _add_sampling_arguments(line)
    line.add_argument("--tol", type=float, default=1e-6)

    symmetry = sub.add_parser("symmetry", help="Julia 집합 회전 대칭 차수 추정")
    _add_polynomial_arguments(symmetry)
    _add_sampling_arguments(symmetry)
    symmetry.add_argument("--max-order", dest="max_order", type=int, required=True)
    symmetry.add_argument("--tau", type=float, default=None)

    characterize = sub.add_parser("characterize", help="승수 JSON 파일로부터 (h, p) 복원")
    characterize.add_argument("multipliers", help="analyze 출력 또는 승수 JSON 파일 ('-' 는 표준 입력)")

    probe = sub.add_parser("probe", help="직접 끌림 영역 비유계성 탐침 (휴리스틱)")
    _add_polynomial_arguments(probe)
    probe.add_argument("--root", required=True)
    probe.add_argument("--radius", type=float, required=True)
    probe.add_argument("--delta", type=float, default=0.05)
    probe.add_argument("--budget", type=int, default=500)

    sample = sub.add_parser("sample", help="Julia 표본을 CSV 로 저장")
    _add_polynomial_arguments(sample)
    _add_sampling_arguments(sample)
    sample.add_argument("--out", required=True)

    return parser


def _report_error(result: Dict[str, Any]) -> int:
    sys.stderr.write(json.dumps({"error_code": result["error_code"], "message": result["error"]},
                                ensure_ascii=False) + "\n")
    return result["exit_code"]


def _dispatch(config: RunConfig) -> Dict[str, Any]:
    if config.subcommand == "construct-nonconvergent":
        return AnalysisQueryProcessor.construct_nonconvergent(config.h, config.options["sign"],
                                                              config.options["budget"])
    if config.subcommand == "characterize":
        path = config.options["multipliers"]
        try:
            document = json.load(sys.stdin) if path == "-" else load_multiplier_file(Path(path))
        except RelaxedNewtonError as e:
            return {"success": False, "result": None, "error": str(e), "error_code": e.code,
                    "exit_code": e.exit_code}
        except json.JSONDecodeError as e:
            return {"success": False, "result": None, "error": str(e), "error_code": "polynomial_syntax",
                    "exit_code": 2}
        return AnalysisQueryProcessor.characterize(document)

    project_root, _ = AnalysisSystemInitializer.get_project_paths(script_dir)
    try:
        processor = AnalysisSystemInitializer.initialize_system(
            config.source, config.h, logger_name="CLI", project_root=project_root, raise_errors=True
        )
    except RelaxedNewtonError as e:
        return {"success": False, "result": None, "error": str(e), "error_code": e.code, "exit_code": e.exit_code}
    return processor.process(config.subcommand, config.options)


def run(argv: Optional[List[str]] = None) -> int:
    """명령행 토큰을 실행하고 종료 코드를 반환합니다."""
    log = LoggerManager("CLI")
    try:
        tokens = sys.argv[1:] if argv is None else list(argv)
        args = build_parser().parse_args(join_option_values(tokens))
    except SystemExit as e:
        # argparse 사용법 오류는 2, --help 는 0
        return int(e.code or 0)

    config = RunConfig.from_namespace(args)
    log.log_function_start("run", subcommand=config.subcommand, h=config.h)
    result = _dispatch(config)
    if not result["success"]:
        log.log_error_with_icon(f"{config.subcommand} 실패: {result['error']}")
        return _report_error(result)

    sys.stdout.write(dumps(result["result"]) + "\n")
    log.log_function_end("run", f"{config.subcommand} 완료")
    return 0


def main():
    """메인 함수"""
    sys.exit(run())


if __name__ == "__main__":
    main()

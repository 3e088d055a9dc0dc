"""
완화 뉴턴 분석 시스템 공통 모듈

이 모듈은 main.py, cli.py, evaluate.py에서 공통으로 사용하는
다항식 입력 해석, 사상 초기화 및 하위 명령 처리 로직을 제공합니다.

주요 기능:
1. 다항식 입력 해석 (계수 / 인수분해 / 클래스 생성기 중 정확히 하나)
2. N_{h,p} 초기화
3. 하위 명령 처리 (analyze, classify, render, line-test, symmetry, probe, sample)
4. 에러 처리 통합 (결과 dict 의 error_code / exit_code)
"""

import json
from pathlib import Path
from typing import Any, Callable, Dict, Optional, Tuple

from .constructions import construction_report, nonconvergent_cubic, parse_family
from .dynamics import DEFAULT_BUDGET, ROOT_EPS, classify_convergence
from .errors import InvalidParameter, PolynomialSyntaxError, RelaxedNewtonError
from .geometry import (
    DEFAULT_DEPTH,
    basin_unbounded_probe,
    export_samples_csv,
    invariance_defect,
    line_predicate,
    numeric_line_check,
    sample_julia,
    symmetry_order,
)
from .logger import LoggerManager
from .newton_map import (
    RelaxedNewtonMap,
    build_map,
    characterize_quadratic,
    map_report,
    quadratic_data_from_multipliers,
    reconstruct_general,
    QuadraticData,
)
from .poly_core import FactoredPolynomial, parse_coefficients, parse_complex, parse_factored
from .polyroot import DEFAULT_CLUSTER_RADIUS, factor_polynomial
from .render import Viewport, default_palette, render_basins, save_png, save_ppm
from .serialization import complex_from_json, dumps

DEFAULT_SAMPLES = 5000
DEFAULT_PIXELS = 800
DEFAULT_RENDER_BUDGET = 1000


def _failure(error: Exception) -> Dict[str, Any]:
    if isinstance(error, RelaxedNewtonError):
        code, exit_code = error.code, error.exit_code
    else:
        code, exit_code = "internal_error", 1
    return {"success": False, "result": None, "error": str(error), "error_code": code, "exit_code": exit_code}


def _success(result: Any) -> Dict[str, Any]:
    return {"success": True, "result": result, "error": None, "error_code": None, "exit_code": 0}


def _as_complex(value: Any) -> complex:
    if isinstance(value, str):
        return parse_complex(value)
    return complex(value)


class AnalysisSystemInitializer:
    """분석 시스템 공통 초기화 클래스"""

    @staticmethod
    def get_project_paths(current_file_path: Path) -> Tuple[str, str]:
        """
        현재 파일 경로를 기준으로 프로젝트 경로들을 계산

        Returns:
            Tuple[str, str]: (project_root, data_dir)
        """
        current_file_path = Path(current_file_path)
        base = current_file_path if current_file_path.is_dir() else current_file_path.parent
        project_root = base.parent if base.name == "code" else base
        return str(project_root), str(project_root / "data")

    @staticmethod
    def resolve_polynomial(coeffs: Optional[str] = None, factored: Optional[str] = None,
                           family: Optional[str] = None,
                           cluster_radius: float = DEFAULT_CLUSTER_RADIUS) -> FactoredPolynomial:
        """
        세 입력 중 정확히 하나로부터 인수분해 형태의 다항식을 만듭니다.
        계수 입력은 근 계산 + 군집화로 인수분해합니다.

        Raises:
            PolynomialSyntaxError: 입력이 없거나 둘 이상이거나 형식이 잘못됨
        """
        given = [name for name, value in (("coeffs", coeffs), ("factored", factored), ("family", family)) if value]
        if len(given) != 1:
            raise PolynomialSyntaxError(f"다항식 입력은 정확히 하나여야 합니다 (받은 입력: {given or '없음'})")
        if coeffs:
            return factor_polynomial(parse_coefficients(coeffs), cluster_radius)
        if factored:
            return parse_factored(factored)
        return parse_family(family)

    @classmethod
    def initialize_system(cls, source: Dict[str, Optional[str]], h: Any,
                          logger_name: str = "AnalysisSystem",
                          project_root: Optional[str] = None,
                          raise_errors: bool = False) -> Optional["AnalysisQueryProcessor"]:
        """
        표준 분석 시스템 초기화

        Args:
            source: {"coeffs" | "factored" | "family": 텍스트}
            h: 완화 매개변수 ("a+bi" 문자열 또는 숫자)
            raise_errors: True 이면 도메인 예외를 그대로 전달 (CLI 종료 코드용)

        Returns:
            AnalysisQueryProcessor 또는 실패 시 None
        """
        logger = LoggerManager(logger_name)
        logger.log_function_start("initialize_system", **{k: v for k, v in source.items() if v}, h=h)

        try:
            # 1. 다항식 해석
            p = cls.resolve_polynomial(
                coeffs=source.get("coeffs"), factored=source.get("factored"), family=source.get("family")
            )
            logger.log_step("다항식 해석 완료", f"degree={p.degree}, roots={len(p.roots)}")

            # 2. 사상 구성
            N = build_map(p, _as_complex(h))
            logger.log_step("완화 뉴턴 사상 구성 완료", f"reduced_degree={N.reduced_degree}")

            # 3. 질의 처리기
            processor = AnalysisQueryProcessor(N, logger_name=logger_name + "_Query", project_root=project_root)
            logger.log_function_end("initialize_system", "모든 컴포넌트 초기화 완료")
            return processor

        except RelaxedNewtonError as e:
            logger.log_error("initialize_system", e)
            if raise_errors:
                raise
            return None


class AnalysisQueryProcessor:
    """하위 명령 처리 공통 클래스"""

    def __init__(self, N: RelaxedNewtonMap, logger_name: str = "AnalysisQueryProcessor",
                 project_root: Optional[str] = None):
        self.N = N
        self.logger = LoggerManager(logger_name)
        self.project_root = Path(project_root) if project_root else Path.cwd()
        self.handlers: Dict[str, Callable[[Dict[str, Any]], Any]] = {
            "analyze": self.analyze,
            "classify": self.classify,
            "render": self.render,
            "line-test": self.line_test,
            "symmetry": self.symmetry,
            "probe": self.probe,
            "sample": self.sample,
        }

    def process(self, subcommand: str, options: Optional[Dict[str, Any]] = None) -> Dict[str, Any]:
        """
        하위 명령 처리

        Returns:
            Dict[str, Any]: {
                "success": bool,
                "result": 하위 명령 결과 (JSON 직렬화 가능),
                "error": Optional[str],
                "error_code": Optional[str],
                "exit_code": int
            }
        """
        options = {k: v for k, v in (options or {}).items() if v is not None}
        self.logger.log_function_start("process", subcommand=subcommand)
        handler = self.handlers.get(subcommand)
        if handler is None:
            return _failure(InvalidParameter(f"알 수 없는 하위 명령: {subcommand}"))
        try:
            result = handler(options)
        except Exception as e:
            self.logger.log_error("process", e)
            return _failure(e)
        self.logger.log_function_end("process", f"{subcommand} 완료")
        return _success(result)

    # ------------------------------------------------------------------
    # 하위 명령
    # ------------------------------------------------------------------
    def analyze(self, options: Dict[str, Any]) -> dict:
        report = map_report(self.N)
        report["polynomial"] = self.N.p.to_dict()
        return report

    def classify(self, options: Dict[str, Any]) -> dict:
        verdict = classify_convergence(self.N, options.get("budget", DEFAULT_BUDGET), options.get("eps", ROOT_EPS))
        result = verdict.to_dict()
        result["h"] = self.N.h
        return result

    def render(self, options: Dict[str, Any]) -> dict:
        budget = options.get("budget", DEFAULT_RENDER_BUDGET)
        eps = options.get("eps", ROOT_EPS)
        vp = Viewport(
            _as_complex(options.get("center", 0)),
            float(options.get("width", 4.0)),
            int(options.get("px_width", DEFAULT_PIXELS)),
            int(options.get("px_height", options.get("px_width", DEFAULT_PIXELS))),
        )
        # 외래 끌개 주기는 임계점 궤도 판정에서 찾습니다
        verdict = classify_convergence(self.N, max(budget, DEFAULT_BUDGET), eps)
        image = render_basins(self.N, verdict.cycles, vp, budget, eps)

        palette = default_palette(len(self.N.p.roots), len(verdict.cycles))
        shading = options.get("shading", "flat")
        out = Path(options.get("out", self.project_root / "data" / "renders" / "basins.ppm"))
        if out.suffix.lower() == ".png":
            save_png(image, palette, out, shading)
        else:
            save_ppm(image, palette, out, shading)
        legend_path = out.with_suffix(".json")
        legend_path.write_text(dumps(image.legend_json()), encoding="utf-8")

        result = image.to_dict()
        result.update({
            "viewport": vp.to_dict(),
            "output": str(out),
            "legend_path": str(legend_path),
            "sentinel_fraction": image.fraction(-1),
            "cycle_fraction": image.cycle_fraction(),
            "verdict": verdict.status,
        })
        return result

    def _sample(self, options: Dict[str, Any]):
        return sample_julia(
            self.N,
            int(options.get("count", DEFAULT_SAMPLES)),
            int(options.get("depth", DEFAULT_DEPTH)),
            int(options.get("rng_seed", 0)),
        )

    def line_test(self, options: Dict[str, Any]) -> dict:
        predicate = line_predicate(self.N.p, self.N.h)
        sample = self._sample(options)
        fit = numeric_line_check(sample, float(options.get("tol", 1e-6)))
        if predicate.is_line != fit.within_tolerance:
            self.logger.log_warning_with_icon(
                f"직선 판정 불일치: 예측={predicate.is_line}, 표본 최대 편차={fit.max_deviation:.3e}"
            )
        return {"predicate": predicate.to_dict(), "fit": fit.to_dict(), "sample": sample.to_dict()}

    def symmetry(self, options: Dict[str, Any]) -> dict:
        sample = self._sample(options)
        estimate = symmetry_order(sample, int(options.get("max_order", 6)), options.get("tau"))
        result = estimate.to_dict()
        result["sample"] = sample.to_dict()
        return result

    def probe(self, options: Dict[str, Any]) -> dict:
        if "root" not in options or "radius" not in options:
            raise InvalidParameter("probe 에는 root 와 radius 가 필요합니다.")
        probe = basin_unbounded_probe(
            self.N,
            _as_complex(options["root"]),
            float(options["radius"]),
            float(options.get("delta", 0.05)),
            int(options.get("budget", 500)),
        )
        return probe.to_dict()

    def sample(self, options: Dict[str, Any]) -> dict:
        sample = self._sample(options)
        out = Path(options.get("out", self.project_root / "data" / "samples" / "julia.csv"))
        export_samples_csv(sample, out)
        result = sample.to_dict()
        result.update({"output": str(out), "invariance_defect": invariance_defect(self.N, sample)})
        return result

    # ------------------------------------------------------------------
    # 다항식 입력이 필요 없는 명령
    # ------------------------------------------------------------------
    @staticmethod
    def construct_nonconvergent(h: Any, sign: Any = "+", budget: int = DEFAULT_BUDGET) -> Dict[str, Any]:
        logger = LoggerManager("AnalysisSystem_Construct")
        try:
            return _success(construction_report(nonconvergent_cubic(_as_complex(h), sign), budget))
        except Exception as e:
            logger.log_error("construct_nonconvergent", e)
            return _failure(e)

    @staticmethod
    def characterize(document: Dict[str, Any]) -> Dict[str, Any]:
        """
        승수 JSON 문서로부터 (h, p) 를 복원합니다.

        문서 형식:
            - {"quadratic": {"lambda1", "lambda2"}} 또는 {"quadratic": {"case", "value"}}
              → 이차 특성화
            - analyze 출력 그대로 ({"h", "roots": [{"value", "multiplier", ...}], "infinity"})
              또는 {"h", "fixed_points": [{"location", "multiplier"}], "repelling"}
              → 척력 고정점 하나를 제외한 일반 복원
        """
        logger = LoggerManager("AnalysisSystem_Characterize")
        try:
            try:
                return _success(_characterize(document))
            except (KeyError, TypeError) as e:
                raise PolynomialSyntaxError(f"특성화 입력 형식 오류: {e}") from e
        except Exception as e:
            logger.log_error("characterize", e)
            return _failure(e)


def _characterize(document: Dict[str, Any]) -> dict:
    if not isinstance(document, dict):
        raise PolynomialSyntaxError("특성화 입력은 JSON 객체여야 합니다.")
    if "quadratic" in document:
        quadratic = document["quadratic"]
        if "lambda1" in quadratic:
            data = quadratic_data_from_multipliers(
                complex_from_json(quadratic["lambda1"]), complex_from_json(quadratic["lambda2"])
            )
        else:
            data = QuadraticData(quadratic["case"], complex_from_json(quadratic["value"]))
        result = characterize_quadratic(data)
        return {"kind": "quadratic", **result.to_dict(), "polynomial": result.polynomial.to_dict()}

    if "h" not in document:
        raise InvalidParameter("일반 복원에는 h 가 필요합니다.")
    h = complex_from_json(document["h"])
    if "roots" in document:
        fps = [(complex_from_json(r["value"]), complex_from_json(r["multiplier"])) for r in document["roots"]]
        repelling = complex_from_json("infinity")
    elif "fixed_points" in document:
        fps = [(complex_from_json(r["location"]), complex_from_json(r["multiplier"])) for r in document["fixed_points"]]
        repelling = complex_from_json(document.get("repelling", "infinity"))
    else:
        raise PolynomialSyntaxError("특성화 입력에 roots 또는 fixed_points 가 없습니다.")
    reconstruction = reconstruct_general(fps, repelling, h)
    return {"kind": "general", "h": h, **reconstruction.to_dict()}


def load_multiplier_file(path: Path) -> Dict[str, Any]:
    try:
        return json.loads(Path(path).read_text(encoding="utf-8"))
    except (OSError, json.JSONDecodeError) as e:
        raise PolynomialSyntaxError(f"승수 파일을 읽을 수 없습니다: {path} ({e})") from e

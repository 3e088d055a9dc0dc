"""
완화 뉴턴 분석 도구 수용 평가 도구 (evaluate.py)

CLI/WebUI와 동일한 모듈을 사용하여 수용 기준을 이름 붙은 검사로 실행하고
실행마다 하나의 JSON 문서를 저장하는 도구입니다.

주요 기능:
- 승수 법칙 / 지표 합 (무작위 인수분해형 50개)
- 수렴 클래스 판정 (두 근, 단일 임계점, 합성 클래스)
- 비수렴 삼차식 구성 (D(1,1) 격자 25개 + h=0.5 수치 재현)
- Julia 집합 직선 / 회전 대칭 판정
- 임계점 닫힌 형태 vs 일반 풀이 교차 검증
- 켤레 항등식 (스케일링, 거듭제곱)
- 대표 매개변수 렌더링 (끌림 영역 개수, 미결정/주기 픽셀 비율)
- 결정성 (같은 입력 → 바이트 단위로 같은 JSON/PPM)
- 평가 결과 저장 (data/eval/evaluation_results/acceptance_<timestamp>.json)

사용법:
    uv run python code/evaluate.py

환경 변수:
    RENEWT_EVAL_PIXELS  렌더링 검사 해상도 (기본 800)
"""

import math
import os
import sys
import time
from datetime import datetime
from pathlib import Path
from typing import Any, Callable, Dict, List

import numpy as np
import pytz

# 현재 스크립트의 디렉토리를 sys.path에 추가
script_dir = Path(__file__).parent.absolute()
if str(script_dir) not in sys.path:
    sys.path.insert(0, str(script_dir))

# 환경변수 로드
from dotenv import load_dotenv
load_dotenv(script_dir / '.env')

# 모듈 imports
from modules import LoggerManager, AnalysisSystemInitializer
from modules.constructions import (
    composite_rep, cubic_rep, nonconvergent_cubic, two_root_rep, unicritical_rep,
)
from modules.dynamics import CONVERGENT_EVIDENCE, NON_CONVERGENT, classify_convergence
from modules.geometry import numeric_line_check, sample_julia, symmetry_order
from modules.newton_map import (
    build_map, critical_points, equal_power_check, fixed_points, in_admissible_disk,
    infinity_multiplier_numeric, map_derivative, residue_index_sum, scaling_defect,
)
from modules.poly_core import AffineMap, random_factored
from modules.render import SENTINEL, Viewport, default_palette, encode_ppm, render_basins
from modules.serialization import dumps


# 전역 설정
_, data_dir = AnalysisSystemInitializer.get_project_paths(Path(__file__).absolute())
results_dir = Path(data_dir) / "eval" / "evaluation_results"

RNG_SEED = 20240917
H_REF = complex(2, math.pi) / 4
REPORTED_PARTNER = 1.4765
H_CANDIDATES = [H_REF, 1.5, 1.0, 0.6 + 0.3j, 0.8 - 0.5j, 0.5, 1.2 + 0.4j]


def admissible_samples(p, count: int = 5) -> List[complex]:
    """H_CANDIDATES 중 모든 근에서 허용되는 h 를 앞에서부터 count 개"""
    m = p.min_multiplicity
    chosen = [complex(h) for h in H_CANDIDATES if in_admissible_disk(h, m) and abs(h - p.degree) > 1e-6]
    return chosen[:count]


def random_admissible_h(rng: np.random.Generator, p) -> complex:
    m = p.min_multiplicity
    while True:
        h = m * (1 + rng.uniform(0.1, 0.8) * np.exp(1j * rng.uniform(0, 2 * np.pi)))
        if abs(h - p.degree) > 1e-3:
            return complex(h)


class AcceptanceEvaluator:
    """수용 기준 평가를 위한 클래스"""

    def __init__(self, pixels: int = None):
        self.logger = LoggerManager("AcceptanceEvaluator")
        self.results_dir = results_dir
        self.pixels = pixels or int(os.getenv("RENEWT_EVAL_PIXELS", "800"))

        # 결과 디렉토리 생성
        self.results_dir.mkdir(parents=True, exist_ok=True)

    def _corpus(self, count: int = 50):
        rng = np.random.default_rng(RNG_SEED)
        corpus = []
        for _ in range(count):
            p = random_factored(rng, max_degree=6)
            corpus.append((p, random_admissible_h(rng, p)))
        return corpus

    # ------------------------------------------------------------------
    # 기준별 검사
    # ------------------------------------------------------------------
    def check_multiplier_law(self) -> Dict[str, Any]:
        worst_root, worst_inf = 0.0, 0.0
        for p, h in self._corpus():
            N = build_map(p, h)
            for root, m in p.roots:
                worst_root = max(worst_root, abs(map_derivative(N, root) - (1 - h / m)))
            d = p.degree
            worst_inf = max(worst_inf, abs(infinity_multiplier_numeric(N) - d / (d - h)))
        return {"passed": worst_root < 1e-10 and worst_inf < 1e-8,
                "max_root_error": worst_root, "max_infinity_error": worst_inf}

    def check_index_sum(self) -> Dict[str, Any]:
        worst = max(abs(residue_index_sum(build_map(p, h)) - 1) for p, h in self._corpus())
        return {"passed": worst < 1e-9, "max_error": worst}

    def _class_instances(self):
        instances = [(f"two_root:{k},{m}", two_root_rep(k, m)) for k in range(1, 4) for m in range(1, 4)]
        instances += [(f"unicritical:{n}", unicritical_rep(n)) for n in range(2, 7)]
        instances += [(f"composite:{m},{n}", composite_rep(m, n)) for m in (1, 2) for n in (2, 3, 4)]
        return instances

    def check_convergent_classes(self) -> Dict[str, Any]:
        failures = []
        total = 0
        for name, p in self._class_instances():
            for h in admissible_samples(p):
                total += 1
                verdict = classify_convergence(build_map(p, h), 2000)
                if verdict.status != CONVERGENT_EVIDENCE:
                    failures.append({"class": name, "h": h, "status": verdict.status})
        return {"passed": not failures, "cases": total, "failures": failures}

    def check_nonconvergent_cubic(self) -> Dict[str, Any]:
        failures = []
        grid = [1 + r * np.exp(1j * t) for r in (0.1, 0.3, 0.5, 0.7, 0.85)
                for t in np.linspace(0, 2 * np.pi, 5, endpoint=False) + 0.3]
        for h in grid:
            try:
                c = nonconvergent_cubic(complex(h), "+")
                status = classify_convergence(c.map, 2000).status
                if status != NON_CONVERGENT:
                    failures.append({"h": complex(h), "status": status})
            except Exception as e:
                failures.append({"h": complex(h), "error": str(e)})

        c = nonconvergent_cubic(0.5, "+")
        a_error = abs(abs(c.a) - 1834 / (37 * math.sqrt(37)))
        xi_error = abs(abs(c.xi) - 1 / math.sqrt(37))
        partners = sorted(abs(nonconvergent_cubic(0.5, s).partner) for s in ("+", "-"))
        if all(abs(v - REPORTED_PARTNER) > 1e-3 for v in partners):
            self.logger.log_warning_with_icon(
                f"h=0.5 주기 짝 |N(ξ)| = {partners} 가 보고된 값 {REPORTED_PARTNER} 와 다릅니다 (기록만 함)"
            )
        return {"passed": not failures and a_error < 1e-9 and xi_error < 1e-9,
                "grid_size": len(grid), "failures": failures,
                "a": c.a, "xi": c.xi, "partner": c.partner,
                "a_error": a_error, "xi_error": xi_error,
                "reported_partner": REPORTED_PARTNER, "computed_partner_moduli": partners}

    def check_line_theorem(self) -> Dict[str, Any]:
        on_line = numeric_line_check(sample_julia(build_map(two_root_rep(1, 1), 0.7), 5000))
        off_a = numeric_line_check(sample_julia(build_map(two_root_rep(1, 1), 0.5 + 0.3j), 5000))
        off_b = numeric_line_check(sample_julia(build_map(two_root_rep(1, 2), 1.5), 5000))
        # 허수축: 방향이 순허수이고 직선이 원점을 지남
        on_axis = abs(on_line.direction.real) < 1e-9 and abs(on_line.point.real) < 1e-6
        line_error = on_line.max_deviation if on_axis else float("inf")
        return {"passed": line_error < 1e-6 and off_a.max_deviation > 1e-2 and off_b.max_deviation > 1e-2,
                "imaginary_axis_deviation": on_line.max_deviation,
                "fitted_point": on_line.point,
                "complex_h_deviation": off_a.max_deviation,
                "unequal_multiplicity_deviation": off_b.max_deviation}

    def check_symmetry(self) -> Dict[str, Any]:
        composite = symmetry_order(sample_julia(build_map(composite_rep(1, 3), H_REF), 5000), 4)
        quartic = symmetry_order(sample_julia(build_map(unicritical_rep(4), H_REF), 5000), 4)
        defects = dict(composite.hausdorff_defects)
        rejects = defects[2] >= composite.tau and defects[4] >= composite.tau
        return {"passed": composite.order == 3 and rejects and quartic.order == 4,
                "composite": composite.to_dict(), "unicritical_4": quartic.to_dict()}

    def check_critical_cross_validation(self) -> Dict[str, Any]:
        worst = 0.0
        for name, p in self._class_instances():
            for h in admissible_samples(p):
                N = build_map(p, h)
                closed = np.asarray(critical_points(N), dtype=complex)
                general = np.asarray(critical_points(N, method="general"), dtype=complex)
                if closed.size != general.size:
                    worst = float("inf")
                    continue
                if closed.size:
                    distance = np.abs(closed[:, None] - general[None, :])
                    worst = max(worst, float(distance.min(axis=1).max()), float(distance.min(axis=0).max()))
        return {"passed": worst < 1e-8, "max_distance": worst}

    def check_conjugacy_identities(self) -> Dict[str, Any]:
        rng = np.random.default_rng(RNG_SEED + 1)
        worst_scaling, worst_power = 0.0, 0.0
        for _ in range(20):
            p = random_factored(rng, max_degree=5)
            h = random_admissible_h(rng, p)
            T = AffineMap(complex(*rng.uniform(0.5, 2, 2)), complex(*rng.uniform(-1, 1, 2)))
            lam = complex(*rng.uniform(0.5, 2, 2))
            points = rng.uniform(-3, 3, 100) + 1j * rng.uniform(-3, 3, 100)
            worst_scaling = max(worst_scaling, scaling_defect(p, T, lam, h, points))
        for _ in range(20):
            p = random_factored(rng, max_degree=4)
            h = random_admissible_h(rng, p)
            worst_power = max(worst_power, equal_power_check(p, h, int(rng.integers(1, 4))))
        return {"passed": worst_scaling < 1e-9 and worst_power < 1e-12,
                "max_scaling_defect": worst_scaling, "max_power_difference": worst_power}

    def _render_sets(self):
        cubic = nonconvergent_cubic(0.5, "+")
        return [
            ("two_root_1_1", two_root_rep(1, 1), H_REF, 4.0, 2),
            ("two_root_1_2", two_root_rep(1, 2), 1.5, 4.0, 2),
            ("unicritical_3", unicritical_rep(3), H_REF, 4.0, 3),
            ("composite_1_3", composite_rep(1, 3), H_REF, 4.0, 4),
            ("nonconvergent_cubic_half", cubic_rep(cubic.a), 0.5, 6.0, 3),
        ]

    def check_basin_renders(self) -> Dict[str, Any]:
        renders = {}
        passed = True
        for name, p, h, width, expected_roots in self._render_sets():
            N = build_map(p, h)
            verdict = classify_convergence(N, 2000)
            image = render_basins(N, verdict.cycles, Viewport(0, width, self.pixels, self.pixels), 1000)
            labels = set(np.unique(image.labels).tolist())
            roots_seen = len([label for label in labels if 0 <= label < len(p.roots)])
            entry = {"roots_seen": roots_seen, "expected_roots": expected_roots,
                     "sentinel_fraction": image.fraction(SENTINEL), "cycle_fraction": image.cycle_fraction()}
            ok = roots_seen == expected_roots and entry["sentinel_fraction"] < 0.005
            if name == "nonconvergent_cubic_half":
                ok = ok and entry["cycle_fraction"] > 0.001
            entry["passed"] = ok
            passed = passed and ok
            renders[name] = entry
        return {"passed": passed, "pixels": self.pixels, "renders": renders}

    def check_determinism(self) -> Dict[str, Any]:
        def produce():
            processor = AnalysisSystemInitializer.initialize_system({"family": "unicritical:3"}, H_REF)
            analysis = dumps(processor.process("analyze")["result"])
            N = processor.N
            image = render_basins(N, (), Viewport(0, 4.0, 100, 100), 200)
            return analysis, encode_ppm(image, default_palette(len(N.p.roots)))

        first, second = produce(), produce()
        return {"passed": first == second, "json_identical": first[0] == second[0],
                "ppm_identical": first[1] == second[1]}

    # ------------------------------------------------------------------
    def run_checks(self) -> Dict[str, Dict[str, Any]]:
        checks: Dict[str, Callable[[], Dict[str, Any]]] = {
            "multiplier_law": self.check_multiplier_law,
            "index_sum": self.check_index_sum,
            "convergent_classes": self.check_convergent_classes,
            "nonconvergent_cubic": self.check_nonconvergent_cubic,
            "julia_line": self.check_line_theorem,
            "julia_symmetry": self.check_symmetry,
            "critical_cross_validation": self.check_critical_cross_validation,
            "conjugacy_identities": self.check_conjugacy_identities,
            "basin_renders": self.check_basin_renders,
            "determinism": self.check_determinism,
        }
        results = {}
        for name, check in checks.items():
            self.logger.log_step(f"검사 시작: {name}")
            start_time = time.time()
            try:
                result = check()
            except Exception as e:
                self.logger.log_error(name, e)
                result = {"passed": False, "error": str(e)}
            result["runtime_s"] = round(time.time() - start_time, 3)
            icon = "✅" if result["passed"] else "❌"
            self.logger.info(f"{icon} {name}: {result['runtime_s']}s")
            results[name] = result
        return results

    def save_evaluation_results(self, results: Dict[str, Dict[str, Any]]) -> str:
        """평가 결과 저장"""
        self.logger.log_function_start("save_evaluation_results")
        timestamp = datetime.now(pytz.timezone('Asia/Seoul')).strftime("%Y-%m-%d_%H-%M-%S")
        filepath = self.results_dir / f"acceptance_{timestamp}.json"
        report = {
            "metadata": {"rng_seed": RNG_SEED, "pixels": self.pixels},
            "checks": results,
            "summary": {
                "total": len(results),
                "passed": len([r for r in results.values() if r["passed"]]),
            },
        }
        filepath.write_text(dumps(report) + "\n", encoding="utf-8")
        self.logger.log_function_end("save_evaluation_results", f"결과 저장: {filepath}")
        return str(filepath)

    def run_evaluation(self) -> bool:
        """전체 평가 프로세스 실행"""
        self.logger.log_success("=== 수용 평가 시작 ===")
        results = self.run_checks()
        result_file = self.save_evaluation_results(results)

        passed = len([r for r in results.values() if r["passed"]])
        self.logger.info("\n" + "=" * 60)
        self.logger.info(f"🎯 수용 기준 {passed}/{len(results)} 통과")
        self.logger.info("=" * 60)
        self.logger.info(f"\n💾 상세 결과가 저장되었습니다: {result_file}")
        self.logger.log_success("=== 수용 평가 완료 ===")
        return passed == len(results)


def main():
    """메인 함수"""
    log = LoggerManager("Evaluate")
    log.info("🚀 완화 뉴턴 분석 도구 수용 평가 CLI")
    try:
        success = AcceptanceEvaluator().run_evaluation()
    except Exception as e:
        log.error(f"\n❌ 평가 중 오류 발생: {str(e)}")
        return 1
    if success:
        log.info("\n✅ 모든 수용 기준을 통과했습니다!")
        return 0
    log.error("\n❌ 통과하지 못한 기준이 있습니다.")
    return 1


if __name__ == "__main__":
    sys.exit(main())

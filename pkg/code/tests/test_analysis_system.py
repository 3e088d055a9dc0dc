"""
analysis_system 테스트

다항식 입력 해석, 시스템 초기화, 하위 명령 처리와 결과 dict 형식을 테스트합니다.
"""

import sys
from pathlib import Path

import pytest

# 현재 파일의 부모 디렉토리를 sys.path에 추가
current_dir = Path(__file__).parent.parent
sys.path.insert(0, str(current_dir))

from modules.analysis_system import AnalysisQueryProcessor, AnalysisSystemInitializer
from modules.errors import PolynomialSyntaxError


class TestInitializer:
    """AnalysisSystemInitializer 테스트 클래스"""

    def test_project_paths(self, temp_dir):
        """code/ 아래 파일 → 저장소 루트와 data/"""
        (temp_dir / "code").mkdir()
        root, data_dir = AnalysisSystemInitializer.get_project_paths(temp_dir / "code" / "cli.py")
        assert Path(root) == temp_dir
        assert Path(data_dir) == temp_dir / "data"

    def test_project_paths_from_code_dir(self, temp_dir):
        """CLI 처럼 code/ 디렉토리를 넘겨도 같은 루트"""
        (temp_dir / "code").mkdir()
        root, _ = AnalysisSystemInitializer.get_project_paths(temp_dir / "code")
        assert Path(root) == temp_dir

    def test_resolve_from_coefficients(self):
        """계수 입력은 인수분해되어 중근을 찾음"""
        p = AnalysisSystemInitializer.resolve_polynomial(coeffs="1,-2,1")
        assert p.multiplicities == [2]

    def test_resolve_from_family(self):
        """클래스 생성기 입력"""
        assert AnalysisSystemInitializer.resolve_polynomial(family="composite:2,3").degree == 5

    @pytest.mark.parametrize("kwargs", [{}, {"coeffs": "-1,0,1", "factored": "(1^1,-1^1)"}])
    def test_resolve_requires_exactly_one(self, kwargs):
        """입력이 없거나 둘이면 거부"""
        with pytest.raises(PolynomialSyntaxError):
            AnalysisSystemInitializer.resolve_polynomial(**kwargs)

    def test_initialize_returns_none_on_error(self):
        """기본값은 오류 시 None"""
        processor = AnalysisSystemInitializer.initialize_system({"coeffs": "-1,0,1"}, "0")
        assert processor is None

    def test_initialize_raise_errors(self):
        """raise_errors=True 이면 예외 전달"""
        with pytest.raises(PolynomialSyntaxError):
            AnalysisSystemInitializer.initialize_system({"family": "quartic:1"}, 1, raise_errors=True)


class TestQueryProcessor:
    """AnalysisQueryProcessor 테스트 클래스"""

    @pytest.fixture
    def processor(self, temp_dir):
        """z² − 1, h = 1 처리기 (출력은 임시 디렉토리)"""
        return AnalysisSystemInitializer.initialize_system(
            {"coeffs": "-1,0,1"}, "1", logger_name="Test", project_root=str(temp_dir)
        )

    def test_result_shape(self, processor):
        """성공 결과 dict 형식"""
        result = processor.process("analyze")
        assert set(result) == {"success", "result", "error", "error_code", "exit_code"}
        assert result["success"] and result["exit_code"] == 0
        assert result["result"]["reduced_degree"] == 2
        assert "polynomial" in result["result"]

    def test_unknown_subcommand(self, processor):
        """알 수 없는 하위 명령"""
        result = processor.process("plot")
        assert not result["success"]
        assert result["error_code"] == "invalid_parameter"

    def test_none_options_dropped(self, processor):
        """None 옵션은 기본값으로"""
        result = processor.process("classify", {"budget": None, "eps": None})
        assert result["result"]["status"] == "ConvergentEvidence"

    def test_probe_requires_root(self, processor):
        """probe 에는 root, radius 필요"""
        result = processor.process("probe", {"radius": 20})
        assert result["error_code"] == "invalid_parameter"
        assert result["exit_code"] == 2

    def test_probe(self, processor):
        """근 1 의 끌림 영역 탐침"""
        result = processor.process("probe", {"root": "1", "radius": 20, "delta": 0.1, "budget": 200})
        assert result["result"]["found"] is True

    def test_symmetry(self, processor):
        """허수축 Julia 집합은 원점을 지나는 직선"""
        result = processor.process("symmetry", {"max_order": 4, "count": 200, "depth": 10})
        assert result["result"]["line_case"] is True

    def test_default_output_paths(self, processor, temp_dir):
        """out 을 주지 않으면 project_root/data 아래에 저장"""
        result = processor.process("sample", {"count": 10, "depth": 3})
        assert Path(result["result"]["output"]) == temp_dir / "data" / "samples" / "julia.csv"

    def test_render_ppm(self, processor, temp_dir):
        """PPM 과 범례 사이드카"""
        out = temp_dir / "basins.ppm"
        result = processor.process("render", {"px_width": 8, "px_height": 4, "budget": 100, "out": str(out)})
        assert result["success"]
        assert out.read_bytes().startswith(b"P6\n8 4\n255\n")
        assert Path(result["result"]["legend_path"]) == temp_dir / "basins.json"


class TestStaticCommands:
    """다항식 입력이 없는 명령 테스트"""

    def test_characterize_superattracting_pair(self):
        """(0, 1/3) → (z−1)²(z+1)³, h = 2"""
        result = AnalysisQueryProcessor.characterize({"quadratic": {"lambda1": 0, "lambda2": "0.3333333333333333"}})
        assert result["success"]
        assert result["result"]["h"] == pytest.approx(2)
        assert (result["result"]["k"], result["result"]["m"]) == (2, 3)

    def test_characterize_explicit_fixed_points(self):
        """유한 척력 고정점 0 과 승수 목록"""
        document = {
            "h": 1.5,
            "fixed_points": [{"location": 1, "multiplier": -0.5}, {"location": -1, "multiplier": 0.25}],
            "repelling": 0,
        }
        result = AnalysisQueryProcessor.characterize(document)
        assert result["success"], result["error"]
        assert result["result"]["kind"] == "general"

    def test_characterize_malformed(self):
        """키가 빠진 문서는 입력 오류"""
        result = AnalysisQueryProcessor.characterize({"quadratic": {"lambda1": 0}})
        assert result["error_code"] == "polynomial_syntax"
        assert result["exit_code"] == 2

    def test_characterize_non_integer(self):
        """정수가 아닌 중복도"""
        document = {"h": 1, "fixed_points": [{"location": 0, "multiplier": 0.3}], "repelling": "infinity"}
        result = AnalysisQueryProcessor.characterize(document)
        assert result["error_code"] == "non_integer_multiplicity"

    def test_construct_invalid(self):
        """h = 0 구성 거부"""
        result = AnalysisQueryProcessor.construct_nonconvergent(0)
        assert result["error_code"] == "invalid_parameter"

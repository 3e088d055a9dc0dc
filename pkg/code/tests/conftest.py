"""
pytest 설정 파일

공통 fixture와 설정을 정의합니다.
"""

import math
import sys
import tempfile
from pathlib import Path

import pytest

# code/ 를 sys.path에 추가
sys.path.insert(0, str(Path(__file__).parent.parent))

from modules.constructions import nonconvergent_cubic, two_root_rep, unicritical_rep
from modules.newton_map import build_map

H_REF = complex(2, math.pi) / 4


@pytest.fixture(scope="session")
def test_data_dir():
    """테스트 데이터 디렉토리 픽스처"""
    current_dir = Path(__file__).parent
    test_data_dir = current_dir / "test_data"
    test_data_dir.mkdir(exist_ok=True)
    return test_data_dir


@pytest.fixture
def temp_dir():
    """임시 디렉토리 픽스처"""
    with tempfile.TemporaryDirectory() as tmp_dir:
        yield Path(tmp_dir)


@pytest.fixture
def ref_h():
    """기준 완화 매개변수 h = (2+πi)/4"""
    return H_REF


@pytest.fixture(scope="session")
def classical_quadratic():
    """z² − 1 의 고전 뉴턴 사상 (h = 1)"""
    return build_map(two_root_rep(1, 1), 1.0)


@pytest.fixture(scope="session")
def cubic_unity_map():
    """z³ − 1, h = (2+πi)/4"""
    return build_map(unicritical_rep(3), H_REF)


@pytest.fixture(scope="session")
def nonconvergent_half():
    """h = 0.5 에서 2-주기 초끌개 주기를 갖는 삼차식 구성"""
    return nonconvergent_cubic(0.5, "+")


# pytest 설정
def pytest_configure(config):
    """pytest 설정"""
    config.addinivalue_line(
        "markers", "integration: mark test as integration test"
    )
    config.addinivalue_line(
        "markers", "slow: mark test as slow running"
    )

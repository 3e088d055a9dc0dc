"""
테스트 모듈

이 패키지는 완화 뉴턴 사상 분석 도구의 각 모듈에 대한 pytest 테스트 코드를 포함합니다.

테스트 파일:
- test_poly_core.py: 다항식 연산, 아핀 켤레, 입력 문법
- test_polyroot.py: Aberth 근 계산과 중근 군집화
- test_newton_map.py: 사상 구성, 고정점/승수/지표, 임계점, 특성화
- test_dynamics.py: 궤도 판정과 수렴성 판정
- test_geometry.py: Julia 표본, 직선/대칭 판정, 끌림 영역 탐침
- test_constructions.py: 대표 다항식과 비수렴 삼차식 구성
- test_render.py: 끌림 영역 렌더링과 PPM/PNG 인코딩
- test_serialization.py: JSON 변환
- test_analysis_system.py: 공통 초기화와 하위 명령 처리
- test_cli.py: CLI 종료 코드와 JSON 출력
- test_logger.py: LoggerManager 테스트

실행 방법:
- 전체 테스트: uv run pytest code/tests/
- 느린 테스트 제외: uv run pytest code/tests/ -m "not slow"
- 특정 모듈 테스트: uv run pytest code/tests/test_newton_map.py
"""

__version__ = "0.1.0"

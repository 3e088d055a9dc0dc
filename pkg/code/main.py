"""
Streamlit 완화 뉴턴 WebUI

완화 뉴턴 사상 분석 시스템을 위한 Streamlit 웹 인터페이스입니다.

주요 기능:
- 사이드바 폼 (다항식 입력, h, 렌더링 설정)
- analyze / classify JSON 결과 표시
- 끌림 영역 이미지와 범례
- 비수렴 삼차식 구성

폼으로만 동작하며 확대/이동 같은 대화형 조작은 제공하지 않습니다.
"""

import sys
from datetime import datetime
from pathlib import Path

import pytz
import streamlit as st
from dotenv import load_dotenv

# 현재 스크립트의 디렉토리를 sys.path에 추가
script_dir = Path(__file__).parent.absolute()
if str(script_dir) not in sys.path:
    sys.path.insert(0, str(script_dir))

# 모듈 import
from modules import AnalysisSystemInitializer, AnalysisQueryProcessor
from modules.serialization import to_jsonable

# 환경변수 로드 (스크립트 디렉토리 기준)
load_dotenv(script_dir / '.env')

# 페이지 설정
st.set_page_config(
    page_title="완화 뉴턴 동역학 탐색기",
    page_icon="🌀",
    layout="wide",
    initial_sidebar_state="expanded"
)

st.markdown("""
<style>
    .stApp > header {
        background-color: transparent;
    }
    .verdict-box {
        padding: 0.8rem;
        border-radius: 0.6rem;
        margin-bottom: 1rem;
        border-left: 4px solid #4a6fa5;
        background: #eef3fa;
    }
</style>
""", unsafe_allow_html=True)

SOURCE_KINDS = {
    "클래스 생성기": "family",
    "인수분해 형태": "factored",
    "계수 (오름차순)": "coeffs",
}
PROJECT_ROOT = Path(AnalysisSystemInitializer.get_project_paths(Path(__file__).absolute())[0])


def current_kst_stamp() -> str:
    """파일 이름용 Asia/Seoul 타임스탬프"""
    return datetime.now(pytz.timezone('Asia/Seoul')).strftime("%Y%m%d_%H%M%S")


@st.cache_resource
def initialize_system(kind: str, text: str, h: str):
    """시스템 초기화 (입력별 캐시) - 공통 모듈 사용"""
    return AnalysisSystemInitializer.initialize_system(
        {kind: text},
        h,
        logger_name="StreamlitAnalysis",
        project_root=str(PROJECT_ROOT),
    )


def initialize_session_state():
    """세션 상태 초기화"""
    if "last_render" not in st.session_state:
        st.session_state.last_render = None


def render_sidebar() -> dict:
    with st.sidebar:
        st.header("🌀 입력")
        with st.form("map_form"):
            kind_label = st.selectbox("다항식 입력 방식", list(SOURCE_KINDS))
            text = st.text_input("다항식", value="unicritical:3",
                                 help="예: unicritical:3, (1^1,-1^2);1, -1,0,1")
            h = st.text_input("h", value="0.5+0.7853981634i")

            st.subheader("렌더링")
            center = st.text_input("중심", value="0")
            width = st.number_input("폭", min_value=1e-6, value=4.0)
            pixels = st.slider("해상도 (px)", min_value=100, max_value=800, value=400, step=50)
            budget = st.number_input("반복 예산", min_value=10, max_value=5000, value=1000, step=10)
            shading = st.radio("음영", ["flat", "by_iterations"], horizontal=True)
            submitted = st.form_submit_button("분석 실행")

        st.divider()
        with st.form("construct_form"):
            st.subheader("비수렴 삼차식")
            construct_h = st.text_input("h (|h−1| < 1)", value="0.5")
            sign = st.radio("부호", ["+", "-"], horizontal=True)
            construct = st.form_submit_button("구성")

    return {
        "submitted": submitted,
        "source": {SOURCE_KINDS[kind_label]: text},
        "h": h,
        "render": {"center": center, "width": width, "px_width": pixels, "px_height": pixels,
                   "budget": int(budget), "shading": shading},
        "construct": construct,
        "construct_h": construct_h,
        "sign": sign,
    }


def show_result(title: str, result: dict):
    if result["success"]:
        with st.expander(title, expanded=True):
            st.json(to_jsonable(result["result"]))
    else:
        st.error(f"{title} 실패 [{result['error_code']}]: {result['error']}")


def render_analysis(form: dict):
    (kind, text), = form["source"].items()
    processor = initialize_system(kind, text, form["h"])
    if processor is None:
        st.error("시스템 초기화에 실패했습니다. 다항식과 h 형식을 확인하세요.")
        return

    col1, col2 = st.columns([1, 1])
    with col1:
        classify = processor.process("classify", {"budget": 2000})
        if classify["success"]:
            st.markdown(f"<div class='verdict-box'><b>판정:</b> {classify['result']['status']}</div>",
                        unsafe_allow_html=True)
        show_result("고정점 / 승수 / 임계점", processor.process("analyze"))
        show_result("임계점 궤도", classify)

    with col2:
        out = PROJECT_ROOT / "data" / "renders" / f"webui_{current_kst_stamp()}.png"
        with st.spinner("끌림 영역 렌더링 중..."):
            rendered = processor.process("render", {**form["render"], "out": str(out)})
        if rendered["success"]:
            st.session_state.last_render = rendered["result"]["output"]
            st.image(st.session_state.last_render, caption=f"h = {form['h']}", use_container_width=True)
            st.caption(f"미결정 픽셀 {rendered['result']['sentinel_fraction']:.3%}, "
                       f"외래 주기 픽셀 {rendered['result']['cycle_fraction']:.3%}")
            with st.expander("범례"):
                st.json(to_jsonable(rendered["result"]["legend"]))
        else:
            st.error(f"렌더링 실패 [{rendered['error_code']}]: {rendered['error']}")


def main():
    """메인 함수"""
    initialize_session_state()
    st.title("🌀 완화 뉴턴 동역학 탐색기")
    st.caption("N_{h,p}(z) = z − h·p(z)/p′(z)")

    form = render_sidebar()
    if form["construct"]:
        show_result("비수렴 삼차식 구성",
                    AnalysisQueryProcessor.construct_nonconvergent(form["construct_h"], form["sign"]))
    if form["submitted"]:
        render_analysis(form)
    elif st.session_state.last_render:
        st.image(st.session_state.last_render, caption="마지막 렌더링")


if __name__ == "__main__":
    main()

# -*- coding: utf-8 -*-
"""
로그 유틸리티. 실행중인 "스크립트명.log" 파일과 stderr에 로그 출력.
사용법:
from modules.logger import LoggerManager

log = LoggerManager("NewtonMap")
log.info("로그 메시지 출력")
log.log_function_start("build_map", h=0.5)

모든 LoggerManager 인스턴스는 동일한 전역 로거를 공유합니다.
stdout은 JSON 결과 출력용이므로 콘솔 핸들러는 stderr를 사용합니다.
"""

import os
import sys
import logging
from datetime import datetime
from typing import Optional

import pytz


SEOUL_TZ = pytz.timezone("Asia/Seoul")


class CustomFormatter(logging.Formatter):
    """서울 시간대(Asia/Seoul)로 로그 포맷을 설정하는 커스텀 포매터"""
    def format(self, record):
        timestamp = datetime.fromtimestamp(record.created, tz=SEOUL_TZ).strftime("%y-%m-%d %H:%M:%S")
        return f"[{timestamp}] [{record.levelname}] {record.getMessage()}"


def _resolve_script_path(script_file_path: Optional[str]) -> str:
    """로그 파일 이름의 기준이 될 실행 스크립트 경로를 결정"""
    if script_file_path is None:
        import __main__
        if hasattr(__main__, '__file__'):
            script_file_path = __main__.__file__
        else:
            script_file_path = sys.argv[0] if sys.argv and sys.argv[0] else __file__
    return os.path.abspath(script_file_path)


def setup_logger(script_file_path=None, file_mode="w"):
    """
    로거를 설정하고 반환합니다.

    Args:
        script_file_path (str, optional): 스크립트 파일 경로. None이면 현재 실행중인 스크립트 경로 사용
        file_mode (str): 파일 핸들러 모드 ("w", "a" 등)

    Returns:
        logging.Logger: 설정된 로거 객체
    """
    logger = logging.getLogger("relaxed_newton")
    logger.setLevel(logging.INFO)

    # 기존 핸들러가 있다면 제거 (중복 방지)
    if logger.handlers:
        for handler in list(logger.handlers):
            handler.close()
        logger.handlers.clear()

    console_handler = logging.StreamHandler(sys.stderr)
    console_handler.setFormatter(CustomFormatter())
    logger.addHandler(console_handler)

    script_file_path = _resolve_script_path(script_file_path)
    script_name = os.path.splitext(os.path.basename(script_file_path))[0]
    script_dir = os.path.dirname(script_file_path)

    # 로그 파일이 logger.py의 이름으로 저장되는 것을 방지
    if script_name == 'logger':
        script_name = "relaxed_newton"

    log_file_path = os.path.join(script_dir, f"{script_name}.log")

    try:
        os.makedirs(script_dir, exist_ok=True)
        file_handler = logging.FileHandler(log_file_path, mode=file_mode, encoding='utf-8')
        file_handler.setFormatter(CustomFormatter())
        logger.addHandler(file_handler)
    except OSError:
        # 읽기 전용 위치에서 실행되는 경우 콘솔 로그만 남김
        pass

    logger.propagate = False
    return logger


# 전역 로거 초기화 (한 번만 실행)
_logger = None
_logger_initialized = False


def get_global_logger(file_mode: Optional[str] = None):
    """전역 로거를 반환합니다. 초기화되지 않았다면 초기화합니다."""
    global _logger, _logger_initialized

    if not _logger_initialized:
        mode = file_mode or os.getenv("RENEWT_LOG_FILE_MODE", "w")
        _logger = setup_logger(file_mode=mode)
        _logger_initialized = True

    return _logger


class LoggerManager:
    """로깅 관리 클래스"""

    def __init__(self, module_name: str = None, file_mode: Optional[str] = None):
        """
        LoggerManager 초기화

        Args:
            module_name (str, optional): 모듈 이름 (로그에 표시될 카테고리명)
            file_mode (str, optional): 로그 파일 모드. None이면 RENEWT_LOG_FILE_MODE 또는 "w"
        """
        self.module_name = module_name or "module"
        self.file_mode = file_mode or os.getenv("RENEWT_LOG_FILE_MODE", "w")
        self.logger = get_global_logger(self.file_mode)

    def _format(self, args) -> str:
        return f"[{self.module_name}] " + ' '.join(str(arg) for arg in args)

    def info(self, *args):
        """정보 레벨 로그"""
        self.logger.info(self._format(args))

    def debug(self, *args):
        """디버그 레벨 로그"""
        self.logger.debug(self._format(args))

    def warning(self, *args):
        """경고 레벨 로그"""
        self.logger.warning(self._format(args))

    def error(self, *args):
        """오류 레벨 로그"""
        self.logger.error(self._format(args))

    def critical(self, *args):
        """심각한 오류 레벨 로그"""
        self.logger.critical(self._format(args))

    def log_function_start(self, function_name: str, **kwargs):
        """함수 시작 로그"""
        params = ', '.join([f"{k}={v}" for k, v in kwargs.items()])
        self.info(f"📍 {function_name} 시작" + (f" - 매개변수: {params}" if params else ""))

    def log_function_end(self, function_name: str, result=None):
        """함수 종료 로그"""
        if result is not None:
            self.info(f"✅ {function_name} 완료 - 결과: {result}")
        else:
            self.info(f"✅ {function_name} 완료")

    def log_error(self, function_name: str, error: Exception):
        """에러 로그"""
        self.error(f"❌ {function_name} 오류: {str(error)}")

    def log_step(self, step_name: str, details: str = None):
        """단계별 진행 로그"""
        if details:
            self.info(f"🔄 {step_name}: {details}")
        else:
            self.info(f"🔄 {step_name}")

    def log_success(self, message: str):
        """성공 로그"""
        self.info(f"✅ {message}")

    def log_warning_with_icon(self, message: str):
        """경고 로그 (아이콘 포함)"""
        self.warning(f"⚠️ {message}")

    def log_error_with_icon(self, message: str):
        """오류 로그 (아이콘 포함)"""
        self.error(f"❌ {message}")

    @staticmethod
    def get_global_logger():
        """전역 로거 반환 (기존 호환성)"""
        return get_global_logger()

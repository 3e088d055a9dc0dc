"""
JSON 직렬화 모듈

- 복소수 → {"re": float, "im": float}, 무한원점 → "infinity"
- numpy 스칼라/배열 → 파이썬 숫자/리스트
- to_dict() 를 가진 객체 → 그 dict
- float 는 파이썬 repr (최단 왕복 표현, 필요 시 17 유효숫자) 그대로 출력
"""

import cmath
import dataclasses
import json
from fractions import Fraction
from typing import Any

import numpy as np

from .errors import PolynomialSyntaxError
from .poly_core import parse_complex

INFINITY_TOKEN = "infinity"


def to_jsonable(obj: Any) -> Any:
    if obj is None or isinstance(obj, (bool, str, int)):
        return obj
    if isinstance(obj, np.bool_):
        return bool(obj)
    if isinstance(obj, np.integer):
        return int(obj)
    if isinstance(obj, (float, np.floating)):
        return float(obj)
    if isinstance(obj, (complex, np.complexfloating)):
        z = complex(obj)
        if cmath.isinf(z):
            return INFINITY_TOKEN
        return {"re": z.real, "im": z.imag}
    if isinstance(obj, Fraction):
        return f"{obj.numerator}/{obj.denominator}"
    if isinstance(obj, np.ndarray):
        return [to_jsonable(v) for v in obj.tolist()]
    if hasattr(obj, "to_dict"):
        return to_jsonable(obj.to_dict())
    if dataclasses.is_dataclass(obj) and not isinstance(obj, type):
        return to_jsonable(dataclasses.asdict(obj))
    if isinstance(obj, dict):
        return {str(k): to_jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple, set)):
        return [to_jsonable(v) for v in obj]
    raise TypeError(f"JSON 으로 변환할 수 없는 타입: {type(obj).__name__}")


def complex_from_json(value: Any) -> complex:
    """to_jsonable 의 복소수 표현을 되돌립니다 ("a+bi" 문자열과 숫자도 허용)"""
    if isinstance(value, str):
        if value == INFINITY_TOKEN:
            return complex(float("inf"), 0.0)
        return parse_complex(value)
    if isinstance(value, dict) and "re" in value:
        return complex(float(value["re"]), float(value.get("im", 0.0)))
    if isinstance(value, (int, float, complex)) and not isinstance(value, bool):
        return complex(value)
    raise PolynomialSyntaxError(f"복소수 JSON 표현이 아닙니다: {value!r}")


def dumps(obj: Any) -> str:
    """정렬된 키, 들여쓰기 2 의 결정적 JSON 문자열"""
    return json.dumps(to_jsonable(obj), sort_keys=True, indent=2, ensure_ascii=False, allow_nan=True)

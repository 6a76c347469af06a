"""
JSON utilities for safe serialization of run artifacts
"""
import json
import math
from dataclasses import is_dataclass, asdict
from enum import Enum
from typing import Any

import numpy as np
from pydantic import BaseModel


def to_dict(value: Any) -> Any:
    """
    Convert any value to a dict/primitive structure suitable for JSON serialization.
    Handles dataclasses, Pydantic models, numpy arrays and scalars, Enums and nested structures.

    Args:
        value: Any value to convert

    Returns:
        Dict, list, or primitive value ready for JSON serialization
    """
    if value is None:
        return None
    elif isinstance(value, (str, int, float, bool)):
        return value
    elif isinstance(value, np.generic):
        return value.item()
    elif isinstance(value, np.ndarray):
        return [to_dict(item) for item in value.tolist()]
    elif isinstance(value, Enum):
        return value.value
    elif isinstance(value, dict):
        return {str(k): to_dict(v) for k, v in value.items()}
    elif isinstance(value, (list, tuple)):
        return [to_dict(item) for item in value]
    elif is_dataclass(value):
        return to_dict(asdict(value))
    elif hasattr(value, 'model_dump'):
        return to_dict(value.model_dump())
    elif hasattr(value, '__dict__'):
        return {k: to_dict(v) for k, v in value.__dict__.items() if not k.startswith('_')}
    else:
        return str(value)


def _finite_or_text(value: Any) -> Any:
    """JSON has no inf/nan; non-finite floats are written as strings"""
    if isinstance(value, float) and not math.isfinite(value):
        return repr(value)
    if isinstance(value, dict):
        return {k: _finite_or_text(v) for k, v in value.items()}
    if isinstance(value, list):
        return [_finite_or_text(v) for v in value]
    return value


def safe_json_dumps(obj: Any, **kwargs) -> str:
    """
    Safely serialize objects to JSON, using Pydantic's built-in serialization when available
    """
    if isinstance(obj, BaseModel):
        return obj.model_dump_json(**kwargs)

    def default_serializer(o):
        if isinstance(o, BaseModel):
            return o.model_dump()
        if isinstance(o, Enum):
            return o.value
        if isinstance(o, (np.ndarray, np.generic)):
            return to_dict(o)
        if is_dataclass(o):
            return to_dict(o)
        if hasattr(o, '__dict__'):
            return o.__dict__
        return str(o)

    return json.dumps(_finite_or_text(to_dict(obj)), default=default_serializer, allow_nan=False, **kwargs)

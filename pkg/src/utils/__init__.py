"""
工具函数模块

提供有理数解析与格式化、错误类型、运行配置和日志配置
"""

from .config import Settings, load_settings
from .errors import (
    ConsistencyError,
    DataFileError,
    DegeneratePairingError,
    InfeasibleError,
    MissingParameterError,
    NOBodyError,
    NotBigError,
    ParameterRangeError,
    UnboundedError,
    UnsupportedFamilyError,
    ZariskiError,
)
from .helpers import format_class, format_rational, format_vector, parse_rational, parse_rational_list, setup_logging

__all__ = [
    'Settings', 'load_settings',
    'NOBodyError', 'InfeasibleError', 'UnboundedError', 'DegeneratePairingError',
    'MissingParameterError', 'ZariskiError', 'NotBigError', 'ParameterRangeError',
    'UnsupportedFamilyError', 'ConsistencyError', 'DataFileError',
    'parse_rational', 'parse_rational_list', 'format_rational', 'format_vector', 'format_class', 'setup_logging',
]

"""
运行配置模块

从环境变量读取线程数、数据目录和随机种子
"""

import os
from dataclasses import dataclass
from pathlib import Path
from typing import Mapping, Optional

from .errors import NOBodyError

DEFAULT_DATA_DIR = Path(__file__).resolve().parent.parent / "data"
DEFAULT_SEED = 20240601


@dataclass(frozen=True)
class Settings:
    """运行配置"""

    threads: int = 1
    data_dir: Path = DEFAULT_DATA_DIR
    seed: int = DEFAULT_SEED


def load_settings(environ: Optional[Mapping[str, str]] = None) -> Settings:
    """
    从环境变量加载配置

    Args:
        environ: 环境变量映射，默认os.environ

    Returns:
        Settings: 配置对象
    """
    environ = os.environ if environ is None else environ
    try:
        threads = int(environ.get("NOBODY_THREADS", "1"))
        seed = int(environ.get("NOBODY_SEED", str(DEFAULT_SEED)))
    except ValueError as e:
        raise NOBodyError(f"环境变量格式错误: {str(e)}")
    if threads < 1:
        raise NOBodyError(f"线程数必须为正整数: {threads}")
    data_dir = Path(environ.get("NOBODY_DATA_DIR", str(DEFAULT_DATA_DIR)))
    return Settings(threads=threads, data_dir=data_dir, seed=seed)

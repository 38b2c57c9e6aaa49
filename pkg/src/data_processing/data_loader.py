"""
数据加载器模块

从数据目录读取曲面模型与爆破塔的JSON数据文件
"""

import json
import logging
from pathlib import Path
from typing import Dict, List, Optional, Sequence, Union

from utils.config import load_settings
from utils.errors import DataFileError

logger = logging.getLogger(__name__)

SURFACE_KEYS = ('name', 'basis', 'pairing')
TOWER_KEYS = ('family', 'parameters', 'stages', 'ledger')


class DataLoader:
    """模型数据加载器"""

    def __init__(self, data_dir: Optional[Union[str, Path]] = None):
        self.data_dir = Path(data_dir) if data_dir is not None else load_settings().data_dir
        self.supported_formats = ['.json']
        self._cache: Dict[Path, Dict] = {}

    def load_from_file(self, file_path: Union[str, Path]) -> Dict:
        """
        从文件加载JSON数据

        Args:
            file_path: 文件路径

        Returns:
            Dict: 解析后的数据
        """
        path = Path(file_path)
        if path.suffix.lower() not in self.supported_formats:
            raise DataFileError(f"不支持的文件格式: {path.suffix}")
        if path in self._cache:
            return self._cache[path]
        if not path.exists():
            raise DataFileError(f"数据文件不存在: {path}")
        try:
            with open(path, 'r', encoding='utf-8') as f:
                payload = json.load(f)
        except json.JSONDecodeError as e:
            raise DataFileError(f"JSON解析失败: {path}: {str(e)}")
        logger.debug("已加载数据文件 %s", path)
        self._cache[path] = payload
        return payload

    def _load_kind(self, kind: str, name: str, required: Sequence[str]) -> Dict:
        payload = self.load_from_file(self.data_dir / kind / f"{name}.json")
        missing = [k for k in required if k not in payload]
        if missing:
            raise DataFileError(f"{kind}/{name}.json 缺少字段: {missing}")
        return payload

    def load_surface(self, name: str) -> Dict:
        """
        加载曲面模型数据

        Args:
            name: 模型名，例如 "genus2_jacobian"

        Returns:
            Dict: 模型数据
        """
        return self._load_kind('surfaces', name, SURFACE_KEYS)

    def load_tower(self, name: str) -> Dict:
        """
        加载爆破塔数据

        Args:
            name: 塔名，例如 "cxjac_tower"

        Returns:
            Dict: 塔数据
        """
        return self._load_kind('towers', name, TOWER_KEYS)

    def list_models(self, kind: str) -> List[str]:
        """列出数据目录中某类模型的名称"""
        folder = self.data_dir / kind
        if not folder.exists():
            return []
        return sorted(p.stem for p in folder.glob('*.json'))

    def validate_surface_data(self, payload: Dict) -> bool:
        """
        验证曲面模型数据格式

        Args:
            payload: 模型数据

        Returns:
            bool: 是否为有效的曲面数据
        """
        try:
            if any(k not in payload for k in SURFACE_KEYS):
                return False
            n = len(payload['basis'])
            pairing = payload['pairing']
            if len(pairing) != n or any(len(row) != n for row in pairing):
                return False
            return all(str(pairing[i][j]) == str(pairing[j][i]) for i in range(n) for j in range(n))
        except (TypeError, KeyError):
            return False

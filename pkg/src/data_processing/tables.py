"""
表格导出模块

把塔的限制表与对称切片的交数表整理为 pandas DataFrame，数值写成 "p/q" 字符串
"""

import logging
from pathlib import Path
from typing import Optional, Union

import pandas as pd

from utils.helpers import format_class, format_rational

logger = logging.getLogger(__name__)


def restriction_table(tower, stage_name: Optional[str] = None) -> pd.DataFrame:
    """
    塔某一级的限制表

    Args:
        tower: 爆破塔
        stage_name: 级名，默认最高一级

    Returns:
        pd.DataFrame: 行为基元素，列为素分量，单元格为限制类
    """
    stage = tower.stage(stage_name) if stage_name else tower.top
    columns = [comp.name for comp in stage.components]
    rows = []
    for i, name in enumerate(stage.basis):
        rows.append([format_class(comp.restriction[i], comp.surface.basis) for comp in stage.components])
    df = pd.DataFrame(rows, index=list(stage.basis), columns=columns)
    df.index.name = stage.name
    logger.debug("限制表 %s/%s: %d×%d", tower.family, stage.name, len(rows), len(columns))
    return df


def intersection_table(cones=None) -> pd.DataFrame:
    """
    有效生成元 (列) 与 nef 生成元 (行) 的交数表

    Args:
        cones: P2Blow7Cones，默认计算对称切片的锥数据

    Returns:
        pd.DataFrame: 8×7 交数表
    """
    if cones is None:
        from surface import p2blow7_symmetric_cones
        cones = p2blow7_symmetric_cones()
    rows = [[format_rational(v) for v in row] for row in cones.intersection_table]
    return pd.DataFrame(rows, index=list(cones.row_names), columns=list(cones.column_names))


def table_to_csv(df: pd.DataFrame, path: Optional[Union[str, Path]] = None, index: bool = True) -> str:
    """
    导出CSV；给出路径时同时写入文件

    Returns:
        str: CSV文本
    """
    text = df.to_csv(index=index, lineterminator="\n")
    if path is not None:
        Path(path).write_text(text, encoding="utf-8")
        logger.info("已写入 %s", path)
    return text

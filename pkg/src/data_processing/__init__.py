"""
数据导入与表格导出模块

提供曲面模型与爆破塔JSON数据的加载，以及限制表、交数表的导出
"""

from .data_loader import DataLoader
from .tables import intersection_table, restriction_table, table_to_csv

__all__ = ['DataLoader', 'restriction_table', 'intersection_table', 'table_to_csv']

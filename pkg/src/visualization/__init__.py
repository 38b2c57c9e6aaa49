"""
可视化模块

NO 体、截面与体积曲线的 plotly 图表数据
"""

from .plots import BodyPlotter

__all__ = ['BodyPlotter']

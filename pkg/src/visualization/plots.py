"""
可视化模块

为 NO 体、截面多边形与体积曲线生成 plotly 图表数据 (JSON)，不做渲染
"""

import json
import math
from fractions import Fraction
from typing import Dict, List, Optional, Sequence

import numpy as np
import pandas as pd
import plotly.graph_objects as go

from ratgeom import VPoly, boundary_triangles
from utils.helpers import parse_rational


def _floats(values: Sequence[Fraction]) -> List[float]:
    return [float(a) for a in values]


def _polygon_ring(polygon: VPoly) -> List[Sequence[Fraction]]:
    """二维多边形顶点按极角排序成闭合环"""
    points = list(polygon.vertices)
    if len(points) < 3:
        return points
    cx = sum(p[0] for p in points) / len(points)
    cy = sum(p[1] for p in points) / len(points)
    points.sort(key=lambda p: math.atan2(float(p[1] - cy), float(p[0] - cx)))
    return points + points[:1]


class BodyPlotter:
    """NO 体图表数据生成器"""

    def __init__(self):
        self.color_palette = ['#1f77b4', '#ff7f0e', '#2ca02c', '#d62728', '#9467bd']
        self.template = 'plotly_white'

    def plot_body(self, body, title: Optional[str] = None) -> go.Figure:
        """
        三维体的边界网格与顶点

        Args:
            body: NOBody (三维)
            title: 图表标题

        Returns:
            plotly图表对象
        """
        verts, triangles = boundary_triangles(body.vrep)
        coords = np.array([_floats(v) for v in verts])
        tri = np.array(triangles, dtype=int).reshape(-1, 3)
        names = list(body.variables)

        fig = go.Figure()
        fig.add_trace(go.Mesh3d(
            x=coords[:, 0], y=coords[:, 1], z=coords[:, 2],
            i=tri[:, 0], j=tri[:, 1], k=tri[:, 2],
            opacity=0.5,
            color=self.color_palette[0],
            name='体'
        ))
        fig.add_trace(go.Scatter3d(
            x=coords[:, 0], y=coords[:, 1], z=coords[:, 2],
            mode='markers',
            marker=dict(size=4, color=self.color_palette[3]),
            text=[", ".join(str(a) for a in v) for v in verts],
            name='顶点'
        ))
        fig.update_layout(
            title=title or body.label,
            scene=dict(xaxis_title=names[0], yaxis_title=names[1], zaxis_title=names[2]),
            template=self.template
        )
        return fig

    def plot_slice(self, polygon: VPoly, t: Fraction, title: Optional[str] = None) -> go.Figure:
        """截面多边形"""
        ring = _polygon_ring(polygon)
        fig = go.Figure()
        fig.add_trace(go.Scatter(
            x=_floats([p[0] for p in ring]),
            y=_floats([p[1] for p in ring]),
            mode='lines+markers',
            fill='toself',
            name=f't = {t}',
            line=dict(color=self.color_palette[1], width=2)
        ))
        fig.update_layout(
            title=title or f'截面 t = {t}',
            xaxis_title='x',
            yaxis_title='y',
            template=self.template
        )
        return fig

    def plot_curve(self, df: pd.DataFrame, value_column: str = 'vol',
                   title: str = '体积曲线') -> go.Figure:
        """
        (t, 值) 曲线，列取值为 "p/q" 字符串

        Args:
            df: volume_curve 或 slice_area_curve 的输出
            value_column: 数值列名
            title: 图表标题

        Returns:
            plotly图表对象
        """
        ts = [float(parse_rational(v)) for v in df['t']]
        values = [float(parse_rational(v)) for v in df[value_column]]
        fig = go.Figure()
        fig.add_trace(go.Scatter(
            x=ts,
            y=values,
            mode='lines+markers',
            name=value_column,
            line=dict(color=self.color_palette[2], width=2)
        ))
        fig.update_layout(
            title=title,
            xaxis_title='t',
            yaxis_title=value_column,
            hovermode='x unified',
            template=self.template
        )
        return fig

    @staticmethod
    def to_json(fig: go.Figure) -> str:
        """排序键的稳定 JSON"""
        return json.dumps(json.loads(fig.to_json()), sort_keys=True)

    @staticmethod
    def to_dict(fig: go.Figure) -> Dict:
        return json.loads(fig.to_json())

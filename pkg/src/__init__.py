"""
Fujita–Zariski 分解与 Newton–Okounkov 体工具

主要功能模块：
- ratgeom: 精确有理多面体内核
- pwl: 分段线性表达式与分支胞腔
- surface: 曲面模型、Zariski 分解与 NO 多边形
- threefold: 三维模型族、爆破塔、σ-分解与体积
- okounkov: 三维体、四维粘合体、截面与 Seshadri 常数
- cli: 命令行与验收检查
- data_processing: 数据加载与表格导出
- visualization: 图表数据
- utils: 工具函数
"""

__version__ = "0.1.0"
__author__ = "NObody Exact Toolkit"

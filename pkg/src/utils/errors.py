"""
错误类型模块

所有异常都继承自ValueError，调用方可以统一捕获
"""


class NOBodyError(ValueError):
    """工具包异常基类"""


class InfeasibleError(NOBodyError):
    """不等式系统无可行解"""


class UnboundedError(NOBodyError):
    """多面体无界，无法计算体积"""


class DegeneratePairingError(NOBodyError):
    """配对矩阵在相关子空间上退化"""


class MissingParameterError(NOBodyError):
    """求值时缺少参数"""


class ZariskiError(NOBodyError):
    """Zariski分解不动点迭代失败"""


class NotBigError(NOBodyError):
    """除子不是大除子"""


class ParameterRangeError(NOBodyError):
    """参数超出有效范围"""


class UnsupportedFamilyError(NOBodyError):
    """该模型族不支持此操作"""


class ConsistencyError(NOBodyError):
    """两条独立计算路径结果不一致"""


class DataFileError(NOBodyError):
    """数据文件格式错误"""

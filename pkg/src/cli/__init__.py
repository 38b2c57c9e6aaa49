"""
命令行模块

argparse 子命令与分层验收检查
"""

from .checks import TIERS, CheckResult, all_checks, format_report, run_checks
from .commands import build_parser, main, run

__all__ = ['run', 'main', 'build_parser', 'run_checks', 'all_checks', 'format_report', 'CheckResult', 'TIERS']

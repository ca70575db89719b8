#!/usr/bin/env python3
# -*- coding: utf-8 -*-
"""
安装脚本
"""
import re
from pathlib import Path

from setuptools import setup, find_packages


def read_version() -> str:
    """从 src/config.py 中读取版本号，避免安装时导入 numpy"""
    text = (Path(__file__).parent / 'src' / 'config.py').read_text(encoding='utf-8')
    match = re.search(r'version: str = "([^"]+)"', text)
    return match.group(1) if match else "0.0.0"


setup(
    name="vortexff",
    version=read_version(),
    description="涡旋光子与类氢原子散射的形状因子和碰撞参数剖面计算",
    packages=find_packages(exclude=("tests", "tests.*")),
    install_requires=[
        "numpy>=1.24.0",
        "scipy>=1.10.0",
    ],
    extras_require={
        "test": ["pytest>=7.0"],
    },
    python_requires=">=3.8",
    entry_points={
        "console_scripts": [
            "vortexff=src.cli:main",
        ],
    },
)

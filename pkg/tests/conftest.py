# -*- coding: utf-8 -*-
"""测试公共设置：把仓库根目录加入 sys.path，使 src 可作为包导入"""
import sys
from pathlib import Path

import pytest

ROOT = Path(__file__).resolve().parent.parent
if str(ROOT) not in sys.path:
    sys.path.insert(0, str(ROOT))

from src.atom import AtomicState  # noqa: E402


@pytest.fixture
def ground_state():
    return AtomicState(1, 0, 0)

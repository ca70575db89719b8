#!/usr/bin/env python3
# -*- coding: utf-8 -*-
"""
文本处理工具函数
"""
import math
import re
from typing import List, Optional


# 注释：行首或空白之后的 # 或 ; 开始，值内部的 # 和 ; 保留
COMMENT_PATTERN = re.compile(r"(?:^|\s)[#;].*$")

_TRUE_WORDS = {'true', 'yes', 'on', '1'}
_FALSE_WORDS = {'false', 'no', 'off', '0'}


def strip_comment(text: str) -> str:
    """
    移除行内注释和首尾空白

    Args:
        text: 原始文本行

    Returns:
        去掉注释后的文本
    """
    if not text:
        return ""
    return COMMENT_PATTERN.sub("", text).strip()


def safe_float(value: str, default: float = float('nan')) -> float:
    """
    安全地将字符串转换为浮点数

    Args:
        value: 要转换的字符串
        default: 转换失败时的默认值，默认为NaN

    Returns:
        转换后的浮点数，失败时返回default
    """
    try:
        return float(value)
    except (ValueError, TypeError, AttributeError):
        return default


def safe_int(value: str) -> Optional[int]:
    """整数字符串转换，允许 '3.0' 这样的整数值浮点写法；失败返回 None"""
    number = safe_float(value)
    if not math.isfinite(number) or number != int(number):
        return None
    return int(number)


def parse_bool(value: str) -> Optional[bool]:
    """true/false、yes/no、on/off、1/0；无法识别返回 None"""
    word = value.strip().lower()
    if word in _TRUE_WORDS:
        return True
    if word in _FALSE_WORDS:
        return False
    return None


def split_list(value: str) -> List[str]:
    """按逗号拆分列表，忽略空项"""
    return [item.strip() for item in value.split(",") if item.strip()]


def format_significant(value, digits: int = 17) -> str:
    """
    把数值格式化为固定有效位数的文本

    整数和布尔值原样输出，浮点数用 %.{digits}g
    """
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, int):
        return str(value)
    return f"{float(value):.{digits}g}"

#!/usr/bin/env python3
# -*- coding: utf-8 -*-
"""
工具函数模块
"""
from .text_utils import format_significant, parse_bool, safe_float, safe_int, split_list, strip_comment

__all__ = ['format_significant', 'parse_bool', 'safe_float', 'safe_int', 'split_list', 'strip_comment']

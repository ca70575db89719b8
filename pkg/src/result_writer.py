#!/usr/bin/env python3
# -*- coding: utf-8 -*-
"""
结果保存模块
把运行结果写成 CSV（# 开头的元数据头和尾注）或单个 JSON 文档

输出中不含时间戳，相同输入得到逐字节相同的文件
"""
import csv
import io
import json
import logging
import os
from dataclasses import dataclass, field
from typing import Any, Dict, List, Sequence

try:
    from .config import config
    from .utils.text_utils import format_significant
except ImportError:
    from config import config
    from utils.text_utils import format_significant


@dataclass
class RunResult:
    """一次运行的表格结果"""
    columns: List[str]
    rows: List[Sequence[Any]]
    metadata: Dict[str, Any] = field(default_factory=dict)
    footer: Dict[str, Any] = field(default_factory=dict)

    def column(self, name: str) -> List[Any]:
        index = self.columns.index(name)
        return [row[index] for row in self.rows]


def _metadata_text(value: Any) -> str:
    if isinstance(value, (dict, list, tuple)):
        return json.dumps(value, sort_keys=True, ensure_ascii=False, default=str)
    if isinstance(value, float):
        return format_significant(value, config.csv_significant_digits)
    return str(value)


def _json_value(value: Any) -> Any:
    if isinstance(value, complex):
        return [value.real, value.imag]
    if isinstance(value, dict):
        return {k: _json_value(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_json_value(v) for v in value]
    return value


class ResultWriter:
    """结果保存类"""

    def __init__(self, digits: int = None):
        self.logger = logging.getLogger(__name__)
        self.digits = digits or config.csv_significant_digits

    def to_csv(self, result: RunResult) -> str:
        """
        生成 CSV 文本

        Args:
            result: 运行结果

        Returns:
            CSV 文本，行尾为 \\n
        """
        buffer = io.StringIO()
        for key, value in result.metadata.items():
            if key == 'config':
                buffer.write("# config:\n")
                for line in str(value).splitlines():
                    buffer.write(f"#   {line}\n" if line else "#\n")
            else:
                buffer.write(f"# {key}: {_metadata_text(value)}\n")

        writer = csv.writer(buffer, lineterminator="\n")
        writer.writerow(result.columns)
        for row in result.rows:
            writer.writerow([format_significant(v, self.digits) for v in row])

        for key, value in result.footer.items():
            buffer.write(f"# {key}: {_metadata_text(value)}\n")
        return buffer.getvalue()

    def to_json(self, result: RunResult) -> str:
        """生成 JSON 文本：version、metadata、columns、按列排列的 data 和 footer"""
        document = {
            'version': config.version,
            'metadata': _json_value(result.metadata),
            'columns': list(result.columns),
            'data': {name: [_json_value(row[i]) for row in result.rows]
                     for i, name in enumerate(result.columns)},
            'footer': _json_value(result.footer),
        }
        return json.dumps(document, indent=2, ensure_ascii=False) + "\n"

    def save(self, result: RunResult, filepath: str, fmt: str = None) -> str:
        """
        保存结果文件

        Args:
            result: 运行结果
            filepath: 保存路径，父目录不存在时自动创建
            fmt: 'csv' 或 'json'，默认 config.default_output_format

        Returns:
            写入的路径
        """
        fmt = fmt or config.default_output_format
        if fmt == 'csv':
            text = self.to_csv(result)
        elif fmt == 'json':
            text = self.to_json(result)
        else:
            raise ValueError(f"未知的输出格式: {fmt}")

        os.makedirs(os.path.dirname(filepath) if os.path.dirname(filepath) else '.', exist_ok=True)
        try:
            with open(filepath, 'w', encoding='utf-8', newline='') as f:
                f.write(text)
        except IOError as e:
            self.logger.error(f"写入文件失败: {e}")
            raise

        self.logger.info(f"成功保存 {len(result.rows)} 行结果到: {filepath} ({fmt})")
        return filepath

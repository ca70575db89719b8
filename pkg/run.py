#!/usr/bin/env python3
# -*- coding: utf-8 -*-
"""
运行入口文件，参数与 vortexff 命令相同
"""
import sys

from src.cli import main

if __name__ == "__main__":
    sys.exit(main())

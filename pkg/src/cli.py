#!/usr/bin/env python3
# -*- coding: utf-8 -*-
"""
命令行入口

    vortexff run <config> [--output PATH] [--format csv|json] [--threads N]
                          [--grid-nodes N] [--grid-levels N]
    vortexff selftest [--quick]
    vortexff print-config-template <mode>

退出码：0 成功，2 配置或定义域错误，3 数值失败或自检失败，4 网格覆盖不足，1 其他异常
"""
import argparse
import dataclasses
import logging
import os
import sys
from typing import List, Optional

try:
    from .config import config
    from .errors import VortexFFError
    from .result_writer import ResultWriter
    from .run_config import MODES, ConfigParser, RunConfig, config_template, load_config
    from .runner import Runner
    from .selftest import run_selftest
except ImportError:
    from config import config
    from errors import VortexFFError
    from result_writer import ResultWriter
    from run_config import MODES, ConfigParser, RunConfig, config_template, load_config
    from runner import Runner
    from selftest import run_selftest


LOG_FORMAT = '%(asctime)s - %(name)s - %(levelname)s - %(message)s'
DATE_FORMAT = '%Y-%m-%d %H:%M:%S'

EXIT_OK = 0
EXIT_UNEXPECTED = 1
EXIT_SELFTEST_FAILED = 3


def setup_logging(level: str = 'INFO', log_file: Optional[str] = None):
    """日志输出到 stderr，指定 log_file 时同时追加写入文件"""
    handlers = [logging.StreamHandler(sys.stderr)]
    if log_file:
        directory = os.path.dirname(log_file)
        if directory:
            os.makedirs(directory, exist_ok=True)
        handlers.append(logging.FileHandler(log_file, encoding='utf-8', mode='a'))
    logging.basicConfig(
        level=getattr(logging, level.upper(), logging.INFO),
        format=LOG_FORMAT,
        datefmt=DATE_FORMAT,
        handlers=handlers,
        force=True,
    )


def exception_handler(exc_type, exc_value, exc_traceback):
    """全局异常处理器"""
    if issubclass(exc_type, KeyboardInterrupt):
        sys.__excepthook__(exc_type, exc_value, exc_traceback)
        return

    logger = logging.getLogger(__name__)
    logger.critical("=" * 60, exc_info=(exc_type, exc_value, exc_traceback))
    logger.critical("程序因未捕获的异常而退出")
    logger.critical(f"异常类型: {exc_type.__name__}")
    logger.critical(f"异常信息: {exc_value}")
    logger.critical("=" * 60)

    for handler in logging.getLogger().handlers:
        if isinstance(handler, logging.FileHandler):
            handler.flush()

    sys.__excepthook__(exc_type, exc_value, exc_traceback)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog='vortexff',
        description='涡旋光子与原子散射的形状因子计算',
    )
    parser.add_argument('--version', action='version', version=f'%(prog)s {config.version}')
    sub = parser.add_subparsers(dest='command', required=True)

    run = sub.add_parser('run', help='按配置文件执行计算')
    run.add_argument('config', help='配置文件路径')
    run.add_argument('--output', help=f'结果文件路径（默认取配置中的 [output] path 或 {config.default_output_path}）')
    run.add_argument('--format', choices=('csv', 'json'), help='输出格式')
    run.add_argument('--threads', type=int, help=f'工作线程数（默认读取 {config.threads_env_var}，否则为 1）')
    run.add_argument('--grid-nodes', type=int, help='覆盖 [grid] nodes_per_axis')
    run.add_argument('--grid-levels', type=int, help='覆盖 [grid] refinement_levels')
    run.add_argument('--log-level', default='INFO', choices=('DEBUG', 'INFO', 'WARNING', 'ERROR'))
    run.add_argument('--log-file', help='同时把日志追加写入该文件')

    selftest = sub.add_parser('selftest', help='用解析结果检查数值组件')
    selftest.add_argument('--quick', action='store_true', help='使用更小的网格')
    selftest.add_argument('--log-level', default='WARNING', choices=('DEBUG', 'INFO', 'WARNING', 'ERROR'))

    template = sub.add_parser('print-config-template', help='打印某个模式的带注释配置模板')
    template.add_argument('mode', choices=MODES)
    return parser


def apply_overrides(cfg: RunConfig, args: argparse.Namespace) -> RunConfig:
    """
    把命令行覆盖项写回配置，结果文件回显的是实际生效的配置

    Raises:
        ConfigError: 覆盖后的配置不合法
    """
    grid_changes = {}
    if args.grid_nodes is not None:
        grid_changes['nodes_per_axis'] = args.grid_nodes
    if args.grid_levels is not None:
        grid_changes['refinement_levels'] = args.grid_levels
    output_changes = {}
    if args.output is not None:
        output_changes['path'] = args.output
    if args.format is not None:
        output_changes['format'] = args.format

    if not grid_changes and not output_changes:
        return cfg
    cfg = dataclasses.replace(
        cfg,
        grid=dataclasses.replace(cfg.grid, **grid_changes),
        output=dataclasses.replace(cfg.output, **output_changes),
    )
    ConfigParser().validate(cfg)
    return cfg


def output_path(cfg: RunConfig) -> str:
    if cfg.output.path:
        return cfg.output.path
    root, _ = os.path.splitext(config.default_output_path)
    return f"{root}.{cfg.output.format}"


def cmd_run(args: argparse.Namespace) -> int:
    logger = logging.getLogger(__name__)
    cfg = apply_overrides(load_config(args.config), args)
    workers = config.resolve_threads(args.threads)
    logger.info(f"[运行] 配置 {args.config}，模式 {cfg.mode}，线程数 {workers}")

    result = Runner(cfg, workers).run()
    ResultWriter().save(result, output_path(cfg), cfg.output.format)
    return EXIT_OK


def cmd_selftest(args: argparse.Namespace) -> int:
    results = run_selftest(quick=args.quick)
    for result in results:
        print(result.line())
    failed = [r.name for r in results if not r.passed]
    if failed:
        logging.getLogger(__name__).error(f"[自检] {len(failed)} 项失败: {', '.join(failed)}")
        return EXIT_SELFTEST_FAILED
    return EXIT_OK


def cmd_template(args: argparse.Namespace) -> int:
    sys.stdout.write(config_template(args.mode))
    return EXIT_OK


COMMANDS = {
    'run': cmd_run,
    'selftest': cmd_selftest,
    'print-config-template': cmd_template,
}


def main(argv: Optional[List[str]] = None) -> int:
    """主函数，返回退出码"""
    sys.excepthook = exception_handler
    args = build_parser().parse_args(argv)
    setup_logging(getattr(args, 'log_level', 'WARNING'), getattr(args, 'log_file', None))
    logger = logging.getLogger(__name__)

    try:
        return COMMANDS[args.command](args)
    except VortexFFError as e:
        logger.error(f"{type(e).__name__}: {e}")
        return e.exit_code
    except Exception as e:
        logger.critical(f"未预期的异常: {type(e).__name__}: {e}", exc_info=True)
        return EXIT_UNEXPECTED


if __name__ == '__main__':
    sys.exit(main())

#!/usr/bin/env python3
# -*- coding: utf-8 -*-
"""
运行配置解析模块
解析分节的 key = value 配置文本，校验后得到 RunConfig；emit_config 输出规范文本，
parse_config(emit_config(c)) == c

RunConfig 保存配置文件中的原始数值（配置长度单位），物理对象由 to_* 方法换算到 bohr 后构造
"""
import logging
import re
from dataclasses import MISSING, dataclass, field, fields, replace
from typing import Dict, List, Optional, Tuple

import numpy as np
from scipy import constants

try:
    from .atom import AtomicState
    from .beam import BeamParams
    from .config import config
    from .errors import ConfigError, DomainError
    from .utils.text_utils import parse_bool, safe_float, safe_int, split_list, strip_comment
except ImportError:
    from atom import AtomicState
    from beam import BeamParams
    from config import config
    from errors import ConfigError, DomainError
    from utils.text_utils import parse_bool, safe_float, safe_int, split_list, strip_comment


MODES = ('plane', 'vortex', 'tv_scan', 'impact_profile', 'xsec')
SWEEP_PARAMETERS = ('z_R', 'ell', 'p', 'b', 'Theta')
BEAM_SWEEPS = ('z_R', 'ell', 'p')

# 每个长度单位对应的 bohr 数
LENGTH_UNITS = {
    'bohr': 1.0,
    'm': 1.0 / constants.physical_constants['Bohr radius'][0],
    'nm': 1e-9 / constants.physical_constants['Bohr radius'][0],
}


# ==================== 配置数据结构 ====================

@dataclass(frozen=True)
class RunSection:
    mode: str
    form_factor: str = 'plane'


@dataclass(frozen=True)
class AtomSpec:
    N: int
    L: int = 0
    M: int = 0
    center: Tuple[float, float, float] = (0.0, 0.0, 0.0)


@dataclass(frozen=True)
class BeamSpec:
    wavelength: float
    rayleigh_range: float
    p: int = 0
    ell: int = 0


@dataclass(frozen=True)
class GeometrySection:
    theta: Tuple[float, ...] = ()
    q: Tuple[float, ...] = ()
    azimuth: float = 0.0
    b: Optional[float] = None
    b_over_w0: Optional[float] = None


@dataclass(frozen=True)
class SweepSection:
    parameter: str
    values: Tuple[float, ...]
    unit: str = 'length'
    apply_to: str = 'both'


@dataclass(frozen=True)
class GridSection:
    nodes_per_axis: int = config.default_nodes_per_axis
    refinement_levels: int = config.default_refinement_levels
    panels_per_half: int = config.default_panels_per_half
    grading: float = config.default_panel_grading
    density_floor: float = config.default_density_floor


@dataclass(frozen=True)
class PolarizationSection:
    m_s_in: int = 1
    m_s_out: int = 1


@dataclass(frozen=True)
class ProfileSection:
    kind: str = 'form_factor'
    sigma: float = 1.0
    k: Optional[float] = None
    q_max: Optional[float] = None
    q_n_rho: Optional[int] = None
    q_n_phi: Optional[int] = None
    b_max: Optional[float] = None
    b_n_rho: Optional[int] = None
    b_n_phi: Optional[int] = None
    symmetric: bool = False


@dataclass(frozen=True)
class OutputSection:
    path: Optional[str] = None
    format: str = config.default_output_format


@dataclass(frozen=True)
class UnitsSection:
    length: str = 'bohr'
    output: str = 'atomic'


@dataclass(frozen=True)
class RunConfig:
    """一次运行的完整配置（已应用默认值）"""
    run: RunSection
    atom_initial: AtomSpec
    atom_final: AtomSpec
    beam_in: Optional[BeamSpec] = None
    beam_out: Optional[BeamSpec] = None
    geometry: GeometrySection = field(default_factory=GeometrySection)
    sweep: Optional[SweepSection] = None
    grid: GridSection = field(default_factory=GridSection)
    polarization: PolarizationSection = field(default_factory=PolarizationSection)
    profile: ProfileSection = field(default_factory=ProfileSection)
    output: OutputSection = field(default_factory=OutputSection)
    units: UnitsSection = field(default_factory=UnitsSection)

    @property
    def mode(self) -> str:
        return self.run.mode

    @property
    def length_scale(self) -> float:
        """配置长度单位对应的 bohr 数"""
        return LENGTH_UNITS[self.units.length]

    def to_beam(self, spec: Optional[BeamSpec]) -> Optional[BeamParams]:
        if spec is None:
            return None
        s = self.length_scale
        return BeamParams(spec.wavelength * s, spec.rayleigh_range * s, spec.p, spec.ell)

    @property
    def waist(self) -> Optional[float]:
        """入射光束束腰 w0（bohr）"""
        beam = self.to_beam(self.beam_in)
        return beam.waist if beam is not None else None

    def impact_offset(self) -> float:
        """原子沿 x 的偏移（bohr）"""
        if self.geometry.b_over_w0 is not None:
            return self.geometry.b_over_w0 * self.waist
        if self.geometry.b is not None:
            return self.geometry.b * self.length_scale
        return 0.0

    def to_state(self, spec: AtomSpec, b: float = 0.0) -> AtomicState:
        """构造原子态，中心换算到 bohr 后沿 x 平移 b"""
        s = self.length_scale
        center = (spec.center[0] * s + b, spec.center[1] * s, spec.center[2] * s)
        return AtomicState(spec.N, spec.L, spec.M, center)

    def q_values(self) -> Tuple[float, ...]:
        """q 列表（1/bohr）"""
        return tuple(q / self.length_scale for q in self.geometry.q)


SECTIONS = {
    'run': RunSection,
    'atom_initial': AtomSpec,
    'atom_final': AtomSpec,
    'beam_in': BeamSpec,
    'beam_out': BeamSpec,
    'geometry': GeometrySection,
    'sweep': SweepSection,
    'grid': GridSection,
    'polarization': PolarizationSection,
    'profile': ProfileSection,
    'output': OutputSection,
    'units': UnitsSection,
}

# 键的取值类型：int、float、floats（列表）、vec3、bool、str 或可选值元组
_ATOM_KEYS = {'N': 'int', 'L': 'int', 'M': 'int', 'center': 'vec3'}
_BEAM_KEYS = {'wavelength': 'float', 'rayleigh_range': 'float', 'p': 'int', 'ell': 'int'}
SCHEMA = {
    'run': {'mode': MODES, 'form_factor': ('plane', 'vortex')},
    'atom_initial': _ATOM_KEYS,
    'atom_final': _ATOM_KEYS,
    'beam_in': _BEAM_KEYS,
    'beam_out': _BEAM_KEYS,
    'geometry': {'theta': 'floats', 'q': 'floats', 'azimuth': 'float', 'b': 'float', 'b_over_w0': 'float'},
    'sweep': {'parameter': SWEEP_PARAMETERS, 'values': 'floats', 'unit': ('length', 'wavelength'),
              'apply_to': ('both', 'in', 'out')},
    'grid': {'nodes_per_axis': 'int', 'refinement_levels': 'int', 'panels_per_half': 'int',
             'grading': 'float', 'density_floor': 'float'},
    'polarization': {'m_s_in': 'int', 'm_s_out': 'int'},
    'profile': {'kind': ('form_factor', 'gaussian'), 'sigma': 'float', 'k': 'float', 'q_max': 'float',
                'q_n_rho': 'int', 'q_n_phi': 'int', 'b_max': 'float', 'b_n_rho': 'int',
                'b_n_phi': 'int', 'symmetric': 'bool'},
    'output': {'path': 'str', 'format': ('csv', 'json')},
    'units': {'length': tuple(LENGTH_UNITS), 'output': ('atomic', 'si')},
}

SECTION_HELP = {
    'run': "运行模式: plane | vortex | tv_scan | impact_profile | xsec；form_factor 用于 xsec/impact_profile",
    'atom_initial': "初态量子数 N, L, M（0 <= L < N, |M| <= L），center 为原子中心",
    'atom_final': "末态，缺省与初态相同",
    'beam_in': "入射拉盖尔-高斯光束：波长、瑞利长度、径向指标 p、轨道角动量 ell",
    'beam_out': "出射光束，缺省的键继承自 beam_in",
    'geometry': "散射角 theta（弧度）或动量转移 q 列表；b 或 b_over_w0 为原子沿 x 的偏移",
    'sweep': "扫描参数 z_R | ell | p | b | Theta；unit = length | wavelength；apply_to = both | in | out",
    'grid': "求积网格覆盖项，缺省由支撑半径确定（48 节点、3 级）",
    'polarization': "入射/出射螺旋度 ±1",
    'profile': "impact_profile 的 q/b 网格；kind = form_factor | gaussian",
    'output': "输出路径和格式 csv | json",
    'units': "输入长度单位 bohr | m | nm；输出单位 atomic | si",
}


# ==================== 解析 ====================

class ConfigParser:
    """配置文本解析类"""

    def __init__(self):
        self.logger = logging.getLogger(__name__)

        # 正则表达式：节标题和键值行
        self.re_section = re.compile(r"^\[\s*(\w+)\s*\]$")
        self.re_entry = re.compile(r"^(\w+)\s*=\s*(.*)$")

        self.lines: Dict[Tuple[str, Optional[str]], int] = {}

    def line_of(self, section: str, key: Optional[str] = None) -> Optional[int]:
        return self.lines.get((section, key))

    def error(self, message: str, section: str, key: Optional[str] = None) -> ConfigError:
        name = f"{section}.{key}" if key else section
        return ConfigError(message, key=name, line=self.line_of(section, key))

    def read_sections(self, text: str) -> Dict[str, Dict[str, str]]:
        """
        按行读取节和键值对，记录每个键所在行号

        Returns:
            {section: {key: raw_value}}
        """
        self.lines = {}
        sections: Dict[str, Dict[str, str]] = {}
        current = None
        for number, raw in enumerate(text.splitlines(), start=1):
            line = strip_comment(raw)
            if not line:
                continue
            m = self.re_section.match(line)
            if m:
                current = m.group(1)
                if current not in SCHEMA:
                    raise ConfigError(f"未知的节 [{current}]", key=current, line=number)
                if current in sections:
                    raise ConfigError(f"节 [{current}] 重复出现", key=current, line=number)
                sections[current] = {}
                self.lines[(current, None)] = number
                continue
            m = self.re_entry.match(line)
            if not m:
                raise ConfigError(f"无法解析的行: {raw.strip()!r}", line=number)
            if current is None:
                raise ConfigError("键值对必须位于某个节之内", key=m.group(1), line=number)
            key, value = m.group(1), m.group(2).strip()
            if key not in SCHEMA[current]:
                raise ConfigError("未知的键", key=f"{current}.{key}", line=number)
            if key in sections[current]:
                raise ConfigError("键重复出现", key=f"{current}.{key}", line=number)
            sections[current][key] = value
            self.lines[(current, key)] = number
        return sections

    def convert(self, section: str, key: str, raw: str):
        """按 SCHEMA 把原始文本转换为对应类型"""
        kind = SCHEMA[section][key]
        if isinstance(kind, tuple):
            if raw not in kind:
                raise self.error(f"取值 {raw!r} 不在 {list(kind)} 之中", section, key)
            return raw
        if kind == 'str':
            if not raw:
                raise self.error("取值不能为空", section, key)
            return raw
        if kind == 'int':
            value = safe_int(raw)
            if value is None:
                raise self.error(f"需要整数: {raw!r}", section, key)
            return value
        if kind == 'bool':
            value = parse_bool(raw)
            if value is None:
                raise self.error(f"需要布尔值: {raw!r}", section, key)
            return value
        if kind == 'float':
            value = safe_float(raw)
            if not np.isfinite(value):
                raise self.error(f"需要有限的实数: {raw!r}", section, key)
            return value
        items = split_list(raw)
        values = tuple(safe_float(item) for item in items)
        if not values or not all(np.isfinite(values)):
            raise self.error(f"需要逗号分隔的有限实数列表: {raw!r}", section, key)
        if kind == 'vec3' and len(values) != 3:
            raise self.error(f"需要三个分量: {raw!r}", section, key)
        return values

    def build_section(self, name: str, entries: Dict[str, str], base=None):
        cls = SECTIONS[name]
        values = {key: self.convert(name, key, raw) for key, raw in entries.items()}
        if base is not None:
            return replace(base, **values)
        required = [f.name for f in fields(cls) if f.default is MISSING and f.default_factory is MISSING]
        for key in required:
            if key not in values:
                raise self.error("缺少必需的键", name, key)
        return cls(**values)

    def parse(self, text: str) -> RunConfig:
        """
        解析并校验配置文本

        Args:
            text: 配置文本

        Returns:
            RunConfig
        """
        sections = self.read_sections(text)
        for name in ('run', 'atom_initial'):
            if name not in sections:
                raise ConfigError(f"缺少必需的节 [{name}]", key=name)

        run = self.build_section('run', sections['run'])
        atom_initial = self.build_section('atom_initial', sections['atom_initial'])
        atom_final = atom_initial
        if 'atom_final' in sections:
            atom_final = self.build_section('atom_final', sections['atom_final'])

        beam_in = beam_out = None
        if 'beam_in' in sections:
            beam_in = self.build_section('beam_in', sections['beam_in'])
            beam_out = beam_in
        if 'beam_out' in sections:
            if beam_in is None:
                raise self.error("给出 [beam_out] 时必须同时给出 [beam_in]", 'beam_out')
            beam_out = self.build_section('beam_out', sections['beam_out'], base=beam_in)

        sweep = self.build_section('sweep', sections['sweep']) if 'sweep' in sections else None
        geometry = self.build_section('geometry', sections.get('geometry', {}))
        sweeps_theta = sweep is not None and sweep.parameter == 'Theta'
        if not geometry.theta and not geometry.q and not sweeps_theta:
            geometry = replace(geometry, theta=(0.0,))

        cfg = RunConfig(
            run=run,
            atom_initial=atom_initial,
            atom_final=atom_final,
            beam_in=beam_in,
            beam_out=beam_out,
            geometry=geometry,
            sweep=sweep,
            grid=self.build_section('grid', sections.get('grid', {})),
            polarization=self.build_section('polarization', sections.get('polarization', {})),
            profile=self.build_section('profile', sections.get('profile', {})),
            output=self.build_section('output', sections.get('output', {})),
            units=self.build_section('units', sections.get('units', {})),
        )
        self.validate(cfg)
        self.logger.debug(f"[配置解析] 模式 {cfg.mode}，共 {len(sections)} 个节")
        return cfg

    def validate(self, cfg: RunConfig):
        """校验跨节约束和物理不变量"""
        for name in ('atom_initial', 'atom_final'):
            spec = getattr(cfg, name)
            try:
                cfg.to_state(spec)
            except DomainError as e:
                key = 'M' if 'M must' in str(e) else ('L' if 'L must' in str(e) else 'center')
                if (name, key) not in self.lines:
                    key = None
                raise self.error(str(e), name, key) from e

        for name in ('beam_in', 'beam_out'):
            spec = getattr(cfg, name)
            if spec is None:
                continue
            try:
                cfg.to_beam(spec)
            except DomainError as e:
                raise self.error(str(e), name) from e

        mode = cfg.mode
        needs_beam = mode in ('vortex', 'tv_scan') or (
            mode in ('xsec', 'impact_profile') and cfg.run.form_factor == 'vortex')
        if needs_beam and cfg.beam_in is None:
            raise self.error(f"模式 {mode} 需要 [beam_in]", 'beam_in')
        if mode == 'xsec' and cfg.beam_in is None:
            raise self.error("xsec 需要 [beam_in] 提供光子频率", 'beam_in')

        self._validate_geometry(cfg)
        self._validate_sweep(cfg)
        self._validate_grid(cfg)

        for key in ('m_s_in', 'm_s_out'):
            if getattr(cfg.polarization, key) not in (-1, 1):
                raise self.error("螺旋度必须是 ±1", 'polarization', key)

        if mode == 'impact_profile':
            self._validate_profile(cfg)

    def _validate_geometry(self, cfg: RunConfig):
        geo = cfg.geometry
        if geo.theta and geo.q:
            raise self.error("theta 与 q 只能给出其一", 'geometry', 'q')
        if cfg.beam_in is None and not geo.q and cfg.mode != 'impact_profile':
            raise self.error("没有 [beam_in] 时必须用 q 列表给出几何", 'geometry', 'q')
        for theta in geo.theta:
            if not (0.0 <= theta <= np.pi):
                raise self.error(f"散射角必须在 [0, π] 内: {theta}", 'geometry', 'theta')
        for q in geo.q:
            if q < 0:
                raise self.error(f"q 必须非负: {q}", 'geometry', 'q')
        if geo.q and cfg.beam_in is not None:
            if cfg.beam_in.wavelength != cfg.beam_out.wavelength:
                raise self.error("按 q 给出几何时要求弹性散射（两束光波长相同）", 'geometry', 'q')
            two_k = 2.0 * cfg.to_beam(cfg.beam_in).k
            for q in cfg.q_values():
                if q > two_k * (1.0 + 1e-14):
                    raise self.error(f"q 超过弹性上限 2k = {two_k:.6g}/bohr", 'geometry', 'q')
        if geo.b is not None and geo.b_over_w0 is not None:
            raise self.error("b 与 b_over_w0 只能给出其一", 'geometry', 'b_over_w0')
        if geo.b_over_w0 is not None and cfg.beam_in is None:
            raise self.error("b_over_w0 需要 [beam_in]", 'geometry', 'b_over_w0')

    def _validate_sweep(self, cfg: RunConfig):
        sweep = cfg.sweep
        if sweep is None:
            return
        mode = cfg.mode
        plane_like = mode == 'plane' or (mode == 'xsec' and cfg.run.form_factor == 'plane')
        if mode == 'impact_profile':
            allowed = ()
        elif plane_like:
            allowed = ('b', 'Theta')
        else:
            allowed = SWEEP_PARAMETERS
        if sweep.parameter not in allowed:
            raise self.error(f"模式 {mode} 不支持扫描参数 {sweep.parameter}（可用: {list(allowed)}）",
                             'sweep', 'parameter')
        if sweep.parameter in ('ell', 'p'):
            for value in sweep.values:
                if value != int(value) or (sweep.parameter == 'p' and value < 0):
                    raise self.error(f"{sweep.parameter} 扫描值必须是{'非负' if sweep.parameter == 'p' else ''}整数: {value}",
                                     'sweep', 'values')
        if sweep.parameter == 'z_R' and any(v <= 0 for v in sweep.values):
            raise self.error("z_R 扫描值必须为正", 'sweep', 'values')
        if sweep.parameter == 'Theta':
            if cfg.geometry.theta or cfg.geometry.q:
                raise self.error("扫描 Theta 时不能再给出 geometry.theta 或 geometry.q", 'sweep', 'parameter')
            if any(not (0.0 <= v <= np.pi) for v in sweep.values):
                raise self.error("Theta 扫描值必须在 [0, π] 内", 'sweep', 'values')
        if sweep.unit == 'wavelength' and cfg.beam_in is None:
            raise self.error("unit = wavelength 需要 [beam_in]", 'sweep', 'unit')
        if sweep.parameter == 'b' and cfg.geometry.b_over_w0 is not None:
            raise self.error("扫描 b 时不能同时给出 b_over_w0", 'sweep', 'parameter')
        if mode == 'tv_scan' and len(cfg.geometry.theta) + len(cfg.geometry.q) != 1 \
                and sweep.parameter != 'Theta':
            raise self.error("tv_scan 带扫描时必须恰好给出一个散射角", 'geometry', 'theta')

    def _validate_grid(self, cfg: RunConfig):
        grid = cfg.grid
        if grid.nodes_per_axis < 4 or grid.nodes_per_axis % 2:
            raise self.error("nodes_per_axis 必须是不小于 4 的偶数", 'grid', 'nodes_per_axis')
        if grid.refinement_levels < 1:
            raise self.error("refinement_levels 至少为 1", 'grid', 'refinement_levels')
        if grid.panels_per_half < 1:
            raise self.error("panels_per_half 至少为 1", 'grid', 'panels_per_half')
        if grid.grading <= 0:
            raise self.error("grading 必须为正", 'grid', 'grading')
        if not (0.0 < grid.density_floor < 1.0):
            raise self.error("density_floor 必须在 (0, 1) 内", 'grid', 'density_floor')

    def _validate_profile(self, cfg: RunConfig):
        profile = cfg.profile
        if profile.sigma <= 0:
            raise self.error("sigma 必须为正", 'profile', 'sigma')
        if profile.kind == 'gaussian' and profile.k is None and cfg.beam_in is None:
            raise self.error("gaussian 剖面需要 k 或 [beam_in]", 'profile', 'k')
        if profile.kind == 'form_factor' and cfg.beam_in is None and profile.k is None:
            raise self.error("form_factor 剖面需要 k 或 [beam_in]", 'profile', 'k')
        for key in ('k', 'q_max', 'b_max'):
            value = getattr(profile, key)
            if value is not None and value <= 0:
                raise self.error(f"{key} 必须为正", 'profile', key)
        for key in ('q_n_rho', 'q_n_phi', 'b_n_rho', 'b_n_phi'):
            value = getattr(profile, key)
            if value is not None and value < 1:
                raise self.error(f"{key} 至少为 1", 'profile', key)
        if profile.symmetric:
            for spec in (cfg.atom_initial, cfg.atom_final):
                if spec.center[0] or spec.center[1]:
                    raise self.error("symmetric 只适用于轴上原子", 'profile', 'symmetric')
            if cfg.geometry.b or cfg.geometry.b_over_w0:
                raise self.error("symmetric 只适用于轴上原子", 'profile', 'symmetric')


def parse_config(text: str) -> RunConfig:
    """解析配置文本"""
    return ConfigParser().parse(text)


def load_config(path: str) -> RunConfig:
    """读取并解析配置文件"""
    try:
        with open(path, 'r', encoding='utf-8') as f:
            text = f.read()
    except OSError as e:
        raise ConfigError(f"无法读取配置文件 {path}: {e}") from e
    return parse_config(text)


# ==================== 输出 ====================

def _format_value(value) -> str:
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, int):
        return str(value)
    if isinstance(value, float):
        return repr(value)
    if isinstance(value, tuple):
        return ", ".join(_format_value(v) for v in value)
    return str(value)


def _section_lines(name: str, section, comments: bool) -> List[str]:
    lines = []
    if comments:
        lines.append(f"# {SECTION_HELP[name]}")
    lines.append(f"[{name}]")
    for f in fields(section):
        value = getattr(section, f.name)
        if value is None or value == ():
            continue
        lines.append(f"{f.name} = {_format_value(value)}")
    return lines


def emit_config(cfg: RunConfig, comments: bool = False) -> str:
    """
    输出规范的配置文本，取默认值的可选节被省略（[grid] 总是输出实际使用的网格参数）

    Args:
        cfg: 运行配置
        comments: 是否在每节前加入说明注释

    Returns:
        配置文本
    """
    blocks = []
    for name, cls in SECTIONS.items():
        section = getattr(cfg, name)
        if section is None:
            continue
        if name == 'atom_final' and section == cfg.atom_initial and not comments:
            continue
        if name == 'beam_out' and section == cfg.beam_in and not comments:
            continue
        if name in ('polarization', 'profile', 'output', 'units') \
                and section == cls() and not comments:
            continue
        blocks.append("\n".join(_section_lines(name, section, comments)))
    return "\n\n".join(blocks) + "\n"


def _template_config(mode: str) -> RunConfig:
    atom = AtomSpec(1, 0, 0)
    beam = BeamSpec(100.0, 1.0e4, 0, 1)
    beam_out = None
    geometry = GeometrySection(theta=(0.01,))
    sweep = None
    profile = ProfileSection()
    run = RunSection(mode)
    if mode == 'plane':
        beam = None
        geometry = GeometrySection(q=(0.1, 0.5, 1.0, 2.0, 5.0))
    elif mode == 'tv_scan':
        beam = BeamSpec(100.0, 1.0e3, 0, 1)
        geometry = GeometrySection(theta=(0.0,), b_over_w0=0.5)
        sweep = SweepSection('z_R', (10.0, 20.0, 50.0, 100.0), unit='wavelength')
    elif mode == 'impact_profile':
        beam = BeamSpec(2.0, 40.0, 0, 0)
        geometry = GeometrySection(theta=(0.0,))
        run = RunSection(mode, form_factor='vortex')
        profile = ProfileSection(q_n_rho=96, q_n_phi=512, symmetric=True)
    elif mode == 'vortex':
        beam_out = BeamSpec(100.0, 1.0e4, 0, -1)
    elif mode == 'xsec':
        geometry = GeometrySection(theta=(0.1, 0.5, 1.0, 1.5))
    return RunConfig(run=run, atom_initial=atom, atom_final=atom, beam_in=beam, beam_out=beam_out or beam,
                     geometry=geometry, sweep=sweep, profile=profile,
                     output=OutputSection(path=f"{mode}.csv"))


def config_template(mode: str) -> str:
    """带注释的配置模板"""
    if mode not in MODES:
        raise ConfigError(f"未知模式 {mode!r}（可用: {list(MODES)}）", key='run.mode')
    header = f"# vortexff {config.version} 配置模板: {mode}\n# 长度单位见 [units]，角度为弧度\n\n"
    return header + emit_config(_template_config(mode), comments=True)

"""Scenario description: parameter blocks, validation, TOML parsing and presets.

A scenario is a TOML document with nested tables ``contacts``,
``contact_control``, ``opinions``, ``opinion_control``, ``sim`` and repeated
``[[group]]`` entries.  Unset fields fall back to the built-in defaults
(the reference parameter set used throughout the experiments).  See
``docs/scenario-schema.md`` for the full schema.
"""

from __future__ import annotations

import math

try:
    import tomllib
except ModuleNotFoundError:  # Python < 3.11
    import tomli as tomllib

from dataclasses import dataclass, field, fields, replace


class ConfigError(ValueError):
    """Raised on schema errors or invariant violations; names the offending field."""

    def __init__(self, field_name: str, message: str):
        self.field_name = field_name
        super().__init__(f"{field_name}: {message}")


# ---------------------------------------------------------------------------
# Parameter blocks
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class ContactParams:
    """Parameters of the uncontrolled contact dynamics."""

    beta: float = 1.0        # interaction strength, > 0
    mu: float = 0.0          # asymmetry of the contact drift, in [0, 1)
    c_bar: float = 200.0     # reference contact level, > 0
    theta: float = 2.0       # opinion-penalty strength, >= 0
    delta_phi: float = 0.1   # opinion tolerance radius, in [0, 2]
    nu: float = 0.1          # contact noise std, >= 0


@dataclass(frozen=True)
class ContactControlParams:
    """Parameters of the contact feedback control."""

    lam: float = 1.0         # control intensity scale, >= 0 (TOML key: "lambda")
    gamma_c: float = 1.0     # control cost, > 0
    alpha_r: float = 0.1     # steepness of the contact activation sigmoid
    alpha_h: float = 0.1     # steepness of the opinion-mass activation sigmoid
    c_min: float = 100.0     # contact activation threshold
    r: float = 0.7           # opinion-mass radius, > 0
    rho_star: float = 0.5    # activation mass threshold, in [0, 1]


@dataclass(frozen=True)
class OpinionParams:
    """Parameters of the binary opinion interaction."""

    alpha: float = 1.0       # interaction strength, > 0
    delta: float = 0.8       # bounded-confidence radius, in (0, 2]
    p: float = 3.0           # connectivity-influence exponent, >= 0
    sigma: float = 0.1       # opinion noise std, >= 0


@dataclass(frozen=True)
class ActivationSpec:
    """Activation factor for the opinion control: constant 1 or a sigmoid.

    The sigmoid form mirrors the contact-control activations: the factor
    gating on contacts is decreasing in c, the factor gating on the local
    opinion mass is increasing in rho.
    """

    kind: str = "constant"   # "constant" | "sigmoid"
    threshold: float = 0.0
    steepness: float = 1.0


@dataclass(frozen=True)
class OpinionControlParams:
    """Parameters of the opinion feedback control (may differ per group)."""

    gamma_v: float = 10.0    # control cost, > 0
    v_target: float = 0.5    # target opinion, in [-1, 1]
    rv_spec: ActivationSpec = field(default_factory=ActivationSpec)
    hv_spec: ActivationSpec = field(default_factory=ActivationSpec)


@dataclass(frozen=True)
class GroupSpec:
    name: str = "all"
    fraction: float = 1.0
    init_c_range: tuple[float, float] = (50.0, 100.0)
    init_v_range: tuple[float, float] = (-1.0, 1.0)
    contact_control_enabled: bool = False
    opinion_control_enabled: bool = False
    opinion_control: OpinionControlParams = field(default_factory=OpinionControlParams)


@dataclass(frozen=True)
class SimParams:
    epsilon: float = 1e-3            # scaling parameter = time step, in (0, 1)
    t_final: float = 50.0
    n_particles: int = 10_000
    seed: int = 12345
    snapshot_times: tuple[float, ...] = (50.0,)
    mv_mode: str = "instantaneous"   # "instantaneous" | "frozen-at-init"
    boundary_policy: str = "clamp-resample"


@dataclass(frozen=True)
class ScenarioConfig:
    contacts: ContactParams = field(default_factory=ContactParams)
    contact_control: ContactControlParams = field(default_factory=ContactControlParams)
    opinions: OpinionParams = field(default_factory=OpinionParams)
    opinion_control: OpinionControlParams = field(default_factory=OpinionControlParams)
    sim: SimParams = field(default_factory=SimParams)
    groups: tuple[GroupSpec, ...] = (GroupSpec(),)


# ---------------------------------------------------------------------------
# Validation
# ---------------------------------------------------------------------------

def _check(cond: bool, name: str, msg: str) -> None:
    if not cond:
        raise ConfigError(name, msg)


def validate(cfg: ScenarioConfig) -> ScenarioConfig:
    """Check every invariant; returns cfg unchanged on success."""
    ct = cfg.contacts
    _check(ct.beta > 0, "contacts.beta", f"must be > 0, got {ct.beta}")
    _check(0 <= ct.mu < 1, "contacts.mu", f"must be in [0, 1), got {ct.mu}")
    _check(ct.c_bar > 0, "contacts.c_bar", f"must be > 0, got {ct.c_bar}")
    _check(ct.theta >= 0, "contacts.theta", f"must be >= 0, got {ct.theta}")
    _check(0 <= ct.delta_phi <= 2, "contacts.delta_phi", f"must be in [0, 2], got {ct.delta_phi}")
    _check(ct.nu >= 0, "contacts.nu", f"must be >= 0, got {ct.nu}")

    cc = cfg.contact_control
    _check(cc.lam >= 0, "contact_control.lambda", f"must be >= 0, got {cc.lam}")
    _check(cc.gamma_c > 0, "contact_control.gamma_c", f"must be > 0, got {cc.gamma_c}")
    _check(cc.alpha_r > 0, "contact_control.alpha_r", f"must be > 0, got {cc.alpha_r}")
    _check(cc.alpha_h > 0, "contact_control.alpha_h", f"must be > 0, got {cc.alpha_h}")
    _check(cc.r > 0, "contact_control.r", f"must be > 0, got {cc.r}")
    _check(0 <= cc.rho_star <= 1, "contact_control.rho_star", f"must be in [0, 1], got {cc.rho_star}")

    op = cfg.opinions
    _check(op.alpha >= 0, "opinions.alpha", f"must be >= 0, got {op.alpha}")
    _check(0 < op.delta <= 2, "opinions.delta", f"must be in (0, 2], got {op.delta}")
    _check(op.p >= 0, "opinions.p", f"must be >= 0, got {op.p}")
    _check(op.sigma >= 0, "opinions.sigma", f"must be >= 0, got {op.sigma}")

    def check_opinion_control(oc: OpinionControlParams, prefix: str) -> None:
        _check(oc.gamma_v > 0, f"{prefix}.gamma_v", f"must be > 0, got {oc.gamma_v}")
        _check(abs(oc.v_target) <= 1, f"{prefix}.v_target", f"must be in [-1, 1], got {oc.v_target}")
        for nm, spec in (("rv_spec", oc.rv_spec), ("hv_spec", oc.hv_spec)):
            _check(spec.kind in ("constant", "sigmoid"), f"{prefix}.{nm}.kind",
                   f"must be 'constant' or 'sigmoid', got {spec.kind!r}")
            if spec.kind == "sigmoid":
                _check(spec.steepness > 0, f"{prefix}.{nm}.steepness",
                       f"must be > 0, got {spec.steepness}")

    check_opinion_control(cfg.opinion_control, "opinion_control")

    _check(len(cfg.groups) >= 1, "group", "at least one group is required")
    total = 0.0
    for g in cfg.groups:
        prefix = f"group[{g.name}]"
        _check(0 < g.fraction <= 1, f"{prefix}.fraction", f"must be in (0, 1], got {g.fraction}")
        total += g.fraction
        clo, chi = g.init_c_range
        vlo, vhi = g.init_v_range
        _check(clo <= chi, f"{prefix}.init_c_range", f"inverted bounds {g.init_c_range}")
        _check(clo > 0, f"{prefix}.init_c_range", f"must be a subset of (0, inf), got {g.init_c_range}")
        _check(vlo <= vhi, f"{prefix}.init_v_range", f"inverted bounds {g.init_v_range}")
        _check(-1 <= vlo and vhi <= 1, f"{prefix}.init_v_range",
               f"must be a subset of [-1, 1], got {g.init_v_range}")
        check_opinion_control(g.opinion_control, f"{prefix}.opinion_control")
    _check(abs(total - 1.0) <= 1e-12, "group.fraction",
           f"group fractions must sum to 1 (+- 1e-12), got {total}")
    names = [g.name for g in cfg.groups]
    _check(len(set(names)) == len(names), "group.name", f"duplicate group names in {names}")

    sm = cfg.sim
    _check(0 < sm.epsilon < 1, "sim.epsilon", f"must be in (0, 1), got {sm.epsilon}")
    _check(sm.t_final >= 0, "sim.t_final", f"must be >= 0, got {sm.t_final}")
    _check(sm.n_particles >= 2, "sim.n_particles", f"must be >= 2, got {sm.n_particles}")
    times = sm.snapshot_times
    _check(all(times[i] < times[i + 1] for i in range(len(times) - 1)),
           "sim.snapshot_times", f"must be sorted and unique, got {list(times)}")
    _check(all(0 <= t <= sm.t_final for t in times),
           "sim.snapshot_times", f"must lie in [0, t_final], got {list(times)}")
    _check(sm.mv_mode in ("instantaneous", "frozen-at-init"),
           "sim.mv_mode", f"unknown mode {sm.mv_mode!r}")
    _check(sm.boundary_policy == "clamp-resample",
           "sim.boundary_policy", f"unknown policy {sm.boundary_policy!r}")
    return cfg


def group_sizes(cfg: ScenarioConfig) -> list[int]:
    """Deterministic per-group population sizes.

    round(fraction * N) per group, with the last group absorbing the
    rounding remainder so the total is always N.
    """
    n = cfg.sim.n_particles
    sizes = [round(g.fraction * n) for g in cfg.groups[:-1]]
    sizes.append(n - sum(sizes))
    if sizes[-1] < 0:
        raise ConfigError("group.fraction", "rounding produced a negative group size")
    return sizes


# ---------------------------------------------------------------------------
# Parsing (TOML in) and serialization (TOML out)
# ---------------------------------------------------------------------------

# dataclass field name <-> TOML key (only one deviates: `lambda` is reserved)
_CC_KEYS = {"lambda": "lam", "gamma_c": "gamma_c", "alpha_r": "alpha_r",
            "alpha_h": "alpha_h", "c_min": "c_min", "r": "r", "rho_star": "rho_star"}


def _num(value, name: str) -> float:
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise ConfigError(name, f"expected a number, got {value!r}")
    return float(value)


def _pair(value, name: str) -> tuple[float, float]:
    if not isinstance(value, list) or len(value) != 2:
        raise ConfigError(name, f"expected a two-element array, got {value!r}")
    return (_num(value[0], name), _num(value[1], name))


def _table(value, name: str) -> dict:
    if not isinstance(value, dict):
        raise ConfigError(name, f"expected a table, got {value!r}")
    return value


def _fill(cls, data: dict, prefix: str, keymap: dict[str, str] | None = None):
    """Build a flat numeric dataclass from a TOML table, rejecting unknown keys."""
    keymap = keymap or {f.name: f.name for f in fields(cls)}
    kwargs = {}
    for key, value in data.items():
        if key not in keymap:
            raise ConfigError(f"{prefix}.{key}", "unknown key")
        kwargs[keymap[key]] = _num(value, f"{prefix}.{key}")
    return cls(**kwargs)


def _parse_activation(data: dict, prefix: str) -> ActivationSpec:
    kwargs = {}
    for key, value in data.items():
        if key == "kind":
            if not isinstance(value, str):
                raise ConfigError(f"{prefix}.kind", f"expected a string, got {value!r}")
            kwargs["kind"] = value
        elif key in ("threshold", "steepness"):
            kwargs[key] = _num(value, f"{prefix}.{key}")
        else:
            raise ConfigError(f"{prefix}.{key}", "unknown key")
    return ActivationSpec(**kwargs)


def _parse_opinion_control(data: dict, prefix: str,
                           base: OpinionControlParams) -> OpinionControlParams:
    oc = base
    for key, value in data.items():
        if key == "gamma_v":
            oc = replace(oc, gamma_v=_num(value, f"{prefix}.gamma_v"))
        elif key == "v_target":
            oc = replace(oc, v_target=_num(value, f"{prefix}.v_target"))
        elif key == "rv_spec":
            oc = replace(oc, rv_spec=_parse_activation(_table(value, f"{prefix}.rv_spec"),
                                                       f"{prefix}.rv_spec"))
        elif key == "hv_spec":
            oc = replace(oc, hv_spec=_parse_activation(_table(value, f"{prefix}.hv_spec"),
                                                       f"{prefix}.hv_spec"))
        else:
            raise ConfigError(f"{prefix}.{key}", "unknown key")
    return oc


def _parse_group(data: dict, default_oc: OpinionControlParams, index: int) -> GroupSpec:
    prefix = f"group[{index}]"
    kwargs: dict = {"opinion_control": default_oc}
    for key, value in data.items():
        if key == "name":
            if not isinstance(value, str):
                raise ConfigError(f"{prefix}.name", f"expected a string, got {value!r}")
            kwargs["name"] = value
        elif key == "fraction":
            kwargs["fraction"] = _num(value, f"{prefix}.fraction")
        elif key in ("init_c_range", "init_v_range"):
            kwargs[key] = _pair(value, f"{prefix}.{key}")
        elif key in ("contact_control_enabled", "opinion_control_enabled"):
            if not isinstance(value, bool):
                raise ConfigError(f"{prefix}.{key}", f"expected a boolean, got {value!r}")
            kwargs[key] = value
        elif key == "opinion_control":
            kwargs["opinion_control"] = _parse_opinion_control(
                _table(value, f"{prefix}.opinion_control"),
                f"{prefix}.opinion_control", default_oc)
        else:
            raise ConfigError(f"{prefix}.{key}", "unknown key")
    return GroupSpec(**kwargs)


def _parse_sim(data: dict) -> SimParams:
    kwargs: dict = {}
    for key, value in data.items():
        if key in ("epsilon", "t_final"):
            kwargs[key] = _num(value, f"sim.{key}")
        elif key in ("n_particles", "seed"):
            if isinstance(value, bool) or not isinstance(value, int):
                raise ConfigError(f"sim.{key}", f"expected an integer, got {value!r}")
            kwargs[key] = value
        elif key == "snapshot_times":
            if not isinstance(value, list):
                raise ConfigError("sim.snapshot_times", f"expected an array, got {value!r}")
            kwargs[key] = tuple(_num(t, "sim.snapshot_times") for t in value)
        elif key in ("mv_mode", "boundary_policy"):
            if not isinstance(value, str):
                raise ConfigError(f"sim.{key}", f"expected a string, got {value!r}")
            kwargs[key] = value
        else:
            raise ConfigError(f"sim.{key}", "unknown key")
    return SimParams(**kwargs)


def from_dict(data: dict) -> ScenarioConfig:
    """Build and validate a ScenarioConfig from a parsed TOML tree."""
    known = {"contacts", "contact_control", "opinions", "opinion_control", "sim", "group"}
    for key in data:
        if key not in known:
            raise ConfigError(key, "unknown key")
    contacts = _fill(ContactParams, _table(data.get("contacts", {}), "contacts"), "contacts")
    contact_control = _fill(ContactControlParams,
                            _table(data.get("contact_control", {}), "contact_control"),
                            "contact_control", _CC_KEYS)
    opinions = _fill(OpinionParams, _table(data.get("opinions", {}), "opinions"), "opinions")
    opinion_control = _parse_opinion_control(
        _table(data.get("opinion_control", {}), "opinion_control"),
        "opinion_control", OpinionControlParams())
    sim = _parse_sim(_table(data.get("sim", {}), "sim"))
    raw_groups = data.get("group", None)
    if raw_groups is None:
        groups: tuple[GroupSpec, ...] = (GroupSpec(opinion_control=opinion_control),)
    else:
        if not isinstance(raw_groups, list):
            raise ConfigError("group", f"expected an array of tables, got {raw_groups!r}")
        groups = tuple(_parse_group(_table(g, f"group[{i}]"), opinion_control, i)
                       for i, g in enumerate(raw_groups))
    cfg = ScenarioConfig(contacts=contacts, contact_control=contact_control,
                         opinions=opinions, opinion_control=opinion_control,
                         sim=sim, groups=groups)
    return validate(cfg)


def parse_scenario(text: str) -> ScenarioConfig:
    """Parse a TOML scenario document, fill defaults, validate."""
    try:
        data = tomllib.loads(text)
    except tomllib.TOMLDecodeError as exc:
        raise ConfigError("<document>", f"not valid TOML: {exc}") from exc
    return from_dict(data)


def _toml_value(value) -> str:
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, int):
        return str(value)
    if isinstance(value, float):
        if math.isinf(value) or math.isnan(value):
            raise ConfigError("<serialize>", f"cannot serialize {value}")
        return repr(value)
    if isinstance(value, str):
        return '"' + value.replace("\\", "\\\\").replace('"', '\\"') + '"'
    if isinstance(value, (tuple, list)):
        return "[" + ", ".join(_toml_value(v) for v in value) + "]"
    raise TypeError(f"cannot serialize {value!r}")


def _emit_activation(lines: list[str], header: str, spec: ActivationSpec) -> None:
    lines.append(f"[{header}]")
    lines.append(f"kind = {_toml_value(spec.kind)}")
    lines.append(f"threshold = {_toml_value(spec.threshold)}")
    lines.append(f"steepness = {_toml_value(spec.steepness)}")
    lines.append("")


def _emit_opinion_control(lines: list[str], header: str, oc: OpinionControlParams) -> None:
    lines.append(f"[{header}]")
    lines.append(f"gamma_v = {_toml_value(oc.gamma_v)}")
    lines.append(f"v_target = {_toml_value(oc.v_target)}")
    lines.append("")
    _emit_activation(lines, f"{header}.rv_spec", oc.rv_spec)
    _emit_activation(lines, f"{header}.hv_spec", oc.hv_spec)


def serialize_scenario(cfg: ScenarioConfig) -> str:
    """Emit a TOML document that parses back to an identical config."""
    lines: list[str] = []

    lines.append("[contacts]")
    for f in fields(ContactParams):
        lines.append(f"{f.name} = {_toml_value(getattr(cfg.contacts, f.name))}")
    lines.append("")

    lines.append("[contact_control]")
    inverse_cc = {v: k for k, v in _CC_KEYS.items()}
    for f in fields(ContactControlParams):
        lines.append(f"{inverse_cc[f.name]} = {_toml_value(getattr(cfg.contact_control, f.name))}")
    lines.append("")

    lines.append("[opinions]")
    for f in fields(OpinionParams):
        lines.append(f"{f.name} = {_toml_value(getattr(cfg.opinions, f.name))}")
    lines.append("")

    _emit_opinion_control(lines, "opinion_control", cfg.opinion_control)

    lines.append("[sim]")
    sm = cfg.sim
    lines.append(f"epsilon = {_toml_value(sm.epsilon)}")
    lines.append(f"t_final = {_toml_value(sm.t_final)}")
    lines.append(f"n_particles = {_toml_value(sm.n_particles)}")
    lines.append(f"seed = {_toml_value(sm.seed)}")
    lines.append(f"snapshot_times = {_toml_value(sm.snapshot_times)}")
    lines.append(f"mv_mode = {_toml_value(sm.mv_mode)}")
    lines.append(f"boundary_policy = {_toml_value(sm.boundary_policy)}")
    lines.append("")

    for g in cfg.groups:
        lines.append("[[group]]")
        lines.append(f"name = {_toml_value(g.name)}")
        lines.append(f"fraction = {_toml_value(g.fraction)}")
        lines.append(f"init_c_range = {_toml_value(g.init_c_range)}")
        lines.append(f"init_v_range = {_toml_value(g.init_v_range)}")
        lines.append(f"contact_control_enabled = {_toml_value(g.contact_control_enabled)}")
        lines.append(f"opinion_control_enabled = {_toml_value(g.opinion_control_enabled)}")
        lines.append("")
        _emit_opinion_control(lines, "group.opinion_control", g.opinion_control)

    return "\n".join(lines)


# ---------------------------------------------------------------------------
# Built-in presets (the experiment configurations of the reference paper set)
# ---------------------------------------------------------------------------

PRESET_NAMES = ("test1_a", "test1_b", "test1_c", "test1_d",
                "test2_a", "test2_b", "test2_c",
                "test3_a", "test3_b", "test3_c")


def _test1(contact_ctrl: bool, opinion_ctrl: bool, n: int) -> ScenarioConfig:
    leaders = GroupSpec(name="leaders", fraction=0.25,
                        init_c_range=(150.0, 200.0), init_v_range=(0.4, 0.6),
                        contact_control_enabled=contact_ctrl,
                        opinion_control_enabled=opinion_ctrl)
    mass = GroupSpec(name="mass", fraction=0.75,
                     init_c_range=(10.0, 90.0), init_v_range=(-0.9, -0.1))
    sim = SimParams(epsilon=1e-3, t_final=50.0, n_particles=n,
                    snapshot_times=(1.0, 5.0, 50.0))
    return ScenarioConfig(sim=sim, groups=(leaders, mass))


def _test2(control: bool, gamma_a: float, gamma_b: float, n: int) -> ScenarioConfig:
    group_a = GroupSpec(name="leaders_a", fraction=0.25,
                        init_c_range=(200.0, 250.0), init_v_range=(-0.6, -0.4),
                        opinion_control_enabled=control,
                        opinion_control=OpinionControlParams(gamma_v=gamma_a, v_target=-0.5))
    group_b = GroupSpec(name="leaders_b", fraction=0.25,
                        init_c_range=(200.0, 250.0), init_v_range=(0.4, 0.6),
                        opinion_control_enabled=control,
                        opinion_control=OpinionControlParams(gamma_v=gamma_b, v_target=0.5))
    mass = GroupSpec(name="mass", fraction=0.5,
                     init_c_range=(50.0, 100.0), init_v_range=(-0.8, 0.8))
    sim = SimParams(epsilon=1e-3, t_final=50.0, n_particles=n,
                    snapshot_times=(1.0, 5.0, 10.0, 15.0, 20.0, 50.0))
    return ScenarioConfig(sim=sim, groups=(group_a, group_b, mass))


def _test3(contact_a: bool, contact_b: bool, n: int) -> ScenarioConfig:
    group_a = GroupSpec(name="leaders_a", fraction=0.25,
                        init_c_range=(200.0, 250.0), init_v_range=(-0.6, -0.4),
                        contact_control_enabled=contact_a,
                        opinion_control_enabled=True,
                        opinion_control=OpinionControlParams(gamma_v=1.0, v_target=-0.5))
    group_b = GroupSpec(name="leaders_b", fraction=0.25,
                        init_c_range=(200.0, 250.0), init_v_range=(0.4, 0.6),
                        contact_control_enabled=contact_b,
                        opinion_control_enabled=True,
                        opinion_control=OpinionControlParams(gamma_v=1.0, v_target=0.5))
    mass = GroupSpec(name="mass", fraction=0.5,
                     init_c_range=(50.0, 100.0), init_v_range=(0.1, 0.6))
    sim = SimParams(epsilon=1e-3, t_final=150.0, n_particles=n,
                    snapshot_times=(1.0, 15.0, 50.0, 100.0, 150.0))
    return ScenarioConfig(sim=sim, groups=(group_a, group_b, mass),
                          contact_control=ContactControlParams(gamma_c=1.0))


def preset(name: str, paper_scale: bool = False) -> ScenarioConfig:
    """Return one of the built-in experiment scenarios.

    Presets run at N = 10^4 by default; ``paper_scale=True`` raises the
    population to the 10^6 samples used for the published figures.
    """
    n = 1_000_000 if paper_scale else 10_000
    builders = {
        "test1_a": lambda: _test1(False, False, n),
        "test1_b": lambda: _test1(True, False, n),
        "test1_c": lambda: _test1(False, True, n),
        "test1_d": lambda: _test1(True, True, n),
        "test2_a": lambda: _test2(False, 1.0, 1.0, n),
        "test2_b": lambda: _test2(True, 1.0, 1.0, n),
        "test2_c": lambda: _test2(True, 100.0, 1.0, n),
        "test3_a": lambda: _test3(False, False, n),
        "test3_b": lambda: _test3(True, False, n),
        "test3_c": lambda: _test3(True, True, n),
    }
    if name not in builders:
        raise ConfigError("preset", f"unknown preset {name!r}; known: {', '.join(PRESET_NAMES)}")
    return validate(builders[name]())

"""Command-line front end.

Subcommands: ``simulate`` (seeded runs emitting trial ledgers), ``sweep``
(analytic phase-sweep CSV tables), ``discriminate`` (test two hypotheses
against a recorded ledger), ``power`` (sample-size sizing), and
``ether-design`` (arm length for a target fringe shift).

Configuration can come from flags, from a flat ``key = value`` file via
``--config`` (keys equal flag names without the leading dashes), or both;
flags override file values.  Output goes to ``--out`` (``-`` = stdout).
Exit codes: 0 success, 1 configuration error, 2 the observed data are
impossible under every hypothesis offered.
"""

from __future__ import annotations

import argparse
import io
import math
import sys
from dataclasses import dataclass
from typing import Callable, Sequence

from .analysis import (
    default_phase_grid,
    discriminate,
    format_number,
    sample_size_for_power,
    sweep_phase,
    write_sweep_csv,
)
from .errors import ConfigurationError, DataInconsistencyError
from .ether import EtherConfig, ether_joint, required_arm_length
from .models import (
    ROUNDED_LIGHT_SPEED,
    SPEED_OF_LIGHT,
    ModelId,
    OpticalGeometry,
    OutcomeDistribution,
    SeparationRegime,
    local_joint,
    quantum_joint,
    separation_regime,
)
from .simulate import ExperimentConfig, TrialLedger, run

HALF_PI = math.pi / 2.0


class _Parser(argparse.ArgumentParser):
    """argparse parser that reports usage problems as configuration errors."""

    def error(self, message: str) -> None:  # type: ignore[override]
        raise ConfigurationError(message)


@dataclass(frozen=True)
class _Option:
    name: str
    kind: str  # "float" | "int" | "str" | "flag"
    default: object = None
    help: str = ""
    required: bool = False
    file_key: bool = True  # may appear in a --config file


def _parse_bool(raw: str) -> bool:
    lowered = raw.strip().lower()
    if lowered in ("true", "1", "yes", "on"):
        return True
    if lowered in ("false", "0", "no", "off"):
        return False
    raise ValueError(f"not a boolean: {raw!r}")


_CONVERTERS: dict[str, Callable[[str], object]] = {
    "float": float,
    "int": int,
    "str": str,
    "flag": _parse_bool,
}

_PHYSICAL_OPTIONS = [
    _Option("c", "float", SPEED_OF_LIGHT, "light speed in m/s"),
    _Option(
        "paper-constants",
        "flag",
        False,
        f"round the light speed to {ROUNDED_LIGHT_SPEED:.1e} m/s, the rounding "
        "behind the 0.75 m signaling threshold and the 7.5 m design arm",
    ),
    _Option("wavelength", "float", 900e-9, "photon wavelength in m"),
]

_PHASE_OPTIONS = [
    _Option("phase", "float", None, "interferometer phase in radians (default pi/2)"),
    _Option("phase-deg", "float", None, "interferometer phase in degrees"),
]

_GEOMETRY_OPTIONS = [
    _Option("long-arm", "float", None, "long arm length in m (needs short-arm too)"),
    _Option("short-arm", "float", None, "short arm length in m"),
]

_ETHER_OPTIONS = [
    _Option("ether-arm-length", "float", 7.5, "ether-model arm length L in m"),
    _Option("ether-velocity", "float", 30_000.0, "drift speed v in m/s"),
    _Option("ether-misaligned", "flag", False, "no arm along the motion (shift vanishes)"),
]

_HYPOTHESIS_OPTIONS = [
    _Option("hypothesis-a", "str", None, "model A: quantum, local or ether", required=True),
    _Option("hypothesis-b", "str", None, "model B: quantum, local or ether", required=True),
    _Option("regime", "str", None, "timelike or spacelike (default: derive from distance)"),
    _Option("distance", "float", 1.0, "detector separation d in m"),
    _Option("gate-window", "float", 2.5e-9, "coincidence gate window in s"),
]

_COMMAND_OPTIONS: dict[str, list[_Option]] = {
    "simulate": [
        _Option("model", "str", None, "outcome model: quantum, local or ether", required=True),
        *_PHASE_OPTIONS,
        *_GEOMETRY_OPTIONS,
        _Option("distance", "float", 1.0, "detector separation d in m"),
        _Option("gate-window", "float", 2.5e-9, "coincidence gate window in s"),
        *_PHYSICAL_OPTIONS,
        *_ETHER_OPTIONS,
        _Option("trials", "int", 100_000, "number of gated trials"),
        _Option("seed", "int", 0, "64-bit unsigned RNG seed"),
        _Option("shards", "int", 1, "independent substreams to split the trials over"),
    ],
    "sweep": [
        _Option("models", "str", "quantum,local,ether", "comma-separated models"),
        _Option("regimes", "str", "timelike,spacelike", "comma-separated regimes"),
        _Option("grid", "int", 181, "points over [0, 2*pi], endpoints included"),
        *_PHYSICAL_OPTIONS,
        *_ETHER_OPTIONS,
    ],
    "discriminate": [
        _Option("ledger", "str", None, "path of the recorded trial ledger", required=True,
                file_key=False),
        *_HYPOTHESIS_OPTIONS,
        *_PHASE_OPTIONS,
        *_PHYSICAL_OPTIONS,
        *_ETHER_OPTIONS,
        _Option("significance", "float", 1e-3, "rejection threshold for the verdict"),
    ],
    "power": [
        *_HYPOTHESIS_OPTIONS,
        *_PHASE_OPTIONS,
        *_PHYSICAL_OPTIONS,
        *_ETHER_OPTIONS,
        _Option("significance", "float", 1e-6, "required rejection threshold"),
        _Option("power", "float", 0.99, "required probability of rejection"),
        _Option("mc-reps", "int", 200, "Monte Carlo replicates per candidate n"),
        _Option("mc-seed", "int", 0, "seed of the Monte Carlo power search"),
    ],
    "ether-design": [
        _Option("target-shift", "float", None, "fringe shift to produce, radians",
                required=True),
        _Option("v", "float", 30_000.0, "drift speed in m/s"),
        _Option("lambda", "float", 900e-9, "photon wavelength in m"),
        _Option("c", "float", SPEED_OF_LIGHT, "light speed in m/s"),
    ],
}


class _Options:
    """Merged view of CLI values over config-file values over defaults."""

    def __init__(self, schema: list[_Option], cli: dict, file: dict):
        self._schema = {option.name: option for option in schema}
        self._cli = cli
        self._file = file

    def __getitem__(self, name: str):
        option = self._schema[name]
        if self._cli.get(name) is not None:
            return self._cli[name]
        if name in self._file:
            return self._file[name]
        return option.default

    def given(self, name: str) -> bool:
        return self._cli.get(name) is not None or name in self._file

    def cli_value(self, name: str):
        return self._cli.get(name)

    def file_value(self, name: str):
        return self._file.get(name)

    def require(self) -> None:
        for name, option in self._schema.items():
            if option.required and self[name] is None:
                raise ConfigurationError(f"missing required option '{name}'")


def _dest(name: str) -> str:
    return "opt_" + name.replace("-", "_")


def _build_parser() -> _Parser:
    parser = _Parser(prog="photonmm", description=__doc__.splitlines()[0])
    subparsers = parser.add_subparsers(dest="command")
    for command, options in _COMMAND_OPTIONS.items():
        sub = subparsers.add_parser(command, add_help=True)
        for option in options:
            flag = "--" + option.name
            if option.kind == "flag":
                sub.add_argument(flag, dest=_dest(option.name), action="store_true",
                                 default=None, help=option.help)
            else:
                sub.add_argument(flag, dest=_dest(option.name),
                                 type=_CONVERTERS[option.kind], default=None,
                                 help=option.help)
        sub.add_argument("--config", dest="config_path", default=None,
                         help="flat key = value file; flags override its values")
        sub.add_argument("--out", dest="out_path", default="-",
                         help="output path, '-' for stdout")
        if command == "simulate":
            sub.add_argument("--dump-config", dest="dump_config", action="store_true",
                             help="emit the effective configuration instead of running")
    return parser


def _read_config_file(path: str, schema: list[_Option]) -> dict:
    known = {option.name: option for option in schema if option.file_key}
    values: dict[str, object] = {}
    try:
        with open(path, "r", encoding="utf-8") as fh:
            lines = fh.readlines()
    except OSError as exc:
        raise ConfigurationError(f"cannot read config file: {exc}") from None
    for lineno, raw in enumerate(lines, start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        key, sep, value = line.partition("=")
        if not sep:
            raise ConfigurationError(f"malformed config line {lineno}: {raw.rstrip()!r}")
        key, value = key.strip(), value.strip()
        if key not in known:
            raise ConfigurationError(f"unknown config key '{key}'")
        try:
            values[key] = _CONVERTERS[known[key].kind](value)
        except ValueError:
            raise ConfigurationError(f"invalid value for config key '{key}': {value!r}") from None
    return values


def _write_text(path: str, text: str) -> None:
    if path == "-":
        sys.stdout.write(text)
    else:
        with open(path, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)


def _light_speed(opts: _Options) -> float:
    if opts["paper-constants"]:
        return ROUNDED_LIGHT_SPEED
    return opts["c"]


def _resolve_phase(opts: _Options) -> float | None:
    """Explicit phase in radians, honoring layer precedence and --phase-deg."""
    for layer in (opts.cli_value, opts.file_value):
        phase, degrees = layer("phase"), layer("phase-deg")
        if phase is not None and degrees is not None:
            raise ConfigurationError("give either 'phase' or 'phase-deg', not both")
        if phase is not None:
            return float(phase)
        if degrees is not None:
            return math.radians(degrees)
    return None


def _parse_model(name: str, key: str) -> ModelId:
    for model in ModelId:
        if model.value == name:
            return model
    raise ConfigurationError(f"invalid value for '{key}': {name!r} "
                             f"(expected one of quantum, local, ether)")


def _parse_regime(name: str, key: str = "regime") -> SeparationRegime:
    for regime in SeparationRegime:
        if regime.value == name:
            return regime
    raise ConfigurationError(f"invalid value for '{key}': {name!r} "
                             f"(expected timelike or spacelike)")


def _ether_from_options(opts: _Options, light_speed: float) -> EtherConfig:
    return EtherConfig(
        arm_length=opts["ether-arm-length"],
        ether_velocity=opts["ether-velocity"],
        wavelength=opts["wavelength"],
        light_speed=light_speed,
        aligned=not opts["ether-misaligned"],
    )


def _experiment_config(opts: _Options) -> tuple[ExperimentConfig, int]:
    light_speed = _light_speed(opts)
    model = _parse_model(opts["model"], "model")
    phase = _resolve_phase(opts)
    geometry = None
    if opts.given("long-arm") or opts.given("short-arm"):
        if opts["long-arm"] is None or opts["short-arm"] is None:
            raise ConfigurationError("geometry needs both 'long-arm' and 'short-arm'")
        geometry = OpticalGeometry(
            long_arm=opts["long-arm"],
            short_arm=opts["short-arm"],
            wavelength=opts["wavelength"],
            light_speed=light_speed,
        )
    if phase is None and geometry is None:
        phase = HALF_PI
    ether = _ether_from_options(opts, light_speed) if model is ModelId.ETHER else None
    config = ExperimentConfig(
        model=model,
        phase=phase,
        geometry=geometry,
        detector_distance=opts["distance"],
        gate_window=opts["gate-window"],
        light_speed=light_speed,
        ether=ether,
        trials=opts["trials"],
        seed=opts["seed"],
    )
    shards = opts["shards"]
    if not isinstance(shards, int) or shards < 1:
        raise ConfigurationError(f"invalid value for 'shards': {shards!r}")
    return config, shards


def _bool_text(value: bool) -> str:
    return "true" if value else "false"


def _dump_config_text(config: ExperimentConfig, shards: int) -> str:
    """The effective simulate configuration as a reparsable key = value file."""
    lines = [f"model = {config.model.value}"]
    if config.phase is not None:
        lines.append(f"phase = {config.phase!r}")
    if config.geometry is not None:
        lines.append(f"long-arm = {config.geometry.long_arm!r}")
        lines.append(f"short-arm = {config.geometry.short_arm!r}")
    lines.append(f"distance = {config.detector_distance!r}")
    lines.append(f"gate-window = {config.gate_window!r}")
    lines.append(f"c = {config.light_speed!r}")
    if config.geometry is not None or config.ether is not None:
        wavelength = (config.ether or config.geometry).wavelength
        lines.append(f"wavelength = {wavelength!r}")
    if config.ether is not None:
        lines.append(f"ether-arm-length = {config.ether.arm_length!r}")
        lines.append(f"ether-velocity = {config.ether.ether_velocity!r}")
        lines.append(f"ether-misaligned = {_bool_text(not config.ether.aligned)}")
    lines.append(f"trials = {config.trials}")
    lines.append(f"seed = {config.seed}")
    lines.append(f"shards = {shards}")
    return "\n".join(lines) + "\n"


def _cmd_simulate(opts: _Options, args: argparse.Namespace) -> int:
    config, shards = _experiment_config(opts)
    if getattr(args, "dump_config", False):
        _write_text(args.out_path, _dump_config_text(config, shards))
        return 0
    ledger = run(config, shards=shards)
    _write_text(args.out_path, ledger.to_text())
    return 0


def _cmd_sweep(opts: _Options, args: argparse.Namespace) -> int:
    light_speed = _light_speed(opts)
    models = [_parse_model(name.strip(), "models") for name in opts["models"].split(",")]
    regimes = [_parse_regime(name.strip(), "regimes") for name in opts["regimes"].split(",")]
    ether = _ether_from_options(opts, light_speed) if ModelId.ETHER in models else None
    rows = sweep_phase(models, regimes, default_phase_grid(opts["grid"]), ether=ether)
    buffer = io.StringIO()
    write_sweep_csv(rows, buffer)
    _write_text(args.out_path, buffer.getvalue())
    return 0


def _hypothesis_distribution(
    opts: _Options, key: str, phase: float, regime: SeparationRegime, light_speed: float
) -> tuple[OutcomeDistribution, str]:
    model = _parse_model(opts[key], key)
    if model is ModelId.NONLOCAL_QUANTUM:
        return quantum_joint(phase), model.value
    if model is ModelId.LOCAL_DETECTION:
        return local_joint(phase, regime), model.value
    return ether_joint(phase, _ether_from_options(opts, light_speed)), model.value


def _shared_context(opts: _Options) -> tuple[float, SeparationRegime, float]:
    light_speed = _light_speed(opts)
    phase = _resolve_phase(opts)
    if phase is None:
        phase = HALF_PI
    if opts["regime"] is not None:
        regime = _parse_regime(opts["regime"])
    else:
        regime = separation_regime(opts["distance"], opts["gate-window"], light_speed)
    return phase, regime, light_speed


def _cmd_discriminate(opts: _Options, args: argparse.Namespace) -> int:
    with open(opts["ledger"], "r", encoding="utf-8") as fh:
        ledger = TrialLedger.from_text(fh.read())
    phase, regime, light_speed = _shared_context(opts)
    dist_a, label_a = _hypothesis_distribution(opts, "hypothesis-a", phase, regime, light_speed)
    dist_b, label_b = _hypothesis_distribution(opts, "hypothesis-b", phase, regime, light_speed)
    report = discriminate(
        ledger, dist_a, dist_b,
        significance=opts["significance"],
        label_a=label_a, label_b=label_b,
    )
    lines = [
        f"trials = {report.n}",
        f"phase_rad = {format_number(phase)}",
        f"regime = {regime.value}",
        f"hypothesis_a = {report.label_a}",
        f"hypothesis_b = {report.label_b}",
        f"llr = {format_number(report.llr)}",
        f"p_value = {format_number(report.p_value)}",
        f"p_value_under_a = {format_number(report.p_value_under_a)}",
        f"significance = {format_number(report.significance)}",
        f"certain_rejection = {_bool_text(report.certain_rejection)}",
        f"verdict = {report.verdict.value}",
    ]
    _write_text(args.out_path, "\n".join(lines) + "\n")
    return 0


def _cmd_power(opts: _Options, args: argparse.Namespace) -> int:
    phase, regime, light_speed = _shared_context(opts)
    dist_a, _ = _hypothesis_distribution(opts, "hypothesis-a", phase, regime, light_speed)
    dist_b, _ = _hypothesis_distribution(opts, "hypothesis-b", phase, regime, light_speed)
    n = sample_size_for_power(
        dist_a, dist_b,
        significance=opts["significance"],
        power=opts["power"],
        mc_seed=opts["mc-seed"],
        mc_reps=opts["mc-reps"],
    )
    _write_text(args.out_path, f"n = {n}\n")
    return 0


def _cmd_ether_design(opts: _Options, args: argparse.Namespace) -> int:
    arm_length = required_arm_length(
        target_shift=opts["target-shift"],
        ether_velocity=opts["v"],
        light_speed=opts["c"],
        wavelength=opts["lambda"],
    )
    _write_text(args.out_path, f"L = {format_number(arm_length)} m\n")
    return 0


_COMMANDS = {
    "simulate": _cmd_simulate,
    "sweep": _cmd_sweep,
    "discriminate": _cmd_discriminate,
    "power": _cmd_power,
    "ether-design": _cmd_ether_design,
}


def parse_and_dispatch(argv: Sequence[str]) -> int:
    """Run one CLI invocation; returns the process exit status."""
    parser = _build_parser()
    try:
        args = parser.parse_args(list(argv))
        if args.command is None:
            parser.error("a subcommand is required")
        schema = _COMMAND_OPTIONS[args.command]
        file_values = (
            _read_config_file(args.config_path, schema) if args.config_path else {}
        )
        cli_values = {option.name: getattr(args, _dest(option.name)) for option in schema}
        opts = _Options(schema, cli_values, file_values)
        opts.require()
        return _COMMANDS[args.command](opts, args)
    except SystemExit as exc:  # argparse --help
        return 0 if exc.code is None else int(exc.code)
    except DataInconsistencyError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (ConfigurationError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


def main(argv: Sequence[str] | None = None) -> None:
    sys.exit(parse_and_dispatch(sys.argv[1:] if argv is None else argv))


if __name__ == "__main__":
    main()

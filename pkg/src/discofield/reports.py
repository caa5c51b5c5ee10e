"""
Run configuration, command dispatch and deterministic report files.

A run writes ``<out>/<command>.report.json`` and ``<out>/<command>.checks.csv``.
Both are byte-stable for a fixed configuration, seed and package version.
Wall time is kept out of them, in ``<out>/<command>.timing.json``.
"""

import csv
import io
import json
import math
import time
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from . import __version__
from .checks import DEFAULT_TOLERANCES, EQ_REGISTRY, SUITES, Check
from .errors import DiscofieldError, ParseError, ValidationError
from .field import ModelConfig
from .hermite import GaussianParams
from .mass import MassSectorParams
from .relativistic import DIMENSION_CAP, DispersionTensor, FourMeans, on_shell

COMMANDS = tuple(SUITES) + ("all",)

DEFAULT_CUTOFFS = {
    "ladder_1d": 16,
    "tensor": [3, 3, 3, 3],
    "scalar": [3, 3, 3, 3, 6],
    "fermion": [2, 2, 2, 2, 2],
}

DEFAULT_SAMPLING = {
    "points": 100,
    "random_families": 10,
    "hermite_nmax": 20,
    "random_configs": 4,
    "random_momenta": 20,
    "max_tuples": 8,
}

DEFAULT_CONFIG = {
    "B": [4.0, 1.0, 1.0, 1.0],
    "M": 1.0,
    "dm": 1.0,
    "Pvec": [0.0, 0.0, 0.0],
}

_TOP_KEYS = {"B", "X", "P", "Pvec", "M", "T", "dm", "oscillator", "cutoffs", "max_n",
             "tolerances", "seed", "output_dir", "sampling"}


@dataclass
class RunConfig:
    model: ModelConfig
    oscillator: GaussianParams
    cutoffs: dict
    tolerances: dict
    max_n: int = 2
    seed: int = 0
    output_dir: str = "reports"
    sampling: dict = field(default_factory=lambda: dict(DEFAULT_SAMPLING))
    tolerance_scale: float = 1.0
    cutoff_cap: int = DIMENSION_CAP
    exponent_variant: str = "matched"

    @property
    def mass(self):
        return self.model.mass

    def __getattr__(self, name):
        # sampling sizes read as attributes by the suites
        sampling = self.__dict__.get("sampling", {})
        key = "points" if name == "n_points" else name
        if key in sampling:
            return sampling[key]
        raise AttributeError(name)

    def echo(self):
        """Plain-data form with every default filled in."""
        m = self.model
        B = m.B.B
        return {
            "B": np.diag(B).tolist() if m.B.diagonal else B.tolist(),
            "X": list(m.means.X),
            "P": list(m.means.P),
            "M": m.mass.M,
            "T": m.mass.T,
            "dm": m.mass.dm,
            "oscillator": {"X": self.oscillator.X, "P": self.oscillator.P, "dp": self.oscillator.dp},
            "cutoffs": {k: self.cutoffs[k] for k in sorted(self.cutoffs)},
            "max_n": self.max_n,
            "tolerances": {k: self.tolerances[k] for k in sorted(self.tolerances)},
            "sampling": {k: self.sampling[k] for k in sorted(self.sampling)},
            "seed": self.seed,
            "output_dir": str(self.output_dir),
            "tolerance_scale": self.tolerance_scale,
            "cutoff_cap": self.cutoff_cap,
            "exponent_variant": self.exponent_variant,
        }


def _reject_unknown(d, allowed, where):
    extra = sorted(set(d) - set(allowed))
    if extra:
        raise ValidationError(f"unknown key(s) in {where}: {', '.join(extra)}")


def _vector(value, n, name):
    try:
        v = [float(x) for x in value]
    except (TypeError, ValueError):
        raise ValidationError(f"{name} must be a list of {n} numbers") from None
    if len(v) != n or not all(math.isfinite(x) for x in v):
        raise ValidationError(f"{name} must be a list of {n} finite numbers")
    return v


def _number(value, name):
    if isinstance(value, bool) or not isinstance(value, (int, float)) or not math.isfinite(value):
        raise ValidationError(f"{name} must be a finite number")
    return float(value)


def _integer(value, name, minimum=0):
    if isinstance(value, bool) or not isinstance(value, int) or value < minimum:
        raise ValidationError(f"{name} must be an integer >= {minimum}")
    return value


def _tensor(value):
    if isinstance(value, dict):
        _reject_unknown(value, {"diag"}, "B")
        if "diag" not in value:
            raise ValidationError("B given as an object needs a 'diag' entry")
        value = value["diag"]
    try:
        arr = np.array(value, dtype=float)
    except (TypeError, ValueError):
        raise ValidationError("B must be 4 diagonal entries or a 4x4 matrix") from None
    if arr.shape == (4,):
        if np.any(arr <= 0):
            raise ValidationError("B diagonal entries must be strictly positive")
    try:
        return DispersionTensor(arr)
    except ValueError as exc:
        msg = str(exc).replace("dispersion tensor", "B")
        raise ValidationError(msg) from None


def build_run_config(data, seed=None, output_dir=None, tolerance_scale=1.0,
                     cutoff_cap=DIMENSION_CAP, exponent_variant="matched"):
    """Validate plain configuration data and fill in defaults.

    Raises
    ------
    ValidationError
        Naming the first violated invariant or the unknown keys.
    """
    if not isinstance(data, dict):
        raise ValidationError("configuration must be a JSON object")
    _reject_unknown(data, _TOP_KEYS, "configuration")
    if "B" not in data or "M" not in data or "dm" not in data:
        raise ValidationError("configuration needs B, M and dm")
    B = _tensor(data["B"])
    M = _number(data["M"], "M")
    if M < 0:
        raise ValidationError("M must be non-negative")
    dm = _number(data["dm"], "dm")
    if dm <= 0:
        raise ValidationError("dm must be strictly positive")
    T = _number(data.get("T", 0.0), "T")
    X = _vector(data.get("X", [0.0] * 4), 4, "X")
    if "P" in data and "Pvec" in data:
        raise ValidationError("give either P or Pvec, not both")
    if "P" in data:
        means = FourMeans(X, _vector(data["P"], 4, "P"))
    else:
        means = on_shell(M, _vector(data.get("Pvec", [0.0] * 3), 3, "Pvec"), X)
    try:
        model = ModelConfig(B, means, MassSectorParams(M, T, dm))
    except ValidationError:
        raise
    except ValueError as exc:
        raise ValidationError(str(exc)) from None

    osc = data.get("oscillator", {})
    if not isinstance(osc, dict):
        raise ValidationError("oscillator must be an object")
    _reject_unknown(osc, {"X", "P", "dp"}, "oscillator")
    dp = _number(osc.get("dp", 0.5), "oscillator.dp")
    if dp <= 0:
        raise ValidationError("oscillator.dp must be strictly positive")
    oscillator = GaussianParams(_number(osc.get("X", 0.0), "oscillator.X"),
                                _number(osc.get("P", 0.0), "oscillator.P"), dp)

    cut = data.get("cutoffs", {})
    if not isinstance(cut, dict):
        raise ValidationError("cutoffs must be an object")
    _reject_unknown(cut, DEFAULT_CUTOFFS, "cutoffs")
    cutoffs = dict(DEFAULT_CUTOFFS)
    for key, val in cut.items():
        if key == "ladder_1d":
            cutoffs[key] = _integer(val, "cutoffs.ladder_1d", 6)
        else:
            n = len(DEFAULT_CUTOFFS[key])
            if not isinstance(val, list) or len(val) != n:
                raise ValidationError(f"cutoffs.{key} must be a list of {n} integers")
            cutoffs[key] = [_integer(v, f"cutoffs.{key}", 2) for v in val]

    tol = data.get("tolerances", {})
    if not isinstance(tol, dict):
        raise ValidationError("tolerances must be an object")
    _reject_unknown(tol, DEFAULT_TOLERANCES, "tolerances")
    tolerances = dict(DEFAULT_TOLERANCES)
    for key, val in tol.items():
        v = _number(val, f"tolerances.{key}")
        if v <= 0:
            raise ValidationError(f"tolerances.{key} must be positive")
        tolerances[key] = v

    samp = data.get("sampling", {})
    if not isinstance(samp, dict):
        raise ValidationError("sampling must be an object")
    _reject_unknown(samp, DEFAULT_SAMPLING, "sampling")
    sampling = dict(DEFAULT_SAMPLING)
    for key, val in samp.items():
        sampling[key] = _integer(val, f"sampling.{key}", 1)

    run_seed = _integer(data.get("seed", 0), "seed") if seed is None else _integer(seed, "seed")
    out = output_dir if output_dir is not None else data.get("output_dir", "reports")
    if not isinstance(out, str):
        raise ValidationError("output_dir must be a string")
    if not (isinstance(tolerance_scale, (int, float)) and tolerance_scale > 0):
        raise ValidationError("tolerance scale must be positive")
    if exponent_variant not in ("matched", "literal"):
        raise ValidationError("exponent variant must be 'matched' or 'literal'")
    return RunConfig(model, oscillator, cutoffs, tolerances,
                     max_n=_integer(data.get("max_n", 2), "max_n"), seed=run_seed,
                     output_dir=out, sampling=sampling, tolerance_scale=float(tolerance_scale),
                     cutoff_cap=_integer(cutoff_cap, "cutoff cap", 1),
                     exponent_variant=exponent_variant)


def load_config(path, **overrides):
    """Read a JSON configuration file into a validated :class:`RunConfig`.

    Raises
    ------
    ParseError
        Malformed JSON, with line and column.
    ValidationError
        Well-formed JSON violating an invariant.
    """
    text = Path(path).read_text(encoding="utf-8")
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(exc.msg, exc.lineno, exc.colno) from None
    return build_run_config(data, **overrides)


def default_config(**overrides):
    return build_run_config(dict(DEFAULT_CONFIG), **overrides)


# --- reports ---------------------------------------------------------------

@dataclass
class RunReport:
    command: str
    config: dict
    checks: list
    info: dict
    errors: list
    version: str = __version__
    wall_time: float = 0.0

    @property
    def exit_code(self):
        if self.errors:
            return 2
        return 0 if all(c.passed for c in self.checks) else 1

    def to_dict(self):
        return {
            "command": self.command,
            "tool_version": self.version,
            "config": self.config,
            "checks": [{"id": c.id, "eq_ref": c.eq_ref, "value": c.value,
                        "tolerance": c.tolerance, "pass": c.passed} for c in self.checks],
            "errors": self.errors,
            "info": self.info,
            "summary": {
                "checks": len(self.checks),
                "failed": [c.id for c in self.checks if not c.passed],
                "exit_code": self.exit_code,
            },
        }


def fmt_float(x):
    """17 significant digits, round-trip safe; non-finite values become null."""
    if not math.isfinite(x):
        return "null"
    return f"{x:.17g}"


def _plain(obj):
    if isinstance(obj, dict):
        return {str(k): _plain(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_plain(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return _plain(obj.tolist())
    if isinstance(obj, (np.bool_, bool)):
        return bool(obj)
    if isinstance(obj, (np.integer, int)):
        return int(obj)
    if isinstance(obj, (np.floating, float)):
        return float(obj)
    if isinstance(obj, (np.complexfloating, complex)):
        return [float(obj.real), float(obj.imag)]
    return obj


def dumps(obj, indent=0):
    """Deterministic JSON with 17-significant-digit floats and sorted keys."""
    pad = "  " * (indent + 1)
    end = "  " * indent
    if isinstance(obj, dict):
        if not obj:
            return "{}"
        items = [f"{pad}{json.dumps(k)}: {dumps(obj[k], indent + 1)}" for k in sorted(obj)]
        return "{\n" + ",\n".join(items) + "\n" + end + "}"
    if isinstance(obj, list):
        if not obj:
            return "[]"
        if all(not isinstance(v, (dict, list)) for v in obj):
            return "[" + ", ".join(dumps(v) for v in obj) + "]"
        return "[\n" + ",\n".join(pad + dumps(v, indent + 1) for v in obj) + "\n" + end + "]"
    if isinstance(obj, bool) or obj is None:
        return json.dumps(obj)
    if isinstance(obj, float):
        return fmt_float(obj)
    return json.dumps(obj)


def checks_csv(checks):
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["check_id", "eq_ref", "value", "tolerance", "pass"])
    for c in checks:
        tol = "" if c.tolerance is None else fmt_float(c.tolerance)
        w.writerow([c.id, c.eq_ref, fmt_float(c.value), tol, "true" if c.passed else "false"])
    return buf.getvalue()


def _run_suite(name, run):
    try:
        s = SUITES[name](run)
        return s.rows, s.info, []
    except (DiscofieldError, ValueError, ArithmeticError, np.linalg.LinAlgError) as exc:
        err = {"suite": name, "type": type(exc).__name__, "message": str(exc)}
        row = Check(f"{name}/error", "computation-error", float("nan"), None, False)
        return [row], {}, [err]


def dispatch(command, run):
    """Run a command's check suite (every suite for ``all``) and build its report."""
    if command not in COMMANDS:
        raise ValueError(f"unknown command {command!r}; choose from {', '.join(COMMANDS)}")
    t0 = time.perf_counter()
    names = SUITES if command == "all" else [command]
    checks, info, errors = [], {}, []
    for name in names:
        rows, inf, errs = _run_suite(name, run)
        if command == "all":
            rows = [Check(f"{name}:{r.id}", r.eq_ref, r.value, r.tolerance, r.passed) for r in rows]
            if inf:
                info[name] = inf
        else:
            info.update(inf)
        checks.extend(rows)
        errors.extend(errs)
    assert all(c.eq_ref in EQ_REGISTRY for c in checks)
    return RunReport(command, run.echo(), checks, _plain(info), errors,
                     wall_time=time.perf_counter() - t0)


def write_report(report, out_dir):
    """Write report JSON, checks CSV and the timing sidecar; return their paths."""
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    paths = {
        "report": out / f"{report.command}.report.json",
        "checks": out / f"{report.command}.checks.csv",
        "timing": out / f"{report.command}.timing.json",
    }
    paths["report"].write_text(dumps(_plain(report.to_dict())) + "\n", encoding="utf-8")
    paths["checks"].write_text(checks_csv(report.checks), encoding="utf-8")
    paths["timing"].write_text(dumps({"command": report.command, "wall_time_s": report.wall_time}) + "\n",
                               encoding="utf-8")
    return paths

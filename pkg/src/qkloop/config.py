"""Suite configuration: a single JSON document, validated before any work runs.

Example (every key optional)::

    {
      "ring": {"D": 4, "N": 4, "Q": 1},
      "grid": {"tau": ["0", "Q"], "t": ["0", "N1"], "eps": ["Q"]},
      "checks": ["sstar_s", "ancestor_shift"],
      "m": [2, 3, 4],
      "seed": 0,
      "random_cases": 20,
      "corrupt_sign": false,
      "output": "report.json",
      "workers": 1
    }
"""

from dataclasses import dataclass
import json

from .coeff_ring import RingConfig

CHECKS = (
    "sstar_s",
    "wdvv_kernel",
    "w_form",
    "ancestor_shift",
    "cone_scaling",
    "string_flow",
    "ruling",
    "cone_roundtrip",
    "adelic_regularity",
    "psi_localization",
    "f0_reconstruction",
    "tangent_parameter",
    "hamiltonian",
)

# checks whose outcome depends on the sign convention of S
SIGN_SENSITIVE = ("sstar_s", "ancestor_shift")

_DEFAULT_GRID = ["0", "Q", "N1", "Q+N1"]


class ConfigError(ValueError):
    pass


@dataclass(frozen=True)
class SuiteConfig:
    D: int = 4
    N: int | None = None
    Q: int = 1
    tau: tuple = tuple(_DEFAULT_GRID)
    t: tuple = tuple(_DEFAULT_GRID)
    eps: tuple = ("Q",)
    checks: tuple = CHECKS
    m: tuple = (2, 3, 4)
    seed: int = 0
    random_cases: int = 20
    corrupt_sign: bool = False
    output: str | None = None
    workers: int = 1

    def ring(self):
        return RingConfig(novikov_count=self.Q, sym_cutoff=self.N, truncation_degree=self.D)

    def to_dict(self):
        return {
            "ring": {"D": self.D, "N": self.N, "Q": self.Q},
            "grid": {"tau": list(self.tau), "t": list(self.t), "eps": list(self.eps)},
            "checks": list(self.checks),
            "m": list(self.m),
            "seed": self.seed,
            "random_cases": self.random_cases,
            "corrupt_sign": self.corrupt_sign,
            "output": self.output,
            "workers": self.workers,
        }


_TOP = {"ring", "grid", "checks", "m", "seed", "random_cases", "corrupt_sign", "output", "workers"}
_RING = {"D", "N", "Q"}
_GRID = {"tau", "t", "eps"}


def _reject_unknown(d, allowed, where):
    if not isinstance(d, dict):
        raise ConfigError(f"{where}: expected an object")
    extra = sorted(set(d) - allowed)
    if extra:
        raise ConfigError(f"{where}: unknown key(s) {', '.join(extra)}")


def _int(v, where, lo=None):
    if isinstance(v, bool) or not isinstance(v, int):
        raise ConfigError(f"{where}: expected an integer")
    if lo is not None and v < lo:
        raise ConfigError(f"{where}: must be >= {lo}")
    return v


def _strings(v, where):
    if not isinstance(v, list) or not all(isinstance(x, str) for x in v):
        raise ConfigError(f"{where}: expected a list of strings")
    return tuple(v)


def config_from_dict(d):
    """Validate a decoded JSON object and build a :class:`SuiteConfig`."""
    _reject_unknown(d, _TOP, "config")
    kw = {}
    ring = d.get("ring", {})
    _reject_unknown(ring, _RING, "ring")
    if "D" in ring:
        kw["D"] = _int(ring["D"], "ring.D", 1)
    if ring.get("N") is not None:
        kw["N"] = _int(ring["N"], "ring.N", 1)
    if "Q" in ring:
        kw["Q"] = _int(ring["Q"], "ring.Q", 0)
    grid = d.get("grid", {})
    _reject_unknown(grid, _GRID, "grid")
    for key in _GRID:
        if key in grid:
            kw[key] = _strings(grid[key], f"grid.{key}")
    if "checks" in d:
        checks = _strings(d["checks"], "checks")
        unknown = [c for c in checks if c not in CHECKS]
        if unknown:
            raise ConfigError(f"checks: unknown check(s) {', '.join(unknown)}")
        kw["checks"] = checks
    if "m" in d:
        if not isinstance(d["m"], list):
            raise ConfigError("m: expected a list of integers")
        kw["m"] = tuple(_int(x, "m", 1) for x in d["m"])
    for key in ("seed", "random_cases"):
        if key in d:
            kw[key] = _int(d[key], key, 0)
    if "workers" in d:
        kw["workers"] = _int(d["workers"], "workers", 1)
    if "corrupt_sign" in d:
        if not isinstance(d["corrupt_sign"], bool):
            raise ConfigError("corrupt_sign: expected a boolean")
        kw["corrupt_sign"] = d["corrupt_sign"]
    if d.get("output") is not None:
        if not isinstance(d["output"], str):
            raise ConfigError("output: expected a path string")
        kw["output"] = d["output"]
    cfg = SuiteConfig(**kw)
    try:
        cfg.ring()
    except ValueError as exc:
        raise ConfigError(f"ring: {exc}") from None
    return cfg


def load_config(path):
    """Read and validate a config file. I/O errors propagate as OSError."""
    with open(path, encoding="utf-8") as fh:
        text = fh.read()
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigError(f"invalid JSON at {exc.lineno}:{exc.colno}: {exc.msg}") from None
    return config_from_dict(data)

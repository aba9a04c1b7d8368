"""Sweep configuration and named presets for the experiment runner.

A SweepConfig describes one batch of runs: which fractional orders and
couplings, the initial state, the time grid, and which observables to
serialize. Presets reproduce the parameter sets used for the standard
figure-style experiments (Fock-seed inversion and periods, coupling
sweep, inverse-problem profiles, coherent-seed photon statistics,
quadrature variance and phase-space snapshots).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, asdict

from .errors import ConfigError, PresetError
from .mittag import DEFAULT_TOL

__all__ = [
    "OBSERVABLE_NAMES",
    "SweepConfig",
    "preset",
    "preset_names",
]

OBSERVABLE_NAMES = (
    "inversion",
    "concurrence",
    "mean_n",
    "parity",
    "mandel_q",
    "var_x",
    "field_moments",
    "husimi",
    "periods",
    "coupling",
)

SEED_NAMES = ("fock_excited", "coherent")

ML_TOL_MIN = 1e-14
ML_TOL_MAX = 1e-6


@dataclass(frozen=True)
class SweepConfig:
    """Parameters of one experiment batch.

    mu_list, when given, overrides mu with a sweep over couplings.
    husimi_times are snapped to the nearest grid time at run time.
    """

    alpha_list: tuple = (1.0,)
    mu: float = 1.0
    mu_list: tuple | None = None
    seed: str = "fock_excited"
    beta: complex = 3.0 + 0j
    t_max: float = 40.0
    dt: float = 1e-2
    n_max: int = 4
    observables: tuple = ("inversion",)
    husimi_times: tuple = ()
    husimi_window: tuple = (-5.0, 5.0, -5.0, 5.0)
    husimi_resolution: int = 201
    ml_tol: float = DEFAULT_TOL
    period_count: int = 10
    output_dir: str = "out"

    def __post_init__(self):
        object.__setattr__(self, "alpha_list", tuple(float(a) for a in self.alpha_list))
        if self.mu_list is not None:
            object.__setattr__(self, "mu_list", tuple(float(m) for m in self.mu_list))
        object.__setattr__(self, "beta", complex(self.beta))
        object.__setattr__(self, "observables", tuple(self.observables))
        object.__setattr__(self, "husimi_times", tuple(float(t) for t in self.husimi_times))
        object.__setattr__(self, "husimi_window", tuple(float(v) for v in self.husimi_window))
        self.validate()

    def validate(self) -> None:
        if not self.alpha_list:
            raise ConfigError("alpha_list must not be empty")
        for a in self.alpha_list:
            if not (0.0 < a <= 1.0) or not math.isfinite(a):
                raise ConfigError(f"fractional order must lie in (0, 1], got {a}")
        for m in self.couplings():
            if not (m > 0.0 and math.isfinite(m)):
                raise ConfigError(f"coupling must be positive and finite, got {m}")
        if self.seed not in SEED_NAMES:
            raise ConfigError(f"seed must be one of {SEED_NAMES}, got {self.seed!r}")
        b = complex(self.beta)
        if not (math.isfinite(b.real) and math.isfinite(b.imag)):
            raise ConfigError("beta must be finite")
        if not (self.t_max > 0.0 and math.isfinite(self.t_max)):
            raise ConfigError(f"t_max must be positive, got {self.t_max}")
        if not (self.dt > 0.0 and math.isfinite(self.dt)):
            raise ConfigError(f"dt must be positive, got {self.dt}")
        if self.dt > self.t_max / 100.0:
            raise ConfigError(
                f"dt={self.dt:g} is too coarse for t_max={self.t_max:g} "
                f"(need dt <= t_max/100)")
        if self.n_max < 0:
            raise ConfigError(f"n_max must be >= 0, got {self.n_max}")
        unknown = [o for o in self.observables if o not in OBSERVABLE_NAMES]
        if unknown:
            raise ConfigError(
                f"unknown observables {unknown}; valid names: {OBSERVABLE_NAMES}")
        if len(set(self.observables)) != len(self.observables):
            raise ConfigError("observables contains duplicates")
        if self.seed == "fock_excited" and "mandel_q" in self.observables:
            raise ConfigError(
                "mandel_q is undefined at t=0 for the fock_excited seed "
                "(vacuum field); use the coherent seed")
        if self.seed == "coherent" and "concurrence" in self.observables:
            raise ConfigError(
                "concurrence needs the state confined to the zero/one-photon "
                "sector; the coherent seed is not")
        if self.seed == "coherent" and "coupling" in self.observables:
            raise ConfigError(
                "coupling extraction is defined for the fock_excited seed only")
        if "husimi" in self.observables and not self.husimi_times:
            raise ConfigError("husimi requires at least one entry in husimi_times")
        if self.husimi_times and "husimi" not in self.observables:
            raise ConfigError("husimi_times given but husimi is not in observables")
        for tau in self.husimi_times:
            if not (0.0 <= tau <= self.t_max):
                raise ConfigError(
                    f"husimi time {tau:g} lies outside [0, t_max={self.t_max:g}]")
        if len(self.husimi_window) != 4:
            raise ConfigError("husimi_window must be (re_lo, re_hi, im_lo, im_hi)")
        re_lo, re_hi, im_lo, im_hi = self.husimi_window
        if not (re_lo < re_hi and im_lo < im_hi):
            raise ConfigError("husimi_window must have positive extent")
        if self.husimi_resolution < 2:
            raise ConfigError("husimi_resolution must be >= 2")
        if not (ML_TOL_MIN <= self.ml_tol <= ML_TOL_MAX):
            raise ConfigError(
                f"ml_tol must lie in [{ML_TOL_MIN:g}, {ML_TOL_MAX:g}], "
                f"got {self.ml_tol:g}")
        if self.period_count < 1:
            raise ConfigError(f"period_count must be >= 1, got {self.period_count}")
        if not self.output_dir:
            raise ConfigError("output_dir must not be empty")

    def couplings(self) -> tuple:
        return self.mu_list if self.mu_list is not None else (self.mu,)

    def to_dict(self) -> dict:
        d = asdict(self)
        d["beta"] = [self.beta.real, self.beta.imag]
        d["alpha_list"] = list(self.alpha_list)
        d["mu_list"] = list(self.mu_list) if self.mu_list is not None else None
        d["observables"] = list(self.observables)
        d["husimi_times"] = list(self.husimi_times)
        d["husimi_window"] = list(self.husimi_window)
        return d

    @classmethod
    def from_dict(cls, data: dict) -> "SweepConfig":
        if not isinstance(data, dict):
            raise ConfigError("config must be a mapping")
        known = set(cls.__dataclass_fields__)
        unknown = sorted(set(data) - known)
        if unknown:
            raise ConfigError(f"unknown config keys {unknown}")
        kwargs = dict(data)
        if "beta" in kwargs:
            b = kwargs["beta"]
            if isinstance(b, (list, tuple)):
                if len(b) != 2:
                    raise ConfigError("beta as a pair must be [real, imag]")
                kwargs["beta"] = complex(float(b[0]), float(b[1]))
            else:
                kwargs["beta"] = complex(b)
        for key in ("alpha_list", "mu_list", "observables", "husimi_times",
                    "husimi_window"):
            if key in kwargs and kwargs[key] is not None:
                kwargs[key] = tuple(kwargs[key])
        try:
            return cls(**kwargs)
        except TypeError as exc:
            raise ConfigError(str(exc)) from None


FOCK_ALPHAS = (1.0, 0.75, 0.5, 0.25)
COHERENT_ALPHAS = (1.0, 0.75, 0.5, 0.4)


def _presets() -> dict:
    return {
        # Fock-seed inversion (and the entanglement it implies)
        "fig2": SweepConfig(
            alpha_list=FOCK_ALPHAS, mu=1.0, seed="fock_excited",
            t_max=40.0, dt=1e-2, n_max=4,
            observables=("inversion", "concurrence")),
        # oscillation periods need a fine grid and a long span
        "fig3": SweepConfig(
            alpha_list=FOCK_ALPHAS, mu=1.0, seed="fock_excited",
            t_max=75.0, dt=1e-3, n_max=4,
            observables=("inversion", "periods"), period_count=10),
        # coupling-strength sweep
        "fig4": SweepConfig(
            alpha_list=FOCK_ALPHAS, mu_list=(0.5, 0.75, 1.0, 1.25, 1.5, 1.75, 2.0),
            seed="fock_excited", t_max=4.0 * math.pi, dt=1e-2, n_max=4,
            observables=("inversion",)),
        # inverse problem: effective coupling profiles plus round-trip checks
        "fig5": SweepConfig(
            alpha_list=FOCK_ALPHAS, mu=1.0, seed="fock_excited",
            t_max=8.0 * math.pi, dt=2e-3, n_max=4,
            observables=("inversion", "coupling")),
        # coherent-seed photon statistics
        "fig6": SweepConfig(
            alpha_list=COHERENT_ALPHAS, mu=1.0, seed="coherent", beta=3.0,
            t_max=40.0, dt=1e-2, n_max=40, observables=("mean_n",)),
        "fig7": SweepConfig(
            alpha_list=COHERENT_ALPHAS, mu=1.0, seed="coherent", beta=3.0,
            t_max=40.0, dt=1e-2, n_max=40, observables=("parity",)),
        "fig8": SweepConfig(
            alpha_list=COHERENT_ALPHAS, mu=1.0, seed="coherent", beta=3.0,
            t_max=40.0, dt=1e-2, n_max=40, observables=("mandel_q",)),
        # quadrature variance: early-time squeezing window and long view
        "fig9a": SweepConfig(
            alpha_list=COHERENT_ALPHAS, mu=1.0, seed="coherent", beta=3.0,
            t_max=1.1, dt=1e-3, n_max=40, observables=("var_x",)),
        "fig9b": SweepConfig(
            alpha_list=COHERENT_ALPHAS, mu=1.0, seed="coherent", beta=3.0,
            t_max=20.0, dt=1e-2, n_max=40, observables=("var_x",)),
        # phase-space snapshot at half the revival time; the window is
        # enlarged beyond the default so the blobs at radius |beta| sit
        # clear of the boundary, with the point spacing kept at 0.05
        "fig10": SweepConfig(
            alpha_list=COHERENT_ALPHAS, mu=1.0, seed="coherent", beta=3.0,
            t_max=3.0 * math.pi, dt=1e-2, n_max=40,
            observables=("husimi",), husimi_times=(3.0 * math.pi,),
            husimi_window=(-7.0, 7.0, -7.0, 7.0), husimi_resolution=281),
    }


def preset_names() -> tuple:
    return tuple(sorted(_presets()))


def preset(name: str) -> SweepConfig:
    """Named parameter set; raises PresetError for unknown names."""
    table = _presets()
    if name not in table:
        raise PresetError(
            f"unknown preset {name!r}; available: {', '.join(sorted(table))}")
    return table[name]

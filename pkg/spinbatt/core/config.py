"""
Run configuration.
The YAML file is validated by pydantic models; each section builds the domain
value type consumed by the simulation packages.
"""

import hashlib
import json
import logging
import math
import os
from pathlib import Path
from typing import Any, Dict, List, Optional, Tuple, Union

import yaml
from dotenv import load_dotenv
from pydantic import BaseModel, ConfigDict, Field, ValidationError, field_validator, model_validator

from .errors import ConfigurationError
from .units import (
    BOHR_MAGNETON,
    ELECTRON_G_FACTOR,
    RB87_GYROMAGNETIC_RATIO,
    RB87_HYPERFINE_SPLITTING,
    RB87_NUCLEAR_MOMENT,
    EnergyUnit,
)

logger = logging.getLogger(__name__)

OUTPUT_DIR_ENV = "SPINBATT_OUTPUT_DIR"


class _Section(BaseModel):
    model_config = ConfigDict(extra="forbid", frozen=True)


class EnsembleSection(_Section):
    n_atoms: float = Field(1.0e12, ge=1.0, description="number of atoms N in the vapor cell")
    gamma: float = Field(RB87_GYROMAGNETIC_RATIO, gt=0.0, description="gyromagnetic ratio (rad/s/T)")
    b0: Optional[float] = Field(None, gt=0.0, description="bias field (T); derived from energy_scale_ev when omitted")
    energy_scale_ev: Optional[float] = Field(49.8, gt=0.0, description="energy scale k = hbar*gamma*B0*N (eV); ignored when b0 is set")

    @model_validator(mode="after")
    def _check_scale(self) -> "EnsembleSection":
        if self.b0 is None and self.energy_scale_ev is None:
            raise ValueError("either b0 or energy_scale_ev must be given")
        return self

    def build(self):
        from ..spin_core.state import EnsembleConfig

        if self.b0 is not None:
            return EnsembleConfig(n_atoms=self.n_atoms, gamma=self.gamma, b0=self.b0)
        return EnsembleConfig.from_energy_scale(self.energy_scale_ev, n_atoms=self.n_atoms, gamma=self.gamma)


class ChargingSection(_Section):
    r_op: float = Field(500.0, ge=0.0, description="optical pumping rate of the battery model (1/s)")
    r_rel: float = Field(4.529, ge=0.0, description="total relaxation rate (1/s); default 1/T1")
    pump_duration: float = Field(1.0, ge=0.0, description="duration of the Pump stage in protocols (s)")

    def build(self):
        from ..dynamics.charging import PumpRelaxParams

        return PumpRelaxParams(r_op=self.r_op, r_rel=self.r_rel)


class RelaxationSection(_Section):
    t1: float = Field(0.2208, gt=0.0, description="longitudinal relaxation time T1 (s)")
    t2: float = Field(0.1134, gt=0.0, description="transverse relaxation time T2 (s)")
    larmor: float = Field(2.0 * math.pi * 200.0, description="precession angular frequency (rad/s)")

    def build(self):
        from ..dynamics.evolution import FreeEvolutionParams

        return FreeEvolutionParams(t1=self.t1, t2=self.t2, larmor=self.larmor)


class DephasingSection(_Section):
    gamma_g: float = Field(1000.0, ge=0.0, description="dephasing rate per unit gradient-pulse duration (1/s)")
    taus: List[float] = Field(
        default_factory=lambda: [0.0, 2.5e-4, 5e-4, 1e-3, 1.5e-3, 2e-3, 3e-3, 4.4e-3],
        description="gradient-pulse durations of the dephasing sweep (s)",
    )

    @field_validator("taus")
    @classmethod
    def _non_negative(cls, taus: List[float]) -> List[float]:
        if any(t < 0 for t in taus):
            raise ValueError("gradient-pulse durations must be non-negative")
        return taus

    def build(self):
        from ..dynamics.evolution import DephasingChannel

        return DephasingChannel(gamma_g=self.gamma_g)


class HyperfineSection(_Section):
    delta_hf: float = Field(RB87_HYPERFINE_SPLITTING, gt=0.0, description="hyperfine splitting (rad/s)")
    g_s: float = Field(ELECTRON_G_FACTOR, description="electron Lande factor")
    mu_b: float = Field(BOHR_MAGNETON, description="Bohr magneton (J/T)")
    mu_i: float = Field(RB87_NUCLEAR_MOMENT, description="nuclear magnetic moment (J/T)")

    def build(self):
        from ..hyperfine.operators import HyperfineParams

        return HyperfineParams(delta_hf=self.delta_hf, g_s=self.g_s, mu_b=self.mu_b, mu_i=self.mu_i)


class RatesSection(_Section):
    r_se: float = Field(50.0, ge=0.0, description="spin-exchange rate (1/s)")
    r_sd: float = Field(0.5, ge=0.0, description="spin-destruction rate (1/s)")
    r_wall: float = Field(0.5, ge=0.0, description="effective wall rate, diffusion folded in (1/s)")
    r_op: float = Field(2000.0, ge=0.0, description="optical pumping rate (1/s)")
    photon_spin: Tuple[float, float, float] = Field((0.0, 0.0, 1.0), description="mean photon spin s; (0,0,1) is sigma+ along z")

    def build(self):
        from ..hyperfine.master import RateParams

        return RateParams(
            r_se=self.r_se, r_sd=self.r_sd, r_wall=self.r_wall, r_op=self.r_op, photon_spin=self.photon_spin
        )


class EvolveSection(_Section):
    t_final: float = Field(0.05, gt=0.0, description="integration horizon (s)")
    dt: float = Field(4.0e-5, gt=0.0, description="RK4 step (s); must satisfy the stability guard")
    stride: int = Field(10, ge=1, description="keep every stride-th step in the trajectory")
    field: Tuple[float, float, float] = Field((0.0, 0.0, 1.0e-8), description="magnetic field during evolution (T)")
    rotating_frame: bool = Field(True, description="remove the hyperfine commutator (secular frame)")
    initial: str = Field("mixed", description="initial density: mixed (I/8) or stretched (|2,2>)")

    @field_validator("initial")
    @classmethod
    def _known_initial(cls, value: str) -> str:
        if value not in ("mixed", "stretched"):
            raise ValueError("initial must be 'mixed' or 'stretched'")
        return value


class ScanSection(_Section):
    coarse_step: float = Field(20.0, gt=0.0, description="coarse grid step (deg)")
    fine_step: float = Field(5.0, gt=0.0, description="fine grid step (deg)")
    fine_window: Optional[float] = Field(None, gt=0.0, description="half-width of the fine window (deg); defaults to coarse_step")
    three_axis: bool = Field(False, description="also sweep an R_y angle")

    def build(self):
        from ..scan.traversal import ScanConfig

        return ScanConfig(
            coarse_step=self.coarse_step,
            fine_step=self.fine_step,
            fine_window=self.fine_window,
            three_axis=self.three_axis,
        )


class FidSection(_Section):
    sample_rate: float = Field(4000.0, gt=0.0, description="readout sample rate (Hz)")
    duration: float = Field(0.4, gt=0.0, description="readout window (s)")
    amplitude_scale: float = Field(1.0, gt=0.0, description="signal units per unit transverse spin")
    dead_time: float = Field(0.0, ge=0.0, description="delay between pulse end and first sample (s)")

    def build(self):
        from ..dynamics.fid import FidConfig

        return FidConfig(
            sample_rate=self.sample_rate,
            duration=self.duration,
            amplitude_scale=self.amplitude_scale,
            dead_time=self.dead_time,
        )


class NoiseSection(_Section):
    sigma: float = Field(0.01, ge=0.0, description="additive Gaussian noise std (signal units)")
    seed: int = Field(20240601, ge=0, lt=2**64, description="noise seed")

    def build(self):
        from ..tomography.readout import NoiseModel

        return NoiseModel(sigma=self.sigma, seed=self.seed)


class EntropySection(_Section):
    p_values: List[float] = Field(default_factory=lambda: [2.0, 3.0, 5.0, 10.0], description="Tsallis orders (p >= 2)")

    @field_validator("p_values")
    @classmethod
    def _orders(cls, values: List[float]) -> List[float]:
        if any(p < 2 for p in values):
            raise ValueError("Tsallis orders must satisfy p >= 2")
        return values


class OutputSection(_Section):
    directory: str = Field("results", description="output directory; SPINBATT_OUTPUT_DIR overrides")
    format: str = Field("json", description="json or csv (csv also writes the plot-ready series)")
    energy_unit: EnergyUnit = Field(EnergyUnit.ELECTRON_VOLT, description="unit of reported energies: eV or J")
    dump_surface: bool = Field(False, description="write the scanned E(angles) surface as CSV")

    @field_validator("format")
    @classmethod
    def _known_format(cls, value: str) -> str:
        if value not in ("json", "csv"):
            raise ValueError("format must be 'json' or 'csv'")
        return value


class LoggingSection(_Section):
    level: str = Field("INFO", description="DEBUG, INFO, WARNING, ERROR")


class RunConfig(_Section):
    """Complete configuration of a spinbatt run"""

    ensemble: EnsembleSection = Field(default_factory=EnsembleSection)
    charging: ChargingSection = Field(default_factory=ChargingSection)
    relaxation: RelaxationSection = Field(default_factory=RelaxationSection)
    dephasing: DephasingSection = Field(default_factory=DephasingSection)
    hyperfine: HyperfineSection = Field(default_factory=HyperfineSection)
    rates: RatesSection = Field(default_factory=RatesSection)
    evolve: EvolveSection = Field(default_factory=EvolveSection)
    scan: ScanSection = Field(default_factory=ScanSection)
    fid: FidSection = Field(default_factory=FidSection)
    noise: NoiseSection = Field(default_factory=NoiseSection)
    entropy: EntropySection = Field(default_factory=EntropySection)
    output: OutputSection = Field(default_factory=OutputSection)
    logging: LoggingSection = Field(default_factory=LoggingSection)

    def canonical(self) -> Dict[str, Any]:
        """Key-sorted, JSON-ready view of the configuration"""
        return json.loads(json.dumps(self.model_dump(mode="json"), sort_keys=True))

    def config_hash(self) -> str:
        """Deterministic hash of the canonical configuration"""
        data_str = json.dumps(self.canonical(), sort_keys=True)
        return hashlib.sha256(data_str.encode()).hexdigest()[:16]

    def with_overrides(self, seed: Optional[int] = None, out: Optional[str] = None,
                       fmt: Optional[str] = None, joules: bool = False) -> "RunConfig":
        """Apply command-line overrides; returns a new validated config"""
        data = self.model_dump()
        if seed is not None:
            data["noise"]["seed"] = seed
        if out is not None:
            data["output"]["directory"] = out
        if fmt is not None:
            data["output"]["format"] = fmt
        if joules:
            data["output"]["energy_unit"] = EnergyUnit.JOULE
        return _validate(data)


def _validate(data: Dict[str, Any]) -> RunConfig:
    try:
        return RunConfig.model_validate(data)
    except ValidationError as e:
        logger.error(f"Invalid configuration: {e}")
        raise ConfigurationError(f"invalid configuration: {e}") from e


def load_config(path: Optional[Union[str, Path]] = None) -> RunConfig:
    """
    Load and validate a run configuration.
    Unspecified fields take their documented defaults; the output directory
    may be overridden through SPINBATT_OUTPUT_DIR (also read from a .env file).
    """
    load_dotenv()
    data: Dict[str, Any] = {}
    if path is not None:
        try:
            with open(path, "r", encoding="utf-8") as fh:
                data = yaml.safe_load(fh) or {}
        except OSError as e:
            raise ConfigurationError(f"cannot read config file {path}: {e}") from e
        except yaml.YAMLError as e:
            raise ConfigurationError(f"malformed config file {path}: {e}") from e
        if not isinstance(data, dict):
            raise ConfigurationError(f"config file {path} must contain a mapping")
        # an empty section (`output:`) means defaults
        data = {name: section for name, section in data.items() if section is not None}

    env_dir = os.environ.get(OUTPUT_DIR_ENV)
    if env_dir:
        output = data.setdefault("output", {})
        if not isinstance(output, dict):
            raise ConfigurationError(f"config section 'output' must be a mapping, got {type(output).__name__}")
        output["directory"] = env_dir
        logger.info(f"Output directory overridden by {OUTPUT_DIR_ENV}: {env_dir}")

    config = _validate(data)
    logger.debug(f"Configuration loaded (hash={config.config_hash()})")
    return config


def render_default_config() -> str:
    """Annotated YAML rendering of the default configuration"""
    lines = ["# spinbatt default configuration", ""]
    defaults = RunConfig()
    for section_name, section_field in RunConfig.model_fields.items():
        section = getattr(defaults, section_name)
        lines.append(f"{section_name}:")
        values = section.model_dump(mode="json")
        for name, info in type(section).model_fields.items():
            rendered = yaml.safe_dump({name: values[name]}, default_flow_style=True, width=1000).strip()
            rendered = rendered[1:-1] if rendered.startswith("{") else rendered
            lines.append(f"  {rendered}  # {info.description}")
        lines.append("")
    return "\n".join(lines)

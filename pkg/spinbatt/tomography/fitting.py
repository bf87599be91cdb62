"""
Free-induction-decay fitting.

The oscillation frequency is seeded from the zero-padded magnitude spectrum
(parabolic interpolation around the peak bin), the decay time from the
Hilbert envelope, and amplitude and phase from a linear least-squares solve.
Nonlinear least squares then refines A exp(-t/tau) cos(omega t + phi), with t
measured from the end of the last pulse so that A and phi refer to t = 0.
"""

import logging
import math
import warnings
from dataclasses import dataclass
from typing import Dict, Tuple

import numpy as np
from scipy.optimize import OptimizeWarning, curve_fit
from scipy.signal import hilbert

from ..core.errors import FitFailureError, NoSignalError
from ..dynamics.fid import MIN_SAMPLES, FidConfig, FidTrace

logger = logging.getLogger(__name__)

PEAK_RATIO = 3.0
MAX_EVALUATIONS = 200
ZERO_PAD = 8
MIN_PERIODS = 2.0


@dataclass(frozen=True)
class FidFitResult:
    """Fitted FID parameters with their standard errors"""
    amplitude: float
    frequency: float  # rad/s
    phase: float  # rad, wrapped to (-pi, pi]
    decay_time: float  # s
    residual_rms: float
    amplitude_error: float = 0.0
    frequency_error: float = 0.0
    phase_error: float = 0.0
    decay_time_error: float = 0.0

    def to_dict(self) -> Dict[str, float]:
        return {
            "amplitude": self.amplitude,
            "frequency": self.frequency,
            "phase": self.phase,
            "decay_time": self.decay_time,
            "residual_rms": self.residual_rms,
            "amplitude_error": self.amplitude_error,
            "frequency_error": self.frequency_error,
            "phase_error": self.phase_error,
            "decay_time_error": self.decay_time_error,
        }


def fid_model(t: np.ndarray, amplitude: float, omega: float, phase: float, tau: float) -> np.ndarray:
    return amplitude * np.exp(-t / tau) * np.cos(omega * t + phase)


def _fid_jacobian(t: np.ndarray, amplitude: float, omega: float, phase: float, tau: float) -> np.ndarray:
    envelope = np.exp(-t / tau)
    cos_term = np.cos(omega * t + phase)
    sin_term = np.sin(omega * t + phase)
    return np.column_stack([
        envelope * cos_term,
        -amplitude * envelope * t * sin_term,
        -amplitude * envelope * sin_term,
        amplitude * envelope * cos_term * t / (tau * tau),
    ])


def _wrap_phase(phase: float) -> float:
    wrapped = math.atan2(math.sin(phase), math.cos(phase))
    return math.pi if wrapped == -math.pi else wrapped


def spectral_peak(signal: np.ndarray, sample_rate: float) -> Tuple[float, float, float]:
    """
    (omega, peak magnitude, noise floor) of the zero-padded spectrum.
    The noise floor is the expected largest noise magnitude: the median-based
    noise rms times sqrt(ln n_bins).
    """
    n_fft = 1 << int(math.ceil(math.log2(ZERO_PAD * len(signal))))
    magnitude = np.abs(np.fft.rfft(signal - signal.mean(), n=n_fft))
    k = int(np.argmax(magnitude[1:])) + 1
    peak = float(magnitude[k])
    noise_rms = float(np.median(magnitude)) / math.sqrt(math.log(2.0))
    floor = noise_rms * math.sqrt(math.log(len(magnitude)))

    shift = 0.0
    if 0 < k < len(magnitude) - 1:
        left, centre, right = magnitude[k - 1], magnitude[k], magnitude[k + 1]
        denom = left - 2.0 * centre + right
        if denom != 0:
            shift = 0.5 * (left - right) / denom
    omega = 2.0 * math.pi * (k + shift) * sample_rate / n_fft
    return omega, peak, floor


def _envelope_decay(t: np.ndarray, signal: np.ndarray, span: float) -> float:
    """Decay time from a log-linear fit of the analytic-signal envelope"""
    envelope = np.abs(hilbert(signal))
    lo, hi = int(0.1 * len(t)), int(0.9 * len(t))
    usable = envelope[lo:hi] > 0
    if usable.sum() >= 2:
        slope = np.polyfit(t[lo:hi][usable], np.log(envelope[lo:hi][usable]), 1)[0]
        if slope < 0:
            return -1.0 / slope
    return 10.0 * span


def _linear_amplitude(t: np.ndarray, signal: np.ndarray, omega: float, tau: float) -> Tuple[float, float]:
    envelope = np.exp(-t / tau)
    design = np.column_stack([envelope * np.cos(omega * t), -envelope * np.sin(omega * t)])
    (a, b), *_ = np.linalg.lstsq(design, signal, rcond=None)
    return math.hypot(a, b), math.atan2(b, a)


def fit_fid(series: FidTrace, f: FidConfig) -> FidFitResult:
    t = np.asarray(series.times, dtype=float)
    y = np.asarray(series.signal, dtype=float)
    if len(y) < MIN_SAMPLES:
        raise FitFailureError(f"FID trace holds {len(y)} samples, need >= {MIN_SAMPLES}")
    if not np.all(np.isfinite(y)):
        raise FitFailureError("FID trace contains non-finite samples")

    omega0, peak, floor = spectral_peak(y, f.sample_rate)
    if peak <= PEAK_RATIO * floor:
        raise NoSignalError(f"no spectral peak above {PEAK_RATIO}x the noise floor (peak {peak:.3e}, floor {floor:.3e})")
    span = float(t[-1] - t[0])
    if omega0 * span < MIN_PERIODS * 2.0 * math.pi:
        raise FitFailureError(f"trace spans fewer than {MIN_PERIODS} periods at omega = {omega0:.3e} rad/s")

    tau0 = _envelope_decay(t, y, span)
    amplitude0, phase0 = _linear_amplitude(t, y, omega0, tau0)
    p0 = [amplitude0, omega0, phase0, tau0]

    with warnings.catch_warnings():
        warnings.simplefilter("ignore", OptimizeWarning)
        try:
            popt, pcov = curve_fit(
                fid_model, t, y, p0=p0, jac=_fid_jacobian, method="lm",
                maxfev=MAX_EVALUATIONS, xtol=1e-12, ftol=1e-12,
            )
        except RuntimeError as e:
            logger.warning(f"FID fit did not converge from {p0}: {e}")
            raise FitFailureError(f"FID fit did not converge in {MAX_EVALUATIONS} evaluations") from e

    amplitude, omega, phase, tau = (float(v) for v in popt)
    if not tau > 0 or not math.isfinite(tau):
        raise FitFailureError(f"fitted decay time {tau!r} is not positive")
    if amplitude < 0:
        amplitude, phase = -amplitude, phase + math.pi
    errors = np.sqrt(np.clip(np.diag(pcov), 0.0, None)) if np.all(np.isfinite(pcov)) else np.full(4, math.inf)
    residual = float(np.sqrt(np.mean((y - fid_model(t, *popt)) ** 2)))

    result = FidFitResult(
        amplitude=amplitude,
        frequency=omega,
        phase=_wrap_phase(phase),
        decay_time=tau,
        residual_rms=residual,
        amplitude_error=float(errors[0]),
        frequency_error=float(errors[1]),
        phase_error=float(errors[2]),
        decay_time_error=float(errors[3]),
    )
    logger.debug(f"FID fit: {result}")
    return result

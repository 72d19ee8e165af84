# models.py
from dataclasses import dataclass, field, asdict
import math

import numpy as np
from django.db import models

from .exceptions import InvalidConfig


class Scheme(models.TextChoices):
    CF = "CF", "Compress-and-forward"
    DF = "DF", "Decode-and-forward"
    FD_AF = "FD_AF", "Full-duplex amplify-and-forward"
    HD_AF = "HD_AF", "Half-duplex amplify-and-forward"


LINKS = ("11", "12", "13", "21", "22", "23", "31", "32")


def _require(condition, message):
    if not condition:
        raise InvalidConfig(message)


@dataclass(frozen=True)
class ChannelExponents:
    """
    SNR scaling of the cross (alpha), relay-destination (beta) and
    source-relay (gamma) links; the direct link scales as rho^1
    """
    alpha: float
    beta: float
    gamma: float

    def __post_init__(self):
        for name in ("alpha", "beta", "gamma"):
            value = getattr(self, name)
            _require(math.isfinite(value) and value >= 0, f"{name} must be finite and >= 0, got {value}")

    def __str__(self):
        return f"alpha={self.alpha:g}, beta={self.beta:g}, gamma={self.gamma:g}"


@dataclass(frozen=True)
class MultiplexingGains:
    r1: float
    r2: float

    def __post_init__(self):
        for name in ("r1", "r2"):
            value = getattr(self, name)
            _require(0.0 <= value <= 1.0, f"{name} must lie in [0, 1], got {value}")

    @property
    def total(self):
        return self.r1 + self.r2

    def swapped(self):
        return MultiplexingGains(self.r2, self.r1)

    def __str__(self):
        return f"r1={self.r1:g}, r2={self.r2:g}"


@dataclass(frozen=True)
class SnrPoint:
    rho: float

    def __post_init__(self):
        _require(math.isfinite(self.rho) and self.rho > 1.0, f"rho must exceed 1, got {self.rho}")

    @classmethod
    def from_db(cls, snr_db):
        return cls(10.0 ** (snr_db / 10.0))

    @property
    def log_rho(self):
        return math.log(self.rho)

    @property
    def db(self):
        return 10.0 * math.log10(self.rho)


@dataclass(frozen=True)
class FadingDraw:
    """
    Normalized coefficients H_kl. Each field is a complex scalar or, for a
    batch of trials, a complex numpy array of equal shape.
    """
    h11: complex
    h12: complex
    h13: complex
    h21: complex
    h22: complex
    h23: complex
    h31: complex
    h32: complex

    def gain(self, link):
        return abs(getattr(self, f"h{link}")) ** 2


@dataclass(frozen=True)
class ExponentDraw:
    """
    SNR exponents theta_kl with |h_kl|^2 = rho^(-theta_kl), clamped at zero
    """
    theta11: float
    theta12: float
    theta13: float
    theta21: float
    theta22: float
    theta23: float
    theta31: float
    theta32: float

    def __post_init__(self):
        for link in LINKS:
            name = f"theta{link}"
            object.__setattr__(self, name, np.maximum(getattr(self, name), 0.0))

    def theta(self, link):
        return getattr(self, f"theta{link}")


@dataclass(frozen=True)
class DiversityValue:
    d: float

    def __post_init__(self):
        _require(self.d >= 0, f"diversity must be >= 0, got {self.d}")

    def __float__(self):
        return float(self.d)

    def __str__(self):
        return f"{self.d:.6f}"


@dataclass(frozen=True)
class DmtBreakdown:
    value: DiversityValue
    components: tuple

    @classmethod
    def from_components(cls, components):
        components = tuple((label, float(d)) for label, d in components)
        return cls(DiversityValue(min(d for _, d in components)), components)

    @property
    def d(self):
        return self.value.d

    def component(self, label):
        return dict(self.components)[label]

    def __str__(self):
        terms = ", ".join(f"{label}={d:.6f}" for label, d in self.components)
        return f"{self.d:.6f} ({terms})"


@dataclass(frozen=True)
class OptimalityReport:
    violated: tuple = ()

    @property
    def holds(self):
        return not self.violated

    def __str__(self):
        return "holds" if self.holds else "violated: " + ", ".join(self.violated)


@dataclass(frozen=True)
class TargetRates:
    """
    Target rates in bits per channel use, R_k = r_k * log2(rho)
    """
    R1: float
    R2: float

    @classmethod
    def from_gains(cls, gains, snr):
        scale = math.log2(snr.rho)
        return cls(gains.r1 * scale, gains.r2 * scale)


@dataclass(frozen=True)
class CompressionNoise:
    n_q: float
    log_n_q: float


@dataclass(frozen=True)
class OutageVerdict:
    in_outage: bool
    binding: str = ""

    def __bool__(self):
        return self.in_outage


@dataclass(frozen=True)
class SweepConfig:
    scheme: str
    exponents: ChannelExponents
    gains: MultiplexingGains
    snr_grid_db: tuple
    trials_per_point: int
    master_seed: int = 0
    batch_size: int = 100000

    def __post_init__(self):
        _require(self.scheme in Scheme.values, f"unknown scheme {self.scheme}")
        grid = tuple(float(x) for x in self.snr_grid_db)
        object.__setattr__(self, "snr_grid_db", grid)
        _require(len(grid) >= 3, "SNR grid needs at least 3 points")
        _require(all(b > a for a, b in zip(grid, grid[1:])), "SNR grid must be strictly increasing")
        _require(self.trials_per_point >= 1000, "trials_per_point must be >= 1000")
        _require(0 <= self.master_seed < 2**64, "master_seed must be a 64-bit unsigned integer")
        _require(self.batch_size >= 1, "batch_size must be positive")

    def to_payload(self):
        payload = asdict(self)
        payload["snr_grid_db"] = list(self.snr_grid_db)
        return payload

    @classmethod
    def from_payload(cls, payload):
        return cls(
            scheme=payload["scheme"],
            exponents=ChannelExponents(**payload["exponents"]),
            gains=MultiplexingGains(**payload["gains"]),
            snr_grid_db=tuple(payload["snr_grid_db"]),
            trials_per_point=payload["trials_per_point"],
            master_seed=payload["master_seed"],
            batch_size=payload["batch_size"],
        )


@dataclass(frozen=True)
class OutagePoint:
    snr_db: float
    events: int
    trials: int
    ci_low: float
    ci_high: float

    @property
    def p_hat(self):
        return self.events / self.trials

    @property
    def rho(self):
        return 10.0 ** (self.snr_db / 10.0)


@dataclass(frozen=True)
class SlopeEstimate:
    d_hat: float
    stderr: float
    points_used: int
    excluded: tuple = field(default=())

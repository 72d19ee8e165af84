# channel.py
import math

import numpy as np
from django.conf import settings

from .models import LINKS, ExponentDraw, FadingDraw


def pos_part(x):
    """
    (x)^+ = max{x, 0}
    """
    if isinstance(x, np.ndarray):
        if np.isnan(x).any():
            raise ValueError("pos_part is undefined for NaN")
        return np.maximum(x, 0.0)
    if math.isnan(x):
        raise ValueError("pos_part is undefined for NaN")
    return x if x > 0 else 0.0


def substream(master_seed, point_key=0, batch_index=0):
    """
    Counter-based generator for one batch of trials. The key is derived from
    (master_seed, point_key, batch_index) only, so a batch draws the same
    numbers whichever worker runs it.
    """
    seed = np.random.SeedSequence([int(master_seed), int(point_key), int(batch_index)])
    return np.random.Generator(np.random.Philox(seed))


def snr_point_key(snr_db):
    # IEEE-754 bit pattern, so any real SNR keys its own substream
    return int(np.float64(snr_db).view(np.uint64))


def draw_fading(rng, size=None):
    """
    Eight i.i.d. CN(0,1) coefficients: real and imaginary parts are
    independent normals of variance 1/2
    """
    shape = (2, len(LINKS)) if size is None else (2, len(LINKS), size)
    parts = rng.standard_normal(shape) * math.sqrt(0.5)
    coefficients = parts[0] + 1j * parts[1]
    return FadingDraw(**{f"h{link}": coefficients[i] for i, link in enumerate(LINKS)})


def gain_to_exponent(gain, log_rho, theta_cap=None):
    if theta_cap is None:
        theta_cap = settings.ICR_DMT_THETA_CAP
    gain = np.asarray(gain, dtype=float)
    with np.errstate(divide="ignore"):
        theta = -np.log(gain) / log_rho
    theta = np.where(np.isfinite(theta), theta, theta_cap)
    theta = np.clip(theta, 0.0, theta_cap)
    return theta if theta.ndim else float(theta)


def fading_to_exponents(draw, snr, theta_cap=None):
    """
    theta_kl = max(0, -ln|h_kl|^2 / ln rho); a zero or underflowing gain maps
    to theta_cap
    """
    log_rho = snr.log_rho
    return ExponentDraw(**{
        f"theta{link}": gain_to_exponent(draw.gain(link), log_rho, theta_cap)
        for link in LINKS
    })


def draw_exponents_direct(rng, snr, size=None, theta_cap=None):
    """
    Sample theta straight from its induced law: |h|^2 of CN(0,1) is Exp(1)
    """
    shape = (len(LINKS),) if size is None else (len(LINKS), size)
    gains = rng.exponential(1.0, shape)
    return ExponentDraw(**{
        f"theta{link}": gain_to_exponent(gains[i], snr.log_rho, theta_cap)
        for i, link in enumerate(LINKS)
    })

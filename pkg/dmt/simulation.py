# simulation.py
"""
Monte Carlo outage estimation over an SNR grid, and the log-log slope fit
that turns outage curves into diversity estimates.

Trials at one SNR point are split into batches of cfg.batch_size. Batch i
draws from substream(master_seed, snr_point_key(snr_db), i), so the event
count of a point never depends on how many workers ran its batches.
"""
import logging
import math

import numpy as np
from django.conf import settings
from scipy.stats import norm

from . import regions
from .channel import draw_exponents_direct, draw_fading, fading_to_exponents, snr_point_key, substream
from .exceptions import InsufficientData
from .formulas import scheme_dmt
from .models import OutagePoint, Scheme, SlopeEstimate, SnrPoint, TargetRates

logger = logging.getLogger(__name__)


def batch_sizes(trials, batch_size):
    full, rest = divmod(trials, batch_size)
    return [batch_size] * full + ([rest] if rest else [])


def _exponents(rng, snr, size, direct_exponents):
    if direct_exponents:
        return draw_exponents_direct(rng, snr, size)
    return fading_to_exponents(draw_fading(rng, size), snr)


def batch_outage_mask(scheme, rng, snr, e, g, size, direct_exponents=False):
    """
    Outage flag per trial for one batch. direct_exponents samples theta from
    its induced law instead of going through CN(0,1) draws (AF only).
    """
    if scheme in (Scheme.CF, Scheme.DF):
        draw = draw_fading(rng, size)
        targets = TargetRates.from_gains(g, snr)
        if scheme == Scheme.CF:
            return regions.outage_mask(regions.cf_constraints(draw, snr, e, targets))
        return regions.outage_mask(regions.df_constraints(draw, snr, e, targets))
    if scheme == Scheme.FD_AF:
        # blocks b and b+1 fade independently
        x_b = _exponents(rng, snr, size, direct_exponents)
        x_b1 = _exponents(rng, snr, size, direct_exponents)
        return regions.outage_mask(regions.fd_af_constraints(x_b, x_b1, e, g))
    x = _exponents(rng, snr, size, direct_exponents)
    return regions.outage_mask(regions.hd_af_constraints(x, e, g))


def count_batch_events(cfg, snr_db, batch_index, batch_trials, direct_exponents=False):
    rng = substream(cfg.master_seed, snr_point_key(snr_db), batch_index)
    snr = SnrPoint.from_db(snr_db)
    mask = batch_outage_mask(cfg.scheme, rng, snr, cfg.exponents, cfg.gains, batch_trials, direct_exponents)
    return int(np.count_nonzero(mask))


def wilson_interval(events, trials, level=0.95):
    z = norm.isf((1 - level) / 2)
    p = events / trials
    z2n = z * z / trials
    center = (p + z2n / 2) / (1 + z2n)
    half = z * math.sqrt(p * (1 - p) / trials + z2n / (4 * trials)) / (1 + z2n)
    return max(0.0, center - half), min(1.0, center + half)


def estimate_outage(cfg, snr_db, workers=None, direct_exponents=False):
    from .tasks import run_batches

    events = run_batches(cfg, snr_db, workers=workers, direct_exponents=direct_exponents)
    ci_low, ci_high = wilson_interval(events, cfg.trials_per_point)
    return OutagePoint(float(snr_db), events, cfg.trials_per_point, ci_low, ci_high)


def run_sweep(cfg, workers=None, on_point=None, direct_exponents=False):
    """
    estimate_outage at every grid point in order. on_point, when given, is
    called with each OutagePoint as soon as it is ready.
    """
    logger.info(
        f"Sweeping {cfg.scheme} ({cfg.exponents}; {cfg.gains}) over {len(cfg.snr_grid_db)} SNR points, "
        f"{cfg.trials_per_point} trials each"
    )
    points = []
    for snr_db in cfg.snr_grid_db:
        point = estimate_outage(cfg, snr_db, workers=workers, direct_exponents=direct_exponents)
        logger.info(f"{cfg.scheme} at {snr_db:g} dB: {point.events}/{point.trials} outages")
        points.append(point)
        if on_point is not None:
            on_point(point)
    return points


def estimate_diversity(points, event_floor=None):
    """
    Weighted least-squares slope of -log10 p_hat against log10 rho. Weights
    are the inverse delta-method variance of log10 p_hat; points with fewer
    than event_floor outage events are left out.
    """
    if event_floor is None:
        event_floor = settings.ICR_DMT_EVENT_FLOOR
    floor = max(event_floor, 1)
    usable = [point for point in points if point.events >= floor]
    excluded = tuple(point.snr_db for point in points if point.events < floor)
    if excluded:
        logger.warning(f"Excluded {len(excluded)} SNR points below {event_floor} events: {list(excluded)}")
    if len(usable) < 2:
        raise InsufficientData(
            f"Only {len(usable)} SNR points reach {event_floor} outage events. "
            "Raise --trials or choose a lower-diversity configuration."
        )

    x = np.array([point.snr_db / 10.0 for point in usable])
    p = np.array([point.p_hat for point in usable])
    n = np.array([point.trials for point in usable], dtype=float)
    y = -np.log10(p)
    variance = np.maximum((1 - p) / (n * p), 1.0 / n**2) / math.log(10) ** 2
    root_w = 1.0 / np.sqrt(variance)

    design = np.column_stack([np.ones_like(x), x]) * root_w[:, None]
    coefficients = np.linalg.lstsq(design, y * root_w, rcond=None)[0]
    covariance = np.linalg.inv(design.T @ design)
    return SlopeEstimate(
        d_hat=float(coefficients[1]),
        stderr=float(math.sqrt(covariance[1, 1])),
        points_used=len(usable),
        excluded=excluded,
    )


def slope_summary(cfg, points, tolerance=None, event_floor=None):
    """
    One summary row comparing the fitted slope with the closed form
    """
    if tolerance is None:
        tolerance = settings.ICR_DMT_SLOPE_TOLERANCE
    estimate = estimate_diversity(points, event_floor)
    closed_form = scheme_dmt(cfg.scheme, cfg.gains, cfg.exponents).d
    return {
        "scheme": cfg.scheme,
        "alpha": cfg.exponents.alpha,
        "beta": cfg.exponents.beta,
        "gamma": cfg.exponents.gamma,
        "r1": cfg.gains.r1,
        "r2": cfg.gains.r2,
        "d_hat": estimate.d_hat,
        "stderr": estimate.stderr,
        "points_used": estimate.points_used,
        "d_closed_form": closed_form,
        "passed": abs(estimate.d_hat - closed_form) <= tolerance,
    }


def exponent_agreement(cfg, snr_db, trials, batch_index=0):
    """
    Fraction of draws where the finite-SNR verdict and its exponent-event
    counterpart disagree, CF and DF only
    """
    if cfg.scheme not in (Scheme.CF, Scheme.DF):
        raise ValueError(f"exponent agreement is defined for CF and DF, not {cfg.scheme}")
    rng = substream(cfg.master_seed, snr_point_key(snr_db), batch_index)
    snr = SnrPoint.from_db(snr_db)
    draw = draw_fading(rng, trials)
    x = fading_to_exponents(draw, snr)
    targets = TargetRates.from_gains(cfg.gains, snr)
    if cfg.scheme == Scheme.CF:
        exact = regions.cf_constraints(draw, snr, cfg.exponents, targets)
        asymptotic = regions.cf_exponent_constraints(x, cfg.exponents, cfg.gains)
    else:
        exact = regions.df_constraints(draw, snr, cfg.exponents, targets)
        asymptotic = regions.df_exponent_constraints(x, cfg.exponents, cfg.gains)
    disagree = regions.outage_mask(exact) != regions.outage_mask(asymptotic)
    return float(np.count_nonzero(disagree)) / trials

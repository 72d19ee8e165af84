# regions.py
"""
Outage verdicts per relaying scheme.

CF and DF are evaluated with finite-SNR mutual information in the natural-log
domain (capacities compared against R_k * ln 2), so rho up to 1e8 never
overflows. FD-AF and HD-AF are evaluated as exponent events on ExponentDraws.

Every *_constraints function returns an ordered list of (label, violated)
pairs. Inputs may be scalars or equally shaped batch arrays; outage_mask
reduces a list over a batch, verdict picks the first violated label for a
single draw.
"""
import math

import numpy as np
from scipy.special import logsumexp

from .channel import fading_to_exponents
from .exceptions import GammaUnsupported
from .models import CompressionNoise, OutageVerdict

LN2 = math.log(2.0)


def verdict(constraints):
    for label, violated in constraints:
        if bool(violated):
            return OutageVerdict(True, label)
    return OutageVerdict(False)


def outage_mask(constraints):
    return np.logical_or.reduce([np.asarray(violated, dtype=bool) for _, violated in constraints])


def _log_gain(h):
    with np.errstate(divide="ignore"):
        return np.log(np.abs(h) ** 2)


def _log_capacity(*log_terms):
    """
    ln(1 + sum(exp(term))), -inf terms contribute nothing
    """
    return logsumexp(np.stack(np.broadcast_arrays(0.0, *log_terms)), axis=0)


def _below(capacity, target_bits):
    return np.asarray(capacity < target_bits * LN2)


def _p(x):
    return np.maximum(x, 0.0)


def _require_unit_gamma(e):
    if e.gamma != 1:
        raise GammaUnsupported(f"amplify-and-forward outage needs gamma = 1, got gamma = {e.gamma:g}")


# Compress-and-forward

def nq_exponent(x, e):
    return np.maximum.reduce([
        e.gamma + e.alpha - e.beta + x.theta31,
        e.gamma + 1 - e.beta + x.theta31,
        e.gamma + e.alpha - e.beta + x.theta32,
        e.gamma + 1 - e.beta + x.theta32,
    ])


def nq_compress(x, snr, e):
    """
    Quantization noise the relay picks from its Tx-CSI: the largest of the
    four powers of rho, with no constant factor
    """
    log_n_q = snr.log_rho * nq_exponent(x, e)
    with np.errstate(over="ignore"):
        n_q = np.exp(log_n_q)
    return CompressionNoise(n_q, log_n_q)


def cf_constraints(d, snr, e, t, noise=None):
    L = snr.log_rho
    if noise is None:
        noise = nq_compress(fading_to_exponents(d, snr), snr, e)
    # ln(1 + N_Q) divides every relayed term
    relayed = np.logaddexp(0.0, noise.log_n_q)

    g11, g12, g13 = _log_gain(d.h11), _log_gain(d.h12), _log_gain(d.h13)
    g21, g22, g23 = _log_gain(d.h21), _log_gain(d.h22), _log_gain(d.h23)
    skew = math.exp((e.alpha - 1) / 2 * L)
    cross1 = (e.gamma + 1) * L + _log_gain(skew * d.h13 * np.conj(d.h21) - d.h23 * np.conj(d.h11))
    cross2 = (e.gamma + 1) * L + _log_gain(skew * d.h23 * np.conj(d.h12) - d.h13 * np.conj(d.h22))
    relay1 = e.gamma * L + g13 - relayed
    relay2 = e.gamma * L + g23 - relayed

    total = t.R1 + t.R2
    return [
        ("R1-bound", _below(_log_capacity(L + g11, relay1), t.R1)),
        ("R2-bound", _below(_log_capacity(L + g22, relay2), t.R2)),
        ("sum-Rx1", _below(_log_capacity(L + g11, e.alpha * L + g21, relay1, relay2, cross1 - relayed), total)),
        ("sum-Rx2", _below(_log_capacity(L + g22, e.alpha * L + g12, relay2, relay1, cross2 - relayed), total)),
    ]


def cf_outage(d, snr, e, t):
    return verdict(cf_constraints(d, snr, e, t))


def cf_exponent_constraints(x, e, g):
    """
    cf_constraints with every log-sum replaced by its dominant exponent
    """
    nq = _p(nq_exponent(x, e))
    relay1 = e.gamma - x.theta13 - nq
    relay2 = e.gamma - x.theta23 - nq
    cross1 = np.maximum(e.gamma + e.alpha - x.theta13 - x.theta21, e.gamma + 1 - x.theta23 - x.theta11) - nq
    cross2 = np.maximum(e.gamma + e.alpha - x.theta23 - x.theta12, e.gamma + 1 - x.theta13 - x.theta22) - nq
    s = g.total
    return [
        ("R1-bound", _p(np.maximum(1 - x.theta11, relay1)) < g.r1),
        ("R2-bound", _p(np.maximum(1 - x.theta22, relay2)) < g.r2),
        ("sum-Rx1", _p(np.maximum.reduce([1 - x.theta11, e.alpha - x.theta21, relay1, relay2, cross1])) < s),
        ("sum-Rx2", _p(np.maximum.reduce([1 - x.theta22, e.alpha - x.theta12, relay2, relay1, cross2])) < s),
    ]


def cf_exponent_outage(x, e, g):
    return verdict(cf_exponent_constraints(x, e, g))


# Decode-and-forward

def relay_decoding_constraints(d, snr, e, t):
    L = snr.log_rho
    g13 = e.gamma * L + _log_gain(d.h13)
    g23 = e.gamma * L + _log_gain(d.h23)
    return [
        ("relay:R1", _below(_log_capacity(g13), t.R1)),
        ("relay:R2", _below(_log_capacity(g23), t.R2)),
        ("relay:sum", _below(_log_capacity(g13, g23), t.R1 + t.R2)),
    ]


def _df_branches(relay_down, ic, coop):
    # the relay stays silent when it cannot decode both messages
    return (
        [(f"ic:{label}", np.logical_and(v, relay_down)) for label, v in ic]
        + [(f"coop:{label}", np.logical_and(v, np.logical_not(relay_down))) for label, v in coop]
    )


def df_constraints(d, snr, e, t):
    L = snr.log_rho
    relay_down = outage_mask(relay_decoding_constraints(d, snr, e, t))

    g11, g12, g21, g22 = _log_gain(d.h11), _log_gain(d.h12), _log_gain(d.h21), _log_gain(d.h22)
    g31, g32 = _log_gain(d.h31), _log_gain(d.h32)
    direct1, direct2 = L + g11, L + g22
    cross1, cross2 = e.alpha * L + g21, e.alpha * L + g12
    relay1, relay2 = e.beta * L + g31, e.beta * L + g32
    total = t.R1 + t.R2

    ic = [
        ("R1", _below(_log_capacity(direct1), t.R1)),
        ("R2", _below(_log_capacity(direct2), t.R2)),
        ("sum-Rx1", _below(_log_capacity(direct1, cross1), total)),
        ("sum-Rx2", _below(_log_capacity(direct2, cross2), total)),
    ]
    coop = [
        ("R1", _below(_log_capacity(direct1, relay1), t.R1)),
        ("R2", _below(_log_capacity(direct2, relay2), t.R2)),
        ("sum-Rx1", _below(_log_capacity(direct1, cross1, relay1), total)),
        ("sum-Rx2", _below(_log_capacity(direct2, cross2, relay2), total)),
    ]
    return _df_branches(relay_down, ic, coop)


def df_outage(d, snr, e, t):
    return verdict(df_constraints(d, snr, e, t))


def df_exponent_constraints(x, e, g):
    s = g.total
    relay_down = (
        (_p(e.gamma - x.theta13) < g.r1)
        | (_p(e.gamma - x.theta23) < g.r2)
        | (_p(np.maximum(e.gamma - x.theta13, e.gamma - x.theta23)) < s)
    )
    ic = [
        ("R1", _p(1 - x.theta11) < g.r1),
        ("R2", _p(1 - x.theta22) < g.r2),
        ("sum-Rx1", _p(np.maximum(1 - x.theta11, e.alpha - x.theta21)) < s),
        ("sum-Rx2", _p(np.maximum(1 - x.theta22, e.alpha - x.theta12)) < s),
    ]
    coop = [
        ("R1", _p(np.maximum(1 - x.theta11, e.beta - x.theta31)) < g.r1),
        ("R2", _p(np.maximum(1 - x.theta22, e.beta - x.theta32)) < g.r2),
        ("sum-Rx1", _p(np.maximum.reduce([1 - x.theta11, e.alpha - x.theta21, e.beta - x.theta31])) < s),
        ("sum-Rx2", _p(np.maximum.reduce([1 - x.theta22, e.alpha - x.theta12, e.beta - x.theta32])) < s),
    ]
    return _df_branches(relay_down, ic, coop)


def df_exponent_outage(x, e, g):
    return verdict(df_exponent_constraints(x, e, g))


# Amplify-and-forward, exponent events

def fd_af_constraints(x_b, x_b1, e, g):
    """
    x_b and x_b1 are independent draws for blocks b and b+1. Pair k is in
    outage when r_k exceeds either the exponent for pre-decoding the
    interference (interference_k) or the exponent of the desired signal
    over the two blocks (direct_k).
    """
    _require_unit_gamma(e)
    scale = max(1.0, e.beta, 2 * e.beta - 2)
    decode_floor = max(1.0, e.beta)
    constraints = []
    for k, r, cross, direct, source_relay, relay_dest in (
        (1, g.r1, "12", "11", "13", "31"),
        (2, g.r2, "21", "22", "23", "32"),
    ):
        interference = e.alpha - decode_floor - x_b.theta(cross)
        desired = np.maximum(
            2 - scale - x_b.theta(direct) - x_b1.theta(direct),
            2 * e.beta - 1 - scale - x_b.theta(source_relay) - x_b.theta(relay_dest) - x_b1.theta(relay_dest),
        )
        constraints += [
            (f"interference{k}", _p(interference) < r),
            (f"direct{k}", _p(desired) < r),
        ]
    return constraints


def fd_af_outage(x_b, x_b1, e, g):
    return verdict(fd_af_constraints(x_b, x_b1, e, g))


def hd_af_pair_constraints(x, e, g, pair=1):
    """
    Single-user and joint error events at the receiver of `pair`, on the
    double-symbol rate 2 r. The event on the other message alone does not
    constrain this receiver.
    """
    _require_unit_gamma(e)
    if pair == 1:
        direct, cross, relay_dest, source_relay, rate = x.theta11, x.theta21, x.theta31, x.theta13, g.r1
    else:
        direct, cross, relay_dest, source_relay, rate = x.theta22, x.theta12, x.theta32, x.theta23, g.r2
    relayed = relay_dest + source_relay
    two_r, two_s = 2 * rate, 2 * g.total

    if e.beta <= 1:
        single = _p(np.maximum(e.beta - relayed, 2 - 2 * direct)) < two_r
        joint = np.maximum.reduce([2 - 2 * direct, 2 * e.alpha - 2 * cross, e.beta - relayed])
    else:
        single = (
            (_p(np.maximum(1 - direct, 1 - relayed)) < two_r)
            & (_p(np.maximum(1 - relayed, 3 - e.beta - 2 * direct)) < two_r)
        )
        joint = np.maximum.reduce([3 - e.beta - 2 * direct, 2 * e.alpha + 1 - e.beta - 2 * cross, 1 - relayed])
    return [
        (f"single{pair}", np.asarray(single)),
        (f"joint{pair}", np.asarray(_p(joint) < two_s)),
    ]


def hd_af_pair_outage(x, e, g, pair=1):
    return verdict(hd_af_pair_constraints(x, e, g, pair))


def hd_af_constraints(x, e, g):
    return hd_af_pair_constraints(x, e, g, 1) + hd_af_pair_constraints(x, e, g, 2)


def hd_af_outage(x, e, g):
    return verdict(hd_af_constraints(x, e, g))

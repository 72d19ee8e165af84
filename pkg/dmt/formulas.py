# formulas.py
"""
Closed-form DMT expressions for the symmetric interference channel with a
relay. Every function is pure in (MultiplexingGains, ChannelExponents).
"""
from .channel import pos_part as p
from .exceptions import GammaUnsupported
from .models import DiversityValue, DmtBreakdown, MultiplexingGains, OptimalityReport


def _require_unit_gamma(e):
    if e.gamma != 1:
        raise GammaUnsupported(f"amplify-and-forward needs gamma = 1, got gamma = {e.gamma:g}")


def cutset_dmt(g, e):
    """
    Cut-set outer bound: each pair is limited by its broadcast cut
    (direct + source-relay) and its multiple-access cut (direct + relay-destination)
    """
    return DmtBreakdown.from_components([
        ("broadcast1", p(1 - g.r1) + p(e.gamma - g.r1)),
        ("mac1", p(1 - g.r1) + p(e.beta - g.r1)),
        ("broadcast2", p(1 - g.r2) + p(e.gamma - g.r2)),
        ("mac2", p(1 - g.r2) + p(e.beta - g.r2)),
    ])


def cf_penalty(e):
    """
    Exponent of the compression noise N_Q at theta31 = theta32 = 0
    """
    if e.alpha > 1:
        return p(e.gamma + e.alpha - e.beta)
    return p(e.gamma + 1 - e.beta)


def cf_dmt(g, e):
    pen = cf_penalty(e)
    s = g.total
    return DmtBreakdown.from_components([
        ("pair1", p(1 - g.r1) + p(e.gamma - pen - g.r1)),
        ("pair2", p(1 - g.r2) + p(e.gamma - pen - g.r2)),
        ("sum", p(1 - s) + p(e.alpha - s) + p(e.gamma - pen - s)),
    ])


def cf_optimality_holds(g, e):
    violated = []
    if not e.beta >= max(e.gamma + 1, e.gamma + e.alpha):
        violated.append("relay-strength")
    s = g.total
    single = min(p(1 - g.r1) + p(e.gamma - g.r1), p(1 - g.r2) + p(e.gamma - g.r2))
    if not single <= p(1 - s) + p(e.alpha - s) + p(e.gamma - s):
        violated.append("sum-slack")
    return OptimalityReport(tuple(violated))


def cf_optimal_dmt(g, e):
    return DiversityValue(min(
        p(1 - g.r1) + p(e.gamma - g.r1),
        p(1 - g.r2) + p(e.gamma - g.r2),
    ))


def cf_max_diversity(e):
    if e.alpha > 1:
        return DiversityValue(1 + min(e.gamma, p(e.beta - e.alpha)))
    return DiversityValue(1 + min(e.gamma, p(e.beta - 1)))


def relay_dmt_upper(r, beta, gamma):
    """
    DMT upper bound of the single relay channel. The beta term carries a
    pos-part like its cut-set counterpart.
    """
    return DiversityValue(min(p(1 - r) + p(gamma - r), p(1 - r) + p(beta - r)))


def ic_dmt(g, e):
    s = g.total
    return DiversityValue(min(p(1 - g.r1), p(1 - g.r2), p(1 - s) + p(e.alpha - s)))


def df_components(g, e):
    """
    Returns (d_relay, d_ic, d_coop)
    """
    s = g.total
    d_relay = min(p(e.gamma - g.r1), p(e.gamma - g.r2), 2 * p(e.gamma - s))
    d_ic = ic_dmt(g, e).d
    d_coop = min(
        p(1 - g.r1) + p(e.beta - g.r1),
        p(1 - g.r2) + p(e.beta - g.r2),
        p(1 - s) + p(e.alpha - s) + p(e.beta - s),
    )
    return d_relay, d_ic, d_coop


def df_dmt(g, e):
    d_relay, d_ic, d_coop = df_components(g, e)
    if g.total < e.gamma:
        return DmtBreakdown.from_components([
            ("d_ic+d_relay", d_ic + d_relay),
            ("d_coop", d_coop),
        ])
    # relay cannot decode both messages: it stays silent
    return DmtBreakdown.from_components([("d_ic", d_ic)])


def df_optimality_holds(g, e):
    r1, r2, s = g.r1, g.r2, g.total
    violated = []
    if not s <= e.gamma:
        violated.append("relay-decodes")
    if not max(p(e.gamma - r1), p(e.gamma - r2)) <= 2 * p(e.gamma - s):
        violated.append("relay-sum")
    if not max(1 - r1, 1 - r2) <= p(1 - s) + p(e.alpha - s):
        violated.append("ic-sum")
    cooperative = p(1 - s) + p(e.alpha - s) + p(e.beta - s)
    if not max((1 - r1) + p(e.beta - r1), (1 - r2) + p(e.beta - r2)) <= cooperative:
        violated.append("coop-sum")
    return OptimalityReport(tuple(violated))


def df_optimal_dmt(g, e):
    return DiversityValue(min(
        p(1 - g.r1) + p(e.gamma - g.r1),
        p(1 - g.r2) + p(e.gamma - g.r2),
        p(1 - g.r1) + p(e.beta - g.r1),
        p(1 - g.r2) + p(e.beta - g.r2),
    ))


def df_max_diversity(e):
    return DiversityValue(min(e.gamma + 1, e.beta + 1))


def af_fd_dmt(g, e):
    """
    Full-duplex AF with interference pre-decoding. Components labelled
    direct_k come from the desired-signal event of pair k, interference_k
    from decoding the interference first.
    """
    _require_unit_gamma(e)
    a, b = e.alpha, e.beta
    components = []
    for k, r in ((1, g.r1), (2, g.r2)):
        if b < 1:
            direct, interference = p(1 - r), p(a - 1 - r)
        elif b < 2:
            direct, interference = p(2 - b - r) + p(b - 1 - r), p(a - b - r)
        else:
            direct, interference = p(1 - r), p(a - b - r)
        components += [(f"direct{k}", direct), (f"interference{k}", interference)]
    return DmtBreakdown.from_components(components)


def af_fd_envelope(g):
    return DiversityValue(min(p(1 - g.r1), p(1 - g.r2)))


def af_hd_single(r, e):
    if e.beta <= 1:
        return p(1 - r) + p(e.beta - 2 * r)
    return max(2 * p(1 - 2 * r), p(1 - 2 * r) + p((3 - e.beta) / 2 - r))


def af_hd_joint(g, e):
    s = g.total
    if e.beta <= 1:
        return p(1 - s) + p(e.alpha - s) + p(e.beta - 2 * s)
    return p((3 - e.beta) / 2 - s) + p((2 * e.alpha + 1 - e.beta) / 2 - s) + p(1 - 2 * s)


def af_hd_dmt(g, e):
    """
    Half-duplex AF decoded over double-symbols: min over both single-user
    events and the joint event
    """
    _require_unit_gamma(e)
    return DmtBreakdown.from_components([
        ("single1", af_hd_single(g.r1, e)),
        ("single2", af_hd_single(g.r2, e)),
        ("joint", af_hd_joint(g, e)),
    ])


def scheme_dmt(scheme, g, e):
    return {
        "CF": cf_dmt,
        "DF": df_dmt,
        "FD_AF": af_fd_dmt,
        "HD_AF": af_hd_dmt,
    }[scheme](g, e)


ZERO_GAINS = MultiplexingGains(0.0, 0.0)

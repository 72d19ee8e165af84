# oracle.py
"""
Brute-force check of the closed forms: each DMT term is the minimum of a sum
of SNR exponents over the region of exponent space where outage occurs. The
programs here state those regions directly and solve_grid minimizes over a
lattice.

Every outage region used here is upward closed (raising any theta only makes
a channel worse), which is what lets solve_grid prune whole boxes of the
lattice without visiting their points.
"""
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
import logging
import math

import numpy as np
from django.conf import settings

from . import formulas
from .exceptions import DimensionTooLarge, GammaUnsupported, StepInvalid
from .models import ChannelExponents, MultiplexingGains

logger = logging.getLogger(__name__)

MAX_DIMENSION = 5
MAX_STEP = 0.1
INFEASIBLE = math.inf
# absorbs the rounding of lattice index * step
LATTICE_EPS = 1e-9


@dataclass(frozen=True)
class ExponentProgram:
    """
    min sum(theta[objective]) over theta in [0, theta_max]^n with
    feasible(theta) true. feasible takes an array whose last axis runs over
    var_names and returns a boolean per row.
    """
    var_names: tuple
    objective: tuple
    feasible: object = field(compare=False)
    theta_max: float = 6.0
    label: str = ""

    def __post_init__(self):
        unknown = set(self.objective) - set(self.var_names)
        if unknown:
            raise ValueError(f"objective variables {sorted(unknown)} are not program variables")

    @property
    def dimension(self):
        return len(self.var_names)


@dataclass(frozen=True)
class OracleResult:
    min_value: float
    argmin: dict
    grid_step: float

    @property
    def feasible(self):
        return self.min_value != INFEASIBLE


def _p(x):
    return np.maximum(x, 0.0)


def _at_most(x, bound):
    return x <= bound + LATTICE_EPS


def _theta_max(theta_max):
    return settings.ICR_DMT_THETA_MAX if theta_max is None else theta_max


def _tie_order_first(points, bounds):
    # smallest objective first, then the smallest trailing variables
    keys = tuple(points[:, j] for j in range(points.shape[1])) + (bounds,)
    return np.lexsort(keys)[0]


def solve_grid(program, step=None):
    """
    Exact minimum of the program over the lattice {0, step, ..., theta_max}^n.

    Best-first box splitting: a box [lo, hi] of lattice indices is dropped
    when hi is outside the outage region (then so is the whole box), and
    settled when lo is inside it (lo is then the box minimum). Other boxes are
    halved along their widest axis while their lower bound sum(lo) can still
    beat the incumbent.
    """
    if step is None:
        step = settings.ICR_DMT_ORACLE_STEP
    if not 0 < step <= MAX_STEP:
        raise StepInvalid(f"grid step must satisfy 0 < step <= {MAX_STEP}, got {step}")
    if program.dimension > MAX_DIMENSION:
        raise DimensionTooLarge(
            f"{program.label or 'program'} has {program.dimension} variables, limit is {MAX_DIMENSION}"
        )

    n = program.dimension
    top = int(math.floor(program.theta_max / step + LATTICE_EPS))
    weights = np.array([name in program.objective for name in program.var_names], dtype=np.int64)
    exact_ties = bool(weights.all())

    def inside(indices):
        return np.asarray(program.feasible(indices * step), dtype=bool).reshape(len(indices))

    lo = np.zeros((1, n), dtype=np.int64)
    hi = np.full((1, n), top, dtype=np.int64)
    if not inside(hi)[0]:
        return OracleResult(INFEASIBLE, None, step)

    best_bound, best_point = None, None
    while len(lo):
        keep = inside(hi)
        lo, hi = lo[keep], hi[keep]
        bounds = lo @ weights
        settled = inside(lo)

        if settled.any():
            points, point_bounds = lo[settled], bounds[settled]
            first = _tie_order_first(points, point_bounds)
            candidate = (int(point_bounds[first]), tuple(reversed(points[first].tolist())))
            if best_point is None or candidate < (best_bound, tuple(reversed(best_point.tolist()))):
                best_bound, best_point = candidate[0], points[first]

        open_boxes = ~settled
        if best_bound is not None:
            open_boxes &= (bounds < best_bound) if exact_ties else (bounds <= best_bound)
        lo, hi = lo[open_boxes], hi[open_boxes]
        if not len(lo):
            break

        rows = np.arange(len(lo))
        axis = np.argmax(hi - lo, axis=1)
        middle = (lo[rows, axis] + hi[rows, axis]) // 2
        lower_hi = hi.copy()
        lower_hi[rows, axis] = middle
        upper_lo = lo.copy()
        upper_lo[rows, axis] = middle + 1
        lo = np.concatenate([lo, upper_lo])
        hi = np.concatenate([lower_hi, hi])

    argmin = {name: float(i) * step for name, i in zip(program.var_names, best_point)}
    return OracleResult(float(best_bound) * step, argmin, step)


# Program builders

def build_cutset_program(k, g, e, theta_max=None):
    """
    Cut k of the outer bound: the direct link and one relay link must both
    fail to carry r_k
    """
    rate, scale, names = {
        1: (g.r1, e.gamma, ("theta11", "theta13")),
        2: (g.r1, e.beta, ("theta11", "theta31")),
        3: (g.r2, e.gamma, ("theta22", "theta23")),
        4: (g.r2, e.beta, ("theta22", "theta32")),
    }[k]

    def feasible(theta):
        return _at_most(_p(1 - theta[..., 0]), rate) & _at_most(_p(scale - theta[..., 1]), rate)

    return ExponentProgram(names, names, feasible, _theta_max(theta_max), f"cutset {names[0]}+{names[1]}")


def _cf_noise_exponent(e, theta_a, theta_b):
    return np.maximum.reduce([
        _p(e.gamma + e.alpha - e.beta + theta_a),
        _p(e.gamma + 1 - e.beta + theta_a),
        _p(e.gamma + e.alpha - e.beta + theta_b),
        _p(e.gamma + 1 - e.beta + theta_b),
    ])


def build_cf_program(k, g, e, theta_max=None):
    """
    k = 1, 2: individual rate of pair k; k = 3: sum rate at Rx1. The relay
    links theta31, theta32 only enter through the compression noise, and are
    left free for the solver.
    """
    if k in (1, 2):
        rate = g.r1 if k == 1 else g.r2
        names = ("theta11", "theta13", "theta31", "theta32") if k == 1 else \
            ("theta22", "theta23", "theta31", "theta32")

        def feasible(theta):
            noise = _cf_noise_exponent(e, theta[..., 2], theta[..., 3])
            return (
                _at_most(_p(1 - theta[..., 0]), rate)
                & _at_most(_p(e.gamma - theta[..., 1] - noise), rate)
            )
    else:
        rate = g.total
        names = ("theta11", "theta21", "theta13", "theta31", "theta32")

        def feasible(theta):
            noise = _cf_noise_exponent(e, theta[..., 3], theta[..., 4])
            return (
                _at_most(_p(1 - theta[..., 0]), rate)
                & _at_most(_p(e.alpha - theta[..., 1]), rate)
                & _at_most(_p(e.gamma - theta[..., 2] - noise), rate)
            )

    return ExponentProgram(names, names, feasible, _theta_max(theta_max), f"cf component {k}")


def build_df_programs(g, e, theta_max=None):
    """
    Returns (relay, ic, coop). Each region is a union of rate-constraint
    violations, so each feasible() is an OR over constraints.
    """
    cap = _theta_max(theta_max)
    r1, r2, s = g.r1, g.r2, g.total

    def relay_outage(theta):
        t13, t23 = theta[..., 0], theta[..., 1]
        return (
            _at_most(_p(e.gamma - t13), r1)
            | _at_most(_p(e.gamma - t23), r2)
            | _at_most(_p(np.maximum(e.gamma - t13, e.gamma - t23)), s)
        )

    def ic_outage(theta):
        t11, t21, t12, t22 = (theta[..., i] for i in range(4))
        return (
            _at_most(_p(1 - t11), r1)
            | _at_most(_p(1 - t22), r2)
            | _at_most(_p(np.maximum(1 - t11, e.alpha - t21)), s)
            | _at_most(_p(np.maximum(e.alpha - t12, 1 - t22)), s)
        )

    # The Rx2 sum-rate event has the same exponent as Rx1's and would need a
    # sixth variable, so only Rx1's enters
    def coop_outage(theta):
        t11, t21, t31, t22, t32 = (theta[..., i] for i in range(5))
        return (
            _at_most(_p(np.maximum(1 - t11, e.beta - t31)), r1)
            | _at_most(_p(np.maximum(1 - t22, e.beta - t32)), r2)
            | _at_most(_p(np.maximum.reduce([1 - t11, e.alpha - t21, e.beta - t31])), s)
        )

    relay_names = ("theta13", "theta23")
    ic_names = ("theta11", "theta21", "theta12", "theta22")
    coop_names = ("theta11", "theta21", "theta31", "theta22", "theta32")
    return (
        ExponentProgram(relay_names, relay_names, relay_outage, cap, "df relay"),
        ExponentProgram(ic_names, ic_names, ic_outage, cap, "df ic"),
        ExponentProgram(coop_names, coop_names, coop_outage, cap, "df coop"),
    )


def _hd_single_outage(e, rate):
    def feasible(theta):
        t_direct, t_relay_dest, t_source_relay = theta[..., 0], theta[..., 1], theta[..., 2]
        relayed = t_relay_dest + t_source_relay
        if e.beta <= 1:
            return _at_most(np.maximum(e.beta - relayed, 2 - 2 * t_direct), 2 * rate)
        return (
            _at_most(np.maximum(1 - t_direct, 1 - relayed), 2 * rate)
            & _at_most(np.maximum(1 - relayed, 3 - e.beta - 2 * t_direct), 2 * rate)
        )
    return feasible


def build_hd_af_programs(g, e, theta_max=None, pair=1):
    """
    Returns (single, joint) for the receiver of `pair`: the error event on the
    desired message alone and the event on both messages
    """
    if e.gamma != 1:
        raise GammaUnsupported(f"half-duplex AF needs gamma = 1, got gamma = {e.gamma:g}")
    cap = _theta_max(theta_max)
    rate = g.r1 if pair == 1 else g.r2
    if pair == 1:
        single_names = ("theta11", "theta31", "theta13")
        joint_names = ("theta11", "theta21", "theta31", "theta13")
    else:
        single_names = ("theta22", "theta32", "theta23")
        joint_names = ("theta22", "theta12", "theta32", "theta23")
    s = g.total

    def joint_outage(theta):
        t_direct, t_cross = theta[..., 0], theta[..., 1]
        relayed = theta[..., 2] + theta[..., 3]
        if e.beta <= 1:
            dominant = np.maximum.reduce([2 - 2 * t_direct, 2 * e.alpha - 2 * t_cross, e.beta - relayed])
        else:
            dominant = np.maximum.reduce([
                3 - e.beta - 2 * t_direct, 2 * e.alpha + 1 - e.beta - 2 * t_cross, 1 - relayed,
            ])
        return _at_most(dominant, 2 * s)

    return (
        ExponentProgram(single_names, single_names, _hd_single_outage(e, rate), cap, f"hd-af single{pair}"),
        ExponentProgram(joint_names, joint_names, joint_outage, cap, f"hd-af joint{pair}"),
    )


def build_fd_af_programs(g, e, theta_max=None):
    """
    Per pair k, two programs: interference_k over the cross-link exponent
    (decoding the interference first) and direct_k over the per-block
    exponents of blocks b and b+1. Returned as a dict keyed by the matching
    af_fd_dmt component label.
    """
    if e.gamma != 1:
        raise GammaUnsupported(f"full-duplex AF needs gamma = 1, got gamma = {e.gamma:g}")
    cap = _theta_max(theta_max)
    scale = max(1.0, e.beta, 2 * e.beta - 2)
    programs = {}
    for k, rate in ((1, g.r1), (2, g.r2)):
        cross = "theta12" if k == 1 else "theta21"
        direct, source_relay, relay_dest = {1: ("11", "13", "31"), 2: ("22", "23", "32")}[k]
        block_names = (
            f"theta{direct}_b", f"theta{direct}_b1", f"theta{source_relay}",
            f"theta{relay_dest}_b", f"theta{relay_dest}_b1",
        )

        def interference(theta, rate=rate):
            return _at_most(e.alpha - max(1.0, e.beta) - theta[..., 0], rate)

        def blocks(theta, rate=rate):
            direct_path = 2 - scale - theta[..., 0] - theta[..., 1]
            relay_path = 2 * e.beta - 1 - scale - theta[..., 2] - theta[..., 3] - theta[..., 4]
            return _at_most(np.maximum(direct_path, relay_path), rate)

        programs[f"interference{k}"] = ExponentProgram((cross,), (cross,), interference, cap, f"fd-af interference{k}")
        programs[f"direct{k}"] = ExponentProgram(block_names, block_names, blocks, cap, f"fd-af direct{k}")
    return programs


# Verification against the closed forms

@dataclass(frozen=True)
class Deviation:
    scheme: str
    component: str
    exponents: ChannelExponents
    gains: MultiplexingGains
    closed_form: float
    oracle: float
    bound: float

    @property
    def deviation(self):
        return abs(self.oracle - self.closed_form)

    @property
    def passed(self):
        return self.deviation <= self.bound + LATTICE_EPS


def component_programs(scheme, g, e, theta_max=None):
    """
    Pairs of (closed-form component label, program) for one scheme
    """
    if scheme == "cutset":
        labels = ("broadcast1", "mac1", "broadcast2", "mac2")
        return [(label, build_cutset_program(k, g, e, theta_max)) for k, label in enumerate(labels, start=1)]
    if scheme == "CF":
        labels = ("pair1", "pair2", "sum")
        return [(label, build_cf_program(k, g, e, theta_max)) for k, label in enumerate(labels, start=1)]
    if scheme == "DF":
        relay, ic, coop = build_df_programs(g, e, theta_max)
        return [("d_relay", relay), ("d_ic", ic), ("d_coop", coop)]
    if scheme == "FD_AF":
        return sorted(build_fd_af_programs(g, e, theta_max).items())
    if scheme == "HD_AF":
        single1, joint = build_hd_af_programs(g, e, theta_max, pair=1)
        single2, _ = build_hd_af_programs(g, e, theta_max, pair=2)
        return [("single1", single1), ("single2", single2), ("joint", joint)]
    raise ValueError(f"unknown scheme {scheme}")


def closed_form_components(scheme, g, e):
    if scheme == "cutset":
        return dict(formulas.cutset_dmt(g, e).components)
    if scheme == "CF":
        return dict(formulas.cf_dmt(g, e).components)
    if scheme == "DF":
        d_relay, d_ic, d_coop = formulas.df_components(g, e)
        return {"d_relay": d_relay, "d_ic": d_ic, "d_coop": d_coop}
    if scheme == "FD_AF":
        return dict(formulas.af_fd_dmt(g, e).components)
    if scheme == "HD_AF":
        return dict(formulas.af_hd_dmt(g, e).components)
    raise ValueError(f"unknown scheme {scheme}")


def check_tuple(scheme, g, e, step=None, theta_max=None):
    step = settings.ICR_DMT_ORACLE_STEP if step is None else step
    closed = closed_form_components(scheme, g, e)
    rows = []
    for label, program in component_programs(scheme, g, e, theta_max):
        result = solve_grid(program, step)
        rows.append(Deviation(
            scheme=scheme,
            component=label,
            exponents=e,
            gains=g,
            closed_form=closed[label],
            oracle=result.min_value,
            bound=(program.dimension + 1) * step,
        ))
    return rows


VERIFIED_SCHEMES = ("cutset", "CF", "DF", "FD_AF", "HD_AF")


def random_tuples(samples, seed, scheme):
    """
    alpha in [0,3], beta in [0,4], gamma in [0,2] (gamma = 1 for AF),
    r1, r2 in [0,1]
    """
    rng = np.random.Generator(np.random.Philox(np.random.SeedSequence([int(seed), VERIFIED_SCHEMES.index(scheme)])))
    draws = rng.uniform(size=(samples, 5)) * np.array([3.0, 4.0, 2.0, 1.0, 1.0])
    for alpha, beta, gamma, r1, r2 in draws.tolist():
        if scheme in ("FD_AF", "HD_AF"):
            gamma = 1.0
        yield MultiplexingGains(r1, r2), ChannelExponents(alpha, beta, gamma)


def verify(samples, step=None, seed=0, schemes=VERIFIED_SCHEMES, workers=None, theta_max=None):
    """
    Oracle-versus-closed-form report over random tuples, in a fixed order
    independent of the number of workers
    """
    step = settings.ICR_DMT_ORACLE_STEP if step is None else step
    if not 0 < step <= MAX_STEP:
        raise StepInvalid(f"grid step must satisfy 0 < step <= {MAX_STEP}, got {step}")
    workers = workers or settings.ICR_DMT_THREADS
    jobs = [(scheme, g, e) for scheme in schemes for g, e in random_tuples(samples, seed, scheme)]
    logger.info(f"Verifying {len(jobs)} tuples at step {step} on {workers} threads")

    with ThreadPoolExecutor(max_workers=workers) as pool:
        batches = list(pool.map(lambda job: check_tuple(*job, step=step, theta_max=theta_max), jobs))

    rows = [row for batch in batches for row in batch]
    failures = [row for row in rows if not row.passed]
    if failures:
        logger.warning(f"{len(failures)} of {len(rows)} components exceed their oracle bound")
    else:
        logger.info(f"All {len(rows)} components within bound")
    return rows

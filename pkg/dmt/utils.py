# utils.py
import csv
import io
import logging

from django.conf import settings

from . import formulas
from .exceptions import GammaUnsupported
from .models import MultiplexingGains, Scheme, SweepConfig

logger = logging.getLogger(__name__)

SWEEP_COLUMNS = ['r', 'd_cutset', 'd_cf', 'd_df', 'd_af_fd', 'd_af_hd']
EXTENDED_COLUMNS = ['d_ic', 'd_relay_upper']
RATIO_COLUMN = 'r2'
SIM_COLUMNS = [
    'scheme', 'alpha', 'beta', 'gamma', 'r1', 'r2',
    'snr_db', 'trials', 'events', 'p_hat', 'ci_low', 'ci_high',
]
SLOPE_COLUMNS = [
    'scheme', 'alpha', 'beta', 'gamma', 'r1', 'r2',
    'd_hat', 'stderr', 'points_used', 'd_closed_form', 'passed',
]
ORACLE_COLUMNS = [
    'scheme', 'component', 'alpha', 'beta', 'gamma', 'r1', 'r2',
    'closed_form', 'oracle', 'deviation', 'bound', 'passed',
]


def format_value(value):
    """
    CSV cell text: fixed '.' decimals, no locale, empty for missing values
    """
    if value is None:
        return ''
    if isinstance(value, bool):
        return 'true' if value else 'false'
    if isinstance(value, float):
        return f'{value:.10g}'
    return str(value)


def render_csv(rows, columns):
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator='\n')
    writer.writerow(columns)
    for row in rows:
        writer.writerow([format_value(row.get(column)) for column in columns])
    return buffer.getvalue()


def write_output(text, out, stream):
    """
    Write to the stream when out is '-', otherwise to the file at out
    """
    if out == '-':
        stream.write(text, ending='')
        return
    with open(out, 'w', encoding='utf-8', newline='') as handle:
        handle.write(text)
    logger.info(f"Wrote {text.count(chr(10)) - 1} rows to {out}")


def r_grid(step):
    count = int(round(1.0 / step, 9))
    grid = [round(i * step, 10) for i in range(count + 1)]
    return [r for r in grid if r <= 1.0]


def _scheme_value(scheme, g, e):
    try:
        return formulas.scheme_dmt(scheme, g, e).d
    except GammaUnsupported:
        return None


def sweep_rows(e, r_step=0.01, r2_ratio=1.0, extended=False):
    """
    DMT of every scheme along r1 = r, r2 = r2_ratio * r. Points with r2 > 1
    are skipped; AF cells stay empty when gamma != 1. Each row carries its r2.
    """
    if e.gamma != 1:
        logger.warning(f"AF columns left empty: amplify-and-forward needs gamma = 1, got {e.gamma:g}")
    rows = []
    for r in r_grid(r_step):
        r2 = round(r2_ratio * r, 10)
        if r2 > 1.0:
            continue
        g = MultiplexingGains(r, r2)
        row = {
            'r': r,
            RATIO_COLUMN: r2,
            'd_cutset': formulas.cutset_dmt(g, e).d,
            'd_cf': formulas.cf_dmt(g, e).d,
            'd_df': formulas.df_dmt(g, e).d,
            'd_af_fd': _scheme_value(Scheme.FD_AF, g, e),
            'd_af_hd': _scheme_value(Scheme.HD_AF, g, e),
        }
        if extended:
            row['d_ic'] = formulas.ic_dmt(g, e).d
            row['d_relay_upper'] = formulas.relay_dmt_upper(r, e.beta, e.gamma).d
        rows.append(row)
    return rows


def sweep_columns(extended=False, r2_ratio=1.0):
    """
    Stable columns, then r2 when it differs from r, then the extended ones
    """
    columns = list(SWEEP_COLUMNS)
    if r2_ratio != 1:
        columns.append(RATIO_COLUMN)
    if extended:
        columns += EXTENDED_COLUMNS
    return columns


def build_eval_report(g, e):
    """
    Every scheme's DMT with its components, the cut-set bound, the IC and
    relay-channel references and both optimality checks
    """
    cutset = formulas.cutset_dmt(g, e)
    schemes = []
    for scheme in Scheme.values:
        try:
            breakdown = formulas.scheme_dmt(scheme, g, e)
        except GammaUnsupported as exc:
            logger.warning(f"{scheme} skipped: {exc.detail}")
            schemes.append({'scheme': scheme, 'supported': False, 'd': None, 'components': {}, 'detail': str(exc.detail)})
            continue
        schemes.append({
            'scheme': scheme,
            'supported': True,
            'd': breakdown.d,
            'components': dict(breakdown.components),
        })

    cf_report = formulas.cf_optimality_holds(g, e)
    df_report = formulas.df_optimality_holds(g, e)
    return {
        'exponents': {'alpha': e.alpha, 'beta': e.beta, 'gamma': e.gamma},
        'gains': {'r1': g.r1, 'r2': g.r2},
        'cutset': {'d': cutset.d, 'components': dict(cutset.components)},
        'schemes': schemes,
        'ic': formulas.ic_dmt(g, e).d,
        'relay_upper': formulas.relay_dmt_upper(g.r1, e.beta, e.gamma).d,
        'optimality': {
            'CF': {
                'holds': cf_report.holds,
                'violated': list(cf_report.violated),
                'optimal_dmt': formulas.cf_optimal_dmt(g, e).d,
            },
            'DF': {
                'holds': df_report.holds,
                'violated': list(df_report.violated),
                'optimal_dmt': formulas.df_optimal_dmt(g, e).d,
            },
        },
        'max_diversity': {
            'CF': formulas.cf_max_diversity(e).d,
            'DF': formulas.df_max_diversity(e).d,
        },
    }


def sweep_config(data):
    """
    SweepConfig from validated RunConfig data
    """
    return SweepConfig(
        scheme=data['scheme'],
        exponents=data['exponents'],
        gains=data['gains'],
        snr_grid_db=tuple(data['snr_grid']),
        trials_per_point=data['trials'],
        master_seed=data['seed'],
        batch_size=settings.ICR_DMT_BATCH_SIZE,
    )


def outage_rows(cfg, points):
    return [
        {
            'scheme': cfg.scheme,
            'alpha': cfg.exponents.alpha,
            'beta': cfg.exponents.beta,
            'gamma': cfg.exponents.gamma,
            'r1': cfg.gains.r1,
            'r2': cfg.gains.r2,
            'snr_db': point.snr_db,
            'trials': point.trials,
            'events': point.events,
            'p_hat': point.p_hat,
            'ci_low': point.ci_low,
            'ci_high': point.ci_high,
        }
        for point in points
    ]


def oracle_rows(deviations):
    return [
        {
            'scheme': row.scheme,
            'component': row.component,
            'alpha': row.exponents.alpha,
            'beta': row.exponents.beta,
            'gamma': row.exponents.gamma,
            'r1': row.gains.r1,
            'r2': row.gains.r2,
            'closed_form': row.closed_form,
            'oracle': row.oracle,
            'deviation': row.deviation,
            'bound': row.bound,
            'passed': row.passed,
        }
        for row in deviations
    ]

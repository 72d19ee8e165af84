# sim.py
import logging

from django.core.management.base import CommandError

from dmt.simulation import run_sweep, slope_summary
from dmt.utils import SIM_COLUMNS, SLOPE_COLUMNS, outage_rows, render_csv, sweep_config, write_output

from ._base import EXIT_USAGE, EXIT_VERIFICATION_FAILED, DmtCommand, add_flags

logger = logging.getLogger(__name__)

RUN_FLAGS = (
    'config', 'preset', 'scheme', 'alpha', 'beta', 'gamma', 'r1', 'r2',
    'snr_grid', 'trials', 'seed', 'threads', 'out',
)


class Command(DmtCommand):
    help = "Monte Carlo outage sweep over an SNR grid (outage) and its diversity slope fit (slope)"

    def add_arguments(self, parser):
        actions = parser.add_subparsers(dest='action', required=True)

        outage = actions.add_parser('outage', help='Outage probability per SNR point as CSV')
        add_flags(outage, *RUN_FLAGS)

        slope = actions.add_parser('slope', help='Fitted diversity against the closed form')
        add_flags(slope, *RUN_FLAGS, 'event_floor', 'tolerance')
        slope.add_argument(
            '--points', dest='points',
            help='Also write the outage sweep CSV to this path ("-" only when --out is a file)',
        )

    def _sweep(self, options):
        data = self.run_config(options)
        if not data.get('scheme'):
            raise CommandError("sim needs --scheme (CF, DF, FD_AF or HD_AF)", returncode=EXIT_USAGE)
        if options.get('points') == '-' and data['out'] == '-':
            raise CommandError(
                "--points - and --out - would both write to stdout; send one of them to a file",
                returncode=EXIT_USAGE,
            )
        cfg = sweep_config(data)
        return data, cfg, run_sweep(cfg, workers=data.get('threads'))

    def handle_outage(self, options):
        data, cfg, points = self._sweep(options)
        write_output(render_csv(outage_rows(cfg, points), SIM_COLUMNS), data['out'], self.stdout)

    def handle_slope(self, options):
        data, cfg, points = self._sweep(options)
        if options.get('points'):
            write_output(render_csv(outage_rows(cfg, points), SIM_COLUMNS), options['points'], self.stdout)

        summary = slope_summary(cfg, points, tolerance=data['tolerance'], event_floor=data['event_floor'])
        write_output(render_csv([summary], SLOPE_COLUMNS), data['out'], self.stdout)
        if not summary['passed']:
            raise CommandError(
                f"Fitted slope {summary['d_hat']:.4f} is more than {data['tolerance']:g} "
                f"from the closed form {summary['d_closed_form']:.4f}",
                returncode=EXIT_VERIFICATION_FAILED,
            )
        logger.info(f"Slope {summary['d_hat']:.4f} within {data['tolerance']:g} of {summary['d_closed_form']:.4f}")

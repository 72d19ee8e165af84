# oracle.py
import logging

from django.core.management.base import CommandError

from dmt import oracle
from dmt.utils import ORACLE_COLUMNS, oracle_rows, render_csv, write_output

from ._base import EXIT_VERIFICATION_FAILED, DmtCommand, add_flags

logger = logging.getLogger(__name__)


class Command(DmtCommand):
    help = "Check every closed-form DMT component against a lattice minimization of its exponent program"

    def add_arguments(self, parser):
        actions = parser.add_subparsers(dest='action', required=True)
        verify = actions.add_parser('verify', help='Random-tuple agreement report as CSV')
        add_flags(verify, 'config', 'scheme', 'samples', 'step', 'seed', 'threads', 'out')

    def handle_verify(self, options):
        data = self.run_config(options)
        schemes = (data['scheme'],) if data.get('scheme') else oracle.VERIFIED_SCHEMES
        deviations = oracle.verify(
            data['samples'],
            step=data['step'],
            seed=data['seed'],
            schemes=schemes,
            workers=data.get('threads'),
        )
        write_output(render_csv(oracle_rows(deviations), ORACLE_COLUMNS), data['out'], self.stdout)

        worst = max(row.deviation for row in deviations)
        failures = [row for row in deviations if not row.passed]
        logger.info(f"Max deviation {worst:.6f} over {len(deviations)} components")
        if failures:
            raise CommandError(
                f"{len(failures)} of {len(deviations)} components deviate beyond (n+1)*step, "
                f"max deviation {worst:.6f}",
                returncode=EXIT_VERIFICATION_FAILED,
            )

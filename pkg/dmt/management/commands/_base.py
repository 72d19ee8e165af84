# _base.py
"""
Shared plumbing for the dmt, oracle and sim commands: run-config flags,
JSON config merging and the exit-code contract (0 success, 1 usage,
2 verification failure, 3 insufficient data).
"""
import json
import sys

from django.core.management.base import BaseCommand, CommandError

from dmt.exceptions import DmtError, InsufficientData
from dmt.serializers import RunConfigSerializer

EXIT_USAGE = 1
EXIT_VERIFICATION_FAILED = 2
EXIT_INSUFFICIENT_DATA = 3

FLAGS = {
    'config': ('--config', {'help': 'JSON run configuration; flags override its values'}),
    'preset': ('--preset', {'help': 'Named exponent triple, e.g. strong_interference'}),
    'scheme': ('--scheme', {'help': 'CF, DF, FD_AF or HD_AF'}),
    'alpha': ('--alpha', {'type': float, 'help': 'Cross-link exponent'}),
    'beta': ('--beta', {'type': float, 'help': 'Relay-destination exponent'}),
    'gamma': ('--gamma', {'type': float, 'help': 'Source-relay exponent'}),
    'r1': ('--r1', {'type': float, 'help': 'Multiplexing gain of pair 1'}),
    'r2': ('--r2', {'type': float, 'help': 'Multiplexing gain of pair 2'}),
    'r_step': ('--r-step', {'type': float, 'help': 'Spacing of the r grid'}),
    'r2_ratio': ('--r2-ratio', {'type': float, 'help': 'Sweep r2 = ratio * r1'}),
    'extended': ('--extended', {'action': 'store_const', 'const': True, 'help': 'Append d_ic and d_relay_upper'}),
    'snr_grid': ('--snr-grid', {'help': 'SNR grid in dB: "start:stop:step" or "30,40,50"'}),
    'trials': ('--trials', {'type': int, 'help': 'Trials per SNR point'}),
    'seed': ('--seed', {'type': int, 'help': 'Master seed'}),
    'event_floor': ('--event-floor', {'type': int, 'help': 'Minimum outage events for a point to enter the fit'}),
    'tolerance': ('--tolerance', {'type': float, 'help': 'Slope pass band around the closed form'}),
    'samples': ('--samples', {'type': int, 'help': 'Random tuples per scheme'}),
    'step': ('--step', {'type': float, 'help': 'Oracle lattice step'}),
    'threads': ('--threads', {'type': int, 'help': 'Worker threads (defaults to ICR_DMT_THREADS)'}),
    'out': ('--out', {'help': 'Output path, "-" for stdout'}),
}


def add_flags(parser, *names):
    for name in names:
        flag, kwargs = FLAGS[name]
        parser.add_argument(flag, dest=name, **kwargs)


class DmtCommand(BaseCommand):
    """
    Subcommand dispatch with domain errors mapped to exit codes. Parse errors
    raise CommandError instead of argparse's exit status 2, which is reserved
    for verification failures here.
    """

    def create_parser(self, prog_name, subcommand, **kwargs):
        parser = super().create_parser(prog_name, subcommand, **kwargs)
        parser.called_from_command_line = False
        return parser

    def run_from_argv(self, argv):
        try:
            super().run_from_argv(argv)
        except CommandError as e:
            self.stderr.write(f"CommandError: {e}")
            sys.exit(EXIT_USAGE)

    def handle(self, *args, **options):
        action = options['action'].replace('-', '_')
        try:
            getattr(self, f'handle_{action}')(options)
        except InsufficientData as e:
            raise CommandError(str(e.detail), returncode=EXIT_INSUFFICIENT_DATA)
        except DmtError as e:
            raise CommandError(str(e.detail), returncode=EXIT_USAGE)

    def run_config(self, options):
        """
        Validated RunConfig: JSON file values, then every flag that was given
        """
        data = {}
        if options.get('config'):
            try:
                with open(options['config'], encoding='utf-8') as handle:
                    data = json.load(handle)
            except (OSError, ValueError) as e:
                raise CommandError(f"Cannot read config {options['config']}: {str(e)}", returncode=EXIT_USAGE)
            if not isinstance(data, dict):
                raise CommandError(f"Config {options['config']} must hold a JSON object", returncode=EXIT_USAGE)
        flags = {
            name: options[name]
            for name in FLAGS
            if name != 'config' and options.get(name) is not None
        }
        serializer = RunConfigSerializer(data={**data, **flags})
        if not serializer.is_valid():
            raise CommandError(f"Invalid configuration: {json.dumps(serializer.errors)}", returncode=EXIT_USAGE)
        return serializer.validated_data

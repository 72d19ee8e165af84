# dmt.py
from dmt.utils import build_eval_report, render_csv, sweep_columns, sweep_rows, write_output

from ._base import DmtCommand, add_flags

EXPONENT_FLAGS = ('config', 'preset', 'alpha', 'beta', 'gamma')


def _breakdown(components):
    return ", ".join(f"{label}={d:.6f}" for label, d in components.items())


class Command(DmtCommand):
    help = "Evaluate the closed-form DMT expressions (eval) or write a figure sweep as CSV (sweep)"

    def add_arguments(self, parser):
        actions = parser.add_subparsers(dest='action', required=True)

        evaluate = actions.add_parser('eval', help='DMT of every scheme at one (r1, r2)')
        add_flags(evaluate, *EXPONENT_FLAGS, 'r1', 'r2')

        sweep = actions.add_parser('sweep', help='DMT of every scheme along r1 = r2 = r')
        add_flags(sweep, *EXPONENT_FLAGS, 'r_step', 'r2_ratio', 'extended', 'out')

    def handle_eval(self, options):
        data = self.run_config(options)
        report = build_eval_report(data['gains'], data['exponents'])
        exponents, gains = report['exponents'], report['gains']

        self.stdout.write(f"alpha={exponents['alpha']:g} beta={exponents['beta']:g} gamma={exponents['gamma']:g}")
        self.stdout.write(f"r1={gains['r1']:g} r2={gains['r2']:g}")
        self.stdout.write(f"{'cutset':<8}{report['cutset']['d']:.6f}  ({_breakdown(report['cutset']['components'])})")
        for row in report['schemes']:
            if not row['supported']:
                self.stdout.write(f"{row['scheme']:<8}unsupported: {row['detail']}")
                continue
            self.stdout.write(f"{row['scheme']:<8}{row['d']:.6f}  ({_breakdown(row['components'])})")
        self.stdout.write(f"{'IC':<8}{report['ic']:.6f}")
        self.stdout.write(f"{'relay':<8}{report['relay_upper']:.6f}  (relay channel bound at r1)")

        for scheme, check in report['optimality'].items():
            status = 'holds' if check['holds'] else 'violated: ' + ', '.join(check['violated'])
            self.stdout.write(
                f"{scheme} optimality {status}; optimal DMT {check['optimal_dmt']:.6f}, "
                f"max diversity {report['max_diversity'][scheme]:.6f}"
            )

    def handle_sweep(self, options):
        data = self.run_config(options)
        rows = sweep_rows(
            data['exponents'],
            r_step=data['r_step'],
            r2_ratio=data['r2_ratio'],
            extended=data['extended'],
        )
        columns = sweep_columns(data['extended'], data['r2_ratio'])
        write_output(render_csv(rows, columns), data['out'], self.stdout)

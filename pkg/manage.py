#!/usr/bin/env python
"""Command-line entry point: `dmt`, `oracle` and `sim` run as management commands."""
import os
import sys


def main():
    """Dispatch to a management command."""
    os.environ.setdefault('DJANGO_SETTINGS_MODULE', 'icr_dmt.settings')
    try:
        from django.core.management import execute_from_command_line
    except ImportError as exc:
        raise ImportError(
            "Couldn't import Django. Install requirements.txt into the active "
            "virtual environment first."
        ) from exc
    execute_from_command_line(sys.argv)


if __name__ == '__main__':
    main()

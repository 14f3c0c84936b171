"""
Shared plumbing for the qsr management commands.

Exit status: 0 when the command succeeds and every checked bound holds,
1 on usage or input errors, 2 when a bound or consistency check fails.
"""

import csv
import io
import logging
import sys
from pathlib import Path

import numpy as np
from django.core.management.base import BaseCommand, CommandError, CommandParser

from ..conf import qsr_setting
from ..exceptions import ConsistencyError, QSRError
from ..forms import SchemeParamsForm, form_errors
from ..formats import format_double, report_json, report_text

logger = logging.getLogger(__name__)

FAILED_CHECK = 2


def _csv_cell(value):
    if value is None:
        return ""
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        return format_double(value)
    return value


class ReportParser(CommandParser):
    # argparse exits with 2 on bad usage; 2 is reserved for failed checks
    def error(self, message):
        if self.called_from_command_line:
            self.print_usage(sys.stderr)
            self.exit(1, f"{self.prog}: error: {message}\n")
        raise CommandError(f"Error: {message}")


class QSRCommand(BaseCommand):
    formats = ("text", "json")

    def create_parser(self, prog_name, subcommand, **kwargs):
        parser = super().create_parser(prog_name, subcommand, **kwargs)
        parser.__class__ = ReportParser
        return parser

    def add_arguments(self, parser):
        parser.add_argument("--seed", type=int, default=None,
                            help="RNG seed (default: QSRLAB_SEED or 0)")
        parser.add_argument("--format", choices=self.formats, default=self.formats[0])
        parser.add_argument("--output", help="write to this file instead of stdout")
        self.add_command_arguments(parser)

    def add_command_arguments(self, parser):
        pass

    def execute(self, *args, **options):
        try:
            return super().execute(*args, **options)
        except ConsistencyError as exc:
            logger.error("consistency check failed: %s", exc)
            raise CommandError(str(exc), returncode=FAILED_CHECK) from exc
        except QSRError as exc:
            raise CommandError(str(exc)) from exc

    # inputs

    def rng(self, options):
        seed = options.get("seed")
        return np.random.default_rng(qsr_setting("DEFAULT_SEED") if seed is None else seed)

    def scheme_params(self, options, guarded=True):
        form = SchemeParamsForm(
            {name: options.get(name) for name in ("m", "n", "t", "delta")},
            guarded=guarded,
        )
        if not form.is_valid():
            raise CommandError(form_errors(form))
        return form.params

    def read_text(self, path):
        try:
            return Path(path).read_text()
        except OSError as exc:
            raise CommandError(f"cannot read {path}: {exc.strerror}") from exc

    # outputs

    def write_file(self, path, text):
        try:
            Path(path).write_text(text)
        except OSError as exc:
            raise CommandError(f"cannot write {path}: {exc.strerror}") from exc

    def write(self, text, options):
        if options.get("output"):
            self.write_file(options["output"], text)
        else:
            self.stdout.write(text, ending="")

    def render(self, kind, payload, options):
        if options["format"] == "json":
            return report_json(kind, payload)
        return report_text(kind, payload)

    def render_rows(self, kind, header, rows, options):
        # CSV with a header line; an empty table is the header alone
        if options["format"] == "json":
            return report_json(kind, {"rows": [dict(zip(header, row)) for row in rows]})
        buffer = io.StringIO()
        writer = csv.writer(buffer, lineterminator="\n")
        writer.writerow(header)
        writer.writerows([_csv_cell(value) for value in row] for row in rows)
        return buffer.getvalue()

    def certify(self, holds, message):
        if not holds:
            logger.warning(message)
            raise CommandError(message, returncode=FAILED_CHECK)

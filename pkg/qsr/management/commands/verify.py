"""
qsr/management/commands/verify.py - Acceptance Suite

Runs every acceptance check (spectrum law, randomization bound, rank
oracle, invertibility, key-copy identity, factor-2 sandwich, key-size
bound, Pauli pad, hybrid composition, key-size accounting) and prints one
line per check. Exits with status 2 if any check fails.

Usage:
    python manage.py verify --grid default
    python manage.py verify --grid "m=1-2;n=1-3;t=0-2" --only rank_oracle --only pauli_pad
    python manage.py verify --format json --record
"""

from django.core.management.base import CommandError

from qsr.forms import GridForm, form_errors
from qsr.management.base import QSRCommand
from qsr.models import Certificate
from qsr.verification import CHECKS, run_checks, summarize


class Command(QSRCommand):
    help = "Run the acceptance suite and certify every bound"

    def add_command_arguments(self, parser):
        parser.add_argument("--grid", default="default", help='parameter grid, "default" for the configured one')
        parser.add_argument("--only", action="append", choices=[name for name, _ in CHECKS],
                            help="run only this check (repeatable)")
        parser.add_argument("--record", action="store_true", help="store the outcome in the ledger")

    def handle(self, *args, **options):
        form = GridForm({"grid": options["grid"]})
        if not form.is_valid():
            raise CommandError(form_errors(form))
        grid = form.cleaned_data["grid"]

        results = run_checks(grid, self.rng(options), names=options["only"])
        summary = summarize(results)
        if options["format"] == "json":
            self.write(self.render("verify", {"grid": options["grid"], **summary}, options), options)
        else:
            lines = [f"{'PASS' if r.holds else 'FAIL'}  {r.name:<20} {r.detail}" for r in results]
            lines.append(f"{summary['passed']} passed, {summary['failed']} failed")
            self.write("\n".join(lines) + "\n", options)

        if options["record"]:
            Certificate.record(
                command="verify",
                kind="acceptance",
                payload=summary,
                holds=summary["holds"],
                params={"grid": options["grid"]},
            )
        self.certify(summary["holds"], f"{summary['failed']} acceptance check(s) failed")

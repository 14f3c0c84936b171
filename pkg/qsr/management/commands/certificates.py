"""
qsr/management/commands/certificates.py - Certificate Ledger Listing

Lists the outcomes stored by ``analyze``, ``sweep`` and ``verify`` when
run with --record, newest first.

Usage:
    python manage.py certificates
    python manage.py certificates --failed --limit 5
    python manage.py certificates --command sweep --format json
"""

from qsr.management.base import QSRCommand
from qsr.models import Certificate


class Command(QSRCommand):
    help = "List recorded certificates"

    def add_command_arguments(self, parser):
        parser.add_argument("--failed", action="store_true", help="only certificates whose bound failed")
        parser.add_argument("--command", dest="certificate_command",
                            choices=[value for value, _ in Certificate.COMMAND_CHOICES])
        parser.add_argument("--limit", type=int, default=20)

    def handle(self, *args, **options):
        certificates = Certificate.objects.all()
        if options["failed"]:
            certificates = certificates.filter(holds=False)
        if options["certificate_command"]:
            certificates = certificates.filter(command=options["certificate_command"])
        certificates = list(certificates[:max(options["limit"], 0)])

        if options["format"] == "json":
            rows = [
                {
                    "id": c.id,
                    "command": c.command,
                    "kind": c.kind,
                    "params": c.params,
                    "schema": c.schema,
                    "epsilon": c.epsilon,
                    "bound": c.bound,
                    "holds": c.holds,
                    "created_at": c.created_at.isoformat(),
                }
                for c in certificates
            ]
            self.write(self.render("certificates", {"certificates": rows}, options), options)
            return

        if not certificates:
            self.stdout.write(self.style.WARNING("No certificates recorded"))
            return
        for c in certificates:
            verdict = self.style.SUCCESS("holds") if c.holds else self.style.ERROR("FAILS")
            figures = f" epsilon={c.epsilon}" if c.epsilon else ""
            figures += f" bound={c.bound}" if c.bound else ""
            self.stdout.write(f"#{c.id} {c.created_at:%Y-%m-%d %H:%M} {c.command} {c.kind} [{verdict}]{figures}")

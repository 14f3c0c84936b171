"""Database models for the certificate ledger."""

import json

from django.db import models
from django.utils import timezone

from .conf import qsr_setting


class Certificate(models.Model):
    # One recorded analysis, sweep or verification outcome
    COMMAND_CHOICES = [
        ("analyze", "Analyze"),
        ("sweep", "Sweep"),
        ("verify", "Verify"),
    ]

    command = models.CharField(max_length=10, choices=COMMAND_CHOICES)
    kind = models.CharField(max_length=40, blank=True)
    params = models.JSONField(default=dict, blank=True)
    schema = models.CharField(max_length=20)
    epsilon = models.CharField(max_length=200, blank=True)
    bound = models.CharField(max_length=200, blank=True)
    holds = models.BooleanField()
    payload = models.JSONField(default=dict)
    created_at = models.DateTimeField(default=timezone.now)

    def __str__(self):
        verdict = "holds" if self.holds else "FAILS"
        label = f"{self.command} {self.kind}".strip()
        return f"{label} [{verdict}] {self.created_at:%Y-%m-%d %H:%M}"

    @classmethod
    def record(cls, command, payload, holds, kind="", params=None, epsilon="", bound=""):
        # Payload is stored as it was emitted, so it must be JSON-clean
        json.dumps(payload, allow_nan=False)
        return cls.objects.create(
            command=command,
            kind=kind,
            params=params or {},
            schema=qsr_setting("SCHEMA_VERSION"),
            epsilon=epsilon,
            bound=bound,
            holds=holds,
            payload=payload,
        )

    class Meta:
        ordering = ["-created_at", "-id"]

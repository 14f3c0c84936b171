"""App configuration for the qsr application."""

from django.apps import AppConfig


class QSRConfig(AppConfig):
    default_auto_field = "django.db.models.BigAutoField"
    name = "qsr"
    verbose_name = "Quantum State Randomization Lab"

    def ready(self):
        # Import checks to register the settings checks
        from . import checks  # noqa: F401

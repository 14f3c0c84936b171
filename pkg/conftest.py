"""Configure Django for plain pytest, mirroring what ``manage.py test`` does."""

import os

import django


def pytest_configure(config):
    os.environ.setdefault("DJANGO_SETTINGS_MODULE", "qsrlab.settings")
    django.setup()
    from django.test.utils import setup_databases, setup_test_environment

    setup_test_environment()
    config._qsr_old_dbs = setup_databases(verbosity=0, interactive=False)


def pytest_unconfigure(config):
    from django.test.utils import teardown_databases, teardown_test_environment

    old = getattr(config, "_qsr_old_dbs", None)
    if old is not None:
        teardown_databases(old, verbosity=0)
        teardown_test_environment()

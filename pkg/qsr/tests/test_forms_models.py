from fractions import Fraction

from django import forms
from django.test import SimpleTestCase, TestCase, override_settings

from qsr.checks import check_qsrlab_settings
from qsr.forms import GridForm, KeysizeForm, SchemeParamsForm, form_errors, parse_distribution, parse_grid
from qsr.models import Certificate
from qsr.scheme import SchemeParams


class GridTests(SimpleTestCase):
    def test_default_grid(self):
        points = parse_grid("default")
        self.assertEqual(len(points), 3 * 4 * 4)
        self.assertEqual(points[0], SchemeParams(1, 1, 0))
        self.assertEqual(points[-1], SchemeParams(3, 4, 3))

    def test_empty_grid(self):
        self.assertEqual(parse_grid(""), [])
        self.assertEqual(parse_grid(None), [])

    def test_lists_and_ranges(self):
        points = parse_grid("m=2;n=1,3;t=1-2")
        self.assertEqual([(p.m, p.n, p.t) for p in points], [(2, 1, 1), (2, 1, 2), (2, 3, 1), (2, 3, 2)])

    def test_delta_axis(self):
        points = parse_grid("m=1;n=4,6,8;delta=1/2")
        # n=8 gives t(m+n) = 36, beyond the register guard
        self.assertEqual([(p.n, p.t, p.delta) for p in points], [(4, 2, 0.5), (6, 3, 0.5)])

    def test_points_beyond_the_guards_are_skipped(self):
        self.assertEqual([p.t for p in parse_grid("m=3;n=5;t=2-4")], [2, 3])

    def test_errors(self):
        for text in ("m=1;n=1", "m=1;n=1;t=1;delta=1/2", "m=1;m=2;n=1;t=1", "x=1;n=1;t=1", "m=a;n=1;t=1", "m"):
            with self.subTest(text=text), self.assertRaises(forms.ValidationError):
                parse_grid(text)

    def test_grid_form(self):
        form = GridForm({"grid": "m=1;n=2;t=1"})
        self.assertTrue(form.is_valid())
        self.assertEqual(form.cleaned_data["grid"], [SchemeParams(1, 2, 1)])
        self.assertFalse(GridForm({"grid": "m=1"}).is_valid())


class DistributionTests(SimpleTestCase):
    def test_named_distributions(self):
        self.assertEqual(len(parse_distribution("uniform", 1, 2)), 4)
        self.assertEqual(parse_distribution("point", 2, 2), {(0, 0): 1})
        self.assertEqual(parse_distribution("two-point:01,11", 2, 2),
                         {(0, 0): Fraction(1, 2), (1, 3): Fraction(1, 2)})
        self.assertEqual(parse_distribution("two-point:00", 2, 1), {(0,): 1})

    def test_explicit_weights(self):
        dist = parse_distribution("0,1=1/4;1,1=3/4", 1, 2)
        self.assertEqual(dist, {(0, 1): Fraction(1, 4), (1, 1): Fraction(3, 4)})

    def test_errors(self):
        cases = [
            ("uniform", 3, 6),
            ("two-point:1", 1, 2),
            ("0,1=1/2", 1, 2),
            ("01,1=1", 1, 2),
            ("0,1=x", 1, 2),
        ]
        for text, m, t in cases:
            with self.subTest(text=text), self.assertRaises(forms.ValidationError):
                parse_distribution(text, m, t)


class SchemeParamsFormTests(SimpleTestCase):
    def test_t(self):
        form = SchemeParamsForm({"m": 1, "n": 2, "t": 2})
        self.assertTrue(form.is_valid(), form.errors)
        self.assertEqual(form.params, SchemeParams(1, 2, 2))

    def test_delta(self):
        form = SchemeParamsForm({"m": 1, "n": 4, "delta": 0.5})
        self.assertTrue(form.is_valid(), form.errors)
        self.assertEqual(form.params.t, 2)

    def test_t_must_agree_with_delta(self):
        form = SchemeParamsForm({"m": 1, "n": 4, "t": 3, "delta": 0.5})
        self.assertFalse(form.is_valid())
        self.assertIn("contradicts", form_errors(form))

    def test_needs_t_or_delta(self):
        self.assertFalse(SchemeParamsForm({"m": 1, "n": 4}).is_valid())

    def test_guards(self):
        form = SchemeParamsForm({"m": 3, "n": 5, "t": 4})
        self.assertFalse(form.is_valid())
        self.assertIn("t(m+n) ≤ 24", form_errors(form))
        self.assertTrue(SchemeParamsForm({"m": 3, "n": 5, "t": 4}, guarded=False).is_valid())

    def test_field_errors_are_prefixed(self):
        form = SchemeParamsForm({"m": 0, "n": 1, "t": 1})
        self.assertFalse(form.is_valid())
        self.assertTrue(form_errors(form).startswith("m: "))


class KeysizeFormTests(SimpleTestCase):
    def test_valid(self):
        form = KeysizeForm({"t": 2, "d": 4, "eps1": 0.125, "eps2": 0.0625})
        self.assertTrue(form.is_valid(), form.errors)

    def test_ranges(self):
        for data in ({"t": 0, "d": 4, "eps1": 0.5, "eps2": 0.5},
                     {"t": 1, "d": 1, "eps1": 0.5, "eps2": 0.5},
                     {"t": 1, "d": 4, "eps1": 0.0, "eps2": 0.5},
                     {"t": 1, "d": 4, "eps1": 0.5, "eps2": 1.5}):
            with self.subTest(data=data):
                self.assertFalse(KeysizeForm(data).is_valid())


class CertificateTests(TestCase):
    def test_record(self):
        cert = Certificate.record("analyze", {"epsilon_exact": "21/32"}, True, kind="randomization",
                                  params={"m": 1, "n": 2, "t": 2}, epsilon="21/32", bound="2")
        cert.refresh_from_db()
        self.assertEqual(cert.schema, "qsrlab/1")
        self.assertEqual(cert.payload, {"epsilon_exact": "21/32"})
        self.assertEqual(cert.params["t"], 2)
        self.assertIn("analyze randomization [holds]", str(cert))

    def test_newest_first(self):
        first = Certificate.record("sweep", {"rows": []}, True)
        second = Certificate.record("verify", {"checks": []}, False, kind="acceptance")
        self.assertEqual(list(Certificate.objects.all()), [second, first])
        self.assertIn("[FAILS]", str(second))

    def test_payload_must_be_json_clean(self):
        with self.assertRaises(ValueError):
            Certificate.record("analyze", {"rhs": float("nan")}, True)
        self.assertFalse(Certificate.objects.exists())


class SettingsCheckTests(SimpleTestCase):
    def ids(self):
        return [message.id for message in check_qsrlab_settings(None)]

    def test_defaults_pass(self):
        self.assertEqual(self.ids(), [])

    @override_settings(QSRLAB={"MAX_REGISTER_BITS": 0})
    def test_positive_ints(self):
        self.assertEqual(self.ids(), ["qsr.E001"])

    @override_settings(QSRLAB={"MAX_KEY_BITS": 30})
    def test_word_limit(self):
        self.assertEqual(self.ids(), ["qsr.E002"])

    @override_settings(QSRLAB={"MAX_PAULI_QUBITS": 4})
    def test_pauli_qubits(self):
        self.assertEqual(self.ids(), ["qsr.E003"])

    @override_settings(QSRLAB={"DEFAULT_SEED": -1})
    def test_seed(self):
        self.assertEqual(self.ids(), ["qsr.E004"])

    @override_settings(QSRLAB={"DEFAULT_GRID": "m=1"})
    def test_default_grid(self):
        self.assertEqual(self.ids(), ["qsr.E005"])

    @override_settings(QSRLAB={"MAX_QUBITS": 2})
    def test_unknown_setting(self):
        self.assertEqual(self.ids(), ["qsr.W001"])

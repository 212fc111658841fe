import json
import tempfile
from io import StringIO
from pathlib import Path

from django.core.management import call_command
from django.core.management.base import CommandError
from django.test import SimpleTestCase

from services.mandelstam_service import hadamard, psi_sample
from services.report_service import worked_point_36
from services.serialization import encode_matrix, encode_tensor
from services.tropical_service import positive_family_exponents, vandermonde_family_valuation


class CommandTestCase(SimpleTestCase):

    def call(self, name, **options):
        out = StringIO()
        call_command(name, stdout=out, stderr=StringIO(), **options)
        return out.getvalue()

    def call_json(self, name, **options):
        return json.loads(self.call(name, **options))

    def assertExitCode(self, code, name, **options):
        with self.assertRaises(CommandError) as raised:
            self.call(name, **options)
        self.assertEqual(raised.exception.returncode, code)
        return raised.exception


class PosetCommandTests(CommandTestCase):

    def test_bidegree(self):
        payload = self.call_json('poset', k=2, n=6, r=0, emit='bidegree')
        self.assertEqual([term['c'] for term in payload['bidegree']], ['28', '70', '90', '70', '28'])
        first, last = payload['bidegree'][0], payload['bidegree'][-1]
        self.assertEqual(set(first), {'s', 't', 'c'})
        self.assertEqual((first['s'], first['t']), (last['t'], last['s']))
        self.assertEqual(payload['total_chains'], '286')
        self.assertNotIn('elements', payload)

    def test_full_object_by_default(self):
        payload = self.call_json('poset', k=2, n=5, r=0)
        self.assertTrue({'elements', 'incomparable', 'covers', 'bidegree', 'total_chains'} <= set(payload))
        self.assertEqual(len(payload['elements']), 20)
        sizes = {kind: len(pairs) for kind, pairs in payload['incomparable'].items()}
        self.assertEqual(sizes, {'aa': 5, 'ss': 5, 'mixed': 25})
        self.assertEqual(payload['summary']['incomparable'], {'aa': 5, 'ss': 5, 'mixed': 25})
        self.assertEqual(sum(int(term['c']) for term in payload['bidegree']), int(payload['total_chains']))

    def test_single_part(self):
        payload = self.call_json('poset', k=2, n=5, r=0, emit='covers')
        self.assertEqual(set(payload), {'k', 'n', 'r', 'covers'})
        self.assertTrue(all(len(cover) == 2 for cover in payload['covers']))

    def test_text_format(self):
        text = self.call('poset', k=2, n=5, r=0, emit='bidegree', format='text')
        self.assertIn('total_chains: ', text)

    def test_invalid_parameters_exit_2(self):
        self.assertExitCode(2, 'poset', k=9, n=3, r=0)


class IdealCommandTests(CommandTestCase):

    def test_all_families_by_default(self):
        payload = self.call_json('ideal', k=2, n=5, r=0)
        self.assertEqual(payload['counts'], {'aa': 5, 'ss': 5, 'mixed': 25, 'total': 35})
        self.assertEqual(len(payload['plucker']), 10)
        self.assertEqual(len(payload['mixed']), 25)
        self.assertEqual(len(payload['pq']), 25)
        self.assertEqual(len(payload['toric']), 35)
        self.assertTrue(all(isinstance(text, str) for text in payload['plucker'] + payload['mixed']))

    def test_counts(self):
        payload = self.call_json('ideal', k=3, n=6, r=1, family='mixed')
        self.assertEqual(payload['counts'], {'aa': 35, 'ss': 35, 'mixed': 36, 'total': 106})
        self.assertEqual(len(payload['mixed']), 36)
        self.assertNotIn('plucker', payload)

    def test_invalid_parameters_exit_2(self):
        error = self.assertExitCode(2, 'ideal', k=9, n=3, r=0)
        self.assertIn('k=9', str(error))

    def test_plucker_family_with_verify(self):
        payload = self.call_json('ideal', k=2, n=4, r=0, family='plucker', verify=True, samples=3)
        self.assertTrue(payload['verified'])
        angle, square = payload['plucker']
        self.assertIn('<', angle)
        self.assertNotIn('[', angle)
        self.assertIn('[', square)
        self.assertNotIn('<', square)
        self.assertEqual(set(payload), {'k', 'n', 'r', 'counts', 'verified', 'plucker'})

    def test_mixed_polynomials_pair_both_kinds(self):
        payload = self.call_json('ideal', k=2, n=4, r=0, family='mixed')
        self.assertEqual(len(payload['mixed']), 16)
        self.assertTrue(all('<' in text and '[' in text for text in payload['mixed']))

    def test_pq_outside_the_poset_range(self):
        payload = self.call_json('ideal', k=4, n=5, r=1, family='pq')
        self.assertEqual(len(payload['pq']), 100)
        self.assertNotIn('counts', payload)

    def test_output_file(self):
        with tempfile.TemporaryDirectory() as directory:
            path = Path(directory) / 'toric.json'
            message = self.call('ideal', k=2, n=5, r=0, family='toric', out=str(path))
            self.assertIn(str(path), message)
            self.assertEqual(len(json.loads(path.read_text())['toric']), 35)


class MandelstamCommandTests(CommandTestCase):

    def test_dims(self):
        payload = self.call_json('mandelstam', k=3, n=6, r=1, emit='dims')
        self.assertEqual(payload['dims'], {'SH': 14, 'M': 9, 'ambient': 13})

    def test_positive_samples(self):
        payload = self.call_json('mandelstam', k=2, n=5, positive=True, sample=2)
        self.assertEqual(len(payload['samples']), 2)
        self.assertTrue(all(sample['positive_signs'] for sample in payload['samples']))

    def test_check_membership(self):
        s = hadamard(psi_sample(2, 6, 0, seed=1))
        values = encode_tensor(s)
        with tempfile.TemporaryDirectory() as directory:
            good = Path(directory) / 'good.json'
            good.write_text(json.dumps({'mandelstam': values}))
            values['s[1,2]'] = '12345'
            bad = Path(directory) / 'bad.json'
            bad.write_text(json.dumps(values))
            self.assertTrue(self.call_json('mandelstam', k=2, n=6, r=0, check=str(good))['membership']['member'])
            self.assertFalse(self.call_json('mandelstam', k=2, n=6, r=0, check=str(bad))['membership']['member'])

    def test_malformed_file_exit_2(self):
        with tempfile.TemporaryDirectory() as directory:
            path = Path(directory) / 'broken.json'
            path.write_text('{"s[1,2]": ')
            self.assertExitCode(2, 'mandelstam', k=2, n=6, r=0, check=str(path))


class TropCommandTests(CommandTestCase):

    def test_circuits(self):
        payload = self.call_json('trop', k=2, n=5, circuits=True)
        self.assertEqual(payload['circuits']['count'], 30)

    def test_samples_carry_basis_check(self):
        payload = self.call_json('trop', k=2, n=5, r=0, samples=3, seed=4)
        self.assertEqual([sample['seed'] for sample in payload['samples']], [4, 5, 6])
        self.assertTrue(all(sample['basis_check']['passed'] for sample in payload['samples']))

    def test_positive_families(self):
        payload = self.call_json('trop', k=2, n=5, positive=2)
        self.assertEqual(len(payload['equations']), 15)
        self.assertTrue(all(sample['positive_check']['passed'] for sample in payload['samples']))

    def test_circuits_need_2_5(self):
        self.assertExitCode(2, 'trop', k=2, n=6, circuits=True)

    def test_check_m250_accepts_a_positive_valuation(self):
        v = vandermonde_family_valuation(2, 5, positive_family_exponents(5, 1))
        with tempfile.TemporaryDirectory() as directory:
            path = Path(directory) / 'vector.json'
            path.write_text(json.dumps(v.to_json()))
            report = self.call_json('trop', k=2, n=5, check_m250=str(path))['check_m250']
        self.assertTrue(report['basis_check']['passed'])
        self.assertTrue(report['positive_check']['passed'])
        self.assertEqual(report['vector'], v.to_json())

    def test_check_m250_failure_exit_3(self):
        values = {f's[{i},{j}]': '0' for i in range(1, 6) for j in range(i + 1, 6)}
        values['s[1,2]'] = '-1/2'
        with tempfile.TemporaryDirectory() as directory:
            path = Path(directory) / 'vector.json'
            path.write_text(json.dumps({'tropical': values}))
            error = self.assertExitCode(3, 'trop', k=2, n=5, check_m250=str(path))
        self.assertIn('basis_check', str(error))

    def test_check_m250_malformed_vector_exit_2(self):
        with tempfile.TemporaryDirectory() as directory:
            path = Path(directory) / 'vector.json'
            path.write_text(json.dumps({'s[1,2]': '0', 's[1,3]': 'one'}))
            self.assertExitCode(2, 'trop', k=2, n=5, check_m250=str(path))
            path.write_text(json.dumps({'s[1,2]': '0', 's[1,3]': '1'}))
            self.assertExitCode(2, 'trop', k=2, n=5, check_m250=str(path))


class ScatterCommandTests(CommandTestCase):

    def test_tautological_solutions_from_file(self):
        point = worked_point_36()
        with tempfile.TemporaryDirectory() as directory:
            path = Path(directory) / 'worked.json'
            path.write_text(json.dumps({
                'lambda': encode_matrix(point.lambda_),
                'lambda_tilde': encode_matrix(point.lambda_tilde),
            }))
            payload = self.call_json('scatter', k=3, n=6, kinematics=str(path), tautological=True)
        self.assertEqual(payload['tautological']['W'], {'x': '6/11', 'y': '87/172', 'z': '-1/4', 'w': '-42/43'})
        self.assertEqual(len(payload['tautological']), 4)

    def test_solve_and_classify(self):
        payload = self.call_json('scatter', k=2, n=5, seed=3, solve=True, classify=True)
        self.assertEqual(payload['solve']['found'], 2)
        self.assertEqual(payload['sectors']['observed'], payload['sectors']['expected'])

    def test_classify_needs_solve(self):
        self.assertExitCode(2, 'scatter', k=2, n=5, classify=True)

    def test_unsupported_shape(self):
        self.assertExitCode(2, 'scatter', k=3, n=7)

    def test_kinematics_off_the_variety(self):
        with tempfile.TemporaryDirectory() as directory:
            path = Path(directory) / 'generic.json'
            path.write_text(json.dumps({
                'lambda': [[1, 0, 1, 1, 2], [0, 1, 1, 2, 1]],
                'lambda_tilde': [[1, 0, 0, 1, 1], [0, 1, 0, 0, 1]],
            }))
            self.assertExitCode(2, 'scatter', k=2, n=5, kinematics=str(path))


class PaperReportCommandTests(CommandTestCase):

    def test_selected_checks_pass(self):
        payload = self.call_json('paper_report', only=['sh_2_5_0', 'eulerian'], threads=2)
        self.assertEqual(
            sorted(payload),
            ['eulerian_d_recursion', 'eulerian_factorial_sums', 'sh_2_5_0_bidegree', 'sh_2_5_0_generators'],
        )
        self.assertTrue(all(result['passed'] for result in payload.values()))
        self.assertEqual(payload['sh_2_5_0_generators']['computed'], 35)

    def test_unknown_prefix_exit_2(self):
        self.assertExitCode(2, 'paper_report', only=['no_such_check'])

    def test_failed_check_exit_3(self):
        from services import report_service

        report_service.CHECKS['zz_always_fails'] = lambda: (1, 2)
        try:
            self.assertExitCode(3, 'paper_report', only=['zz_always_fails'])
        finally:
            del report_service.CHECKS['zz_always_fails']

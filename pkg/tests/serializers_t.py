import io
import json

import numpy as np
from flask import Flask

import consts
import serializers
from corpus import corpus_statistics
from evaluation import Prediction, aggregate_runs
from tests.base import TestCaseBase, make_example


class TestSerializer(TestCaseBase):

    def setUp(self):
        super(TestSerializer, self).setUp()
        self.app = Flask(__name__)

    def test_base(self):
        with self.app.app_context():
            data = serializers.BaseSerializer({'data': 'test'}).calc()
            self.assertEqual(data['data'], 'test')
            self.assertEqual(json.loads(serializers.BaseSerializer({'text': 'crème brûlée'}).to_json()),
                             {'text': 'crème brûlée'})
            self.assertIn('brûlée', serializers.BaseSerializer('brûlée').to_json())

    def test_example(self):
        example = make_example('7', 'great food awful service', [('food', consts.POS), ('service', consts.CONFLICT)])
        with self.app.app_context():
            data = serializers.ExampleSerializer(example).calc()
        self.assertEqual(data, {
            'id': '7',
            'text': 'great food awful service',
            'tokens': ['great', 'food', 'awful', 'service'],
            'labels': [['food', 'Pos'], ['service', 'Conflict']],
        })

    def test_prediction(self):
        prediction = Prediction('7', 'food', ['great', 'food'], consts.POS, np.array([0.1, 0.2, 0.7]),
                                np.array([0.75, 0.25]), 0.9,
                                word_distributions=np.array([[0.1, 0.1, 0.8], [0.6, 0.3, 0.1]]))
        with self.app.app_context():
            data = serializers.PredictionSerializer(prediction).calc()
        self.assertCompareDicts(data, {
            'sentence_id': '7',
            'category': 'food',
            'gold': 'Pos',
            'predicted': 'Pos',
            'distribution': [0.1, 0.2, 0.7],
            'detection': 0.9,
            'attention': [0.75, 0.25],
            'word_predictions': ['Pos', 'Neg'],
        })
        # unlabelled pair without word sentiments
        prediction = Prediction('8', 'price', ['ok'], None, [0.2, 0.5, 0.3], [1.0], 0.1)
        with self.app.app_context():
            data = serializers.PredictionSerializer(prediction).calc()
        self.assertIsNone(data['gold'])
        self.assertEqual(data['predicted'], 'Neu')
        self.assertNotIn('word_predictions', data)

    def test_log_record(self):
        record = {'epoch': 1, 'stage': 'joint', 'train_loss': 0.12345678, 'dev': {'accuracy': 0.6666666}}
        with self.app.app_context():
            data = serializers.LogRecordSerializer(record).calc()
        self.assertEqual(data, {'epoch': 1, 'stage': 'joint', 'train_loss': 0.123457, 'dev': {'accuracy': 0.666667}})

    def test_report(self):
        report = aggregate_runs([
            {'acsa_accuracy': 0.5, 'kid_f1': 0.5, 'per_category': {'food': 0.5}},
            {'acsa_accuracy': 1.0, 'per_category': {'food': 1.0, 'price': 0.5}},
        ])
        with self.app.app_context():
            data = serializers.ReportSerializer(report).calc()
            lines = serializers.ReportTableSerializer(report).calc()
        self.assertEqual(data, {
            'n_runs': 2,
            'metrics': {
                'acsa_accuracy': {'mean': 0.75, 'std': 0.25},
                'kid_f1': {'mean': 0.5, 'std': 0.0},
            },
            'per_category': {
                'food': {'mean': 0.75, 'std': 0.25},
                'price': {'mean': 0.5, 'std': 0.0},
            },
        })
        self.assertEqual(lines, [
            'runs: 2',
            'ACSA accuracy   75.000±(25.000)',
            'KID F1          50.000±(0.000)',
            'KISC accuracy   n/a',
            'per category:',
            '  food          75.000±(25.000)',
            '  price         50.000±(0.000)',
        ])

    def test_report_kisc_rows(self):
        womil = aggregate_runs([{'acsa_accuracy': 0.8, 'kid_f1': 0.6, 'kisc_accuracy': None, 'per_category': {}}])
        plain = aggregate_runs([{'acsa_accuracy': 0.8, 'per_category': {}}])
        with self.app.app_context():
            self.assertEqual(serializers.ReportTableSerializer(womil).calc(), [
                'runs: 1',
                'ACSA accuracy   80.000±(0.000)',
                'KID F1          60.000±(0.000)',
                'KISC accuracy   n/a',
            ])
            self.assertEqual(serializers.ReportTableSerializer(plain).calc(), [
                'runs: 1',
                'ACSA accuracy   80.000±(0.000)',
            ])
            self.assertNotIn('kisc_accuracy', serializers.ReportSerializer(womil).calc()['metrics'])

    def test_statistics(self):
        stats = corpus_statistics([
            make_example('1', 'a', [('food', consts.POS), ('price', consts.NEG)]),
            make_example('2', 'b', [('food', consts.NEU)]),
        ])
        with self.app.app_context():
            line = serializers.StatisticsSerializer(stats).calc()
        self.assertEqual(line, 'sentences=2 multi=1 Pos=1 Neg=1 Neu=1 | food=2 price=1')

    def test_sweep_row(self):
        row = {'variant': 'standard', 'layers': 2, 'mean': 0.8, 'std': 0.01}
        with self.app.app_context():
            self.assertEqual(serializers.SweepRowSerializer(row).calc(), 'standard    2  80.000±(1.000)')

    def test_send(self):
        stream = io.StringIO()
        with self.app.app_context():
            serializers.send_data(stream, {'a': 1})
            serializers.send_lines(stream, [{'b': 2}, {'c': 'é'}])
        lines = stream.getvalue().splitlines()
        self.assertEqual([json.loads(line) for line in lines], [{'a': 1}, {'b': 2}, {'c': 'é'}])
        self.assertIn('é', lines[2])

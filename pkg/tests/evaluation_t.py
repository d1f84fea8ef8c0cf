import numpy as np
from hypothesis import given, settings, strategies as st

import consts
import errors
import evaluation
from corpus import KeyInstanceAnnotation, build_vocabulary
from evaluation import Prediction, acsa_accuracy, aggregate_runs, extract_key_instances, kid_f1, kisc_accuracy
from tests.base import TestCaseBase, make_example, small_network


positions = st.sets(st.integers(min_value=0, max_value=9), max_size=6)


def prediction(sentence_id, category, gold, distribution, attention, words=None):
    return Prediction(sentence_id, category, ['w'] * len(attention), gold, distribution, attention, 0.5, words)


class TestAccuracy(TestCaseBase):

    def test_counting(self):
        self.assertEqual(acsa_accuracy([0, 1, 2], [0, 1, 2]), 1.0)
        self.assertEqual(acsa_accuracy([0, 0, 0, 0], [0, 1, 2, 1]), 0.25)
        self.assertEqual(acsa_accuracy([], []), 0.0)
        with self.assertRaises(errors.ContractError):
            acsa_accuracy([0], [0, 1])

    @settings(max_examples=200, deadline=None)
    @given(st.lists(st.tuples(st.integers(0, 2), st.integers(0, 2)), min_size=1, max_size=40),
           st.randoms(use_true_random=False))
    def test_confusion_matrix_trace(self, pairs, random):
        predicted, gold = [p for p, _ in pairs], [g for _, g in pairs]
        confusion = np.zeros((3, 3))
        for p, g in pairs:
            confusion[g, p] += 1
        self.assertAlmostEqual(acsa_accuracy(predicted, gold), np.trace(confusion) / confusion.sum())
        random.shuffle(pairs)
        self.assertAlmostEqual(acsa_accuracy([p for p, _ in pairs], [g for _, g in pairs]),
                               np.trace(confusion) / confusion.sum())

    def test_per_category(self):
        result = evaluation.per_category_accuracy([0, 1, 2, 2], [0, 0, 2, 1], ['food', 'food', 'price', 'price'])
        self.assertEqual(result, {'food': 0.5, 'price': 0.5})


class TestKeyInstances(TestCaseBase):

    def test_threshold(self):
        self.assertEqual(extract_key_instances(np.full(20, 0.05)), set())
        self.assertEqual(extract_key_instances([0.0, 0.0, 1.0, 0.0]), {2})
        self.assertEqual(extract_key_instances([0.1, 0.9, 0.0]), {0, 1})

    @settings(max_examples=200, deadline=None)
    @given(st.lists(st.floats(min_value=0, max_value=1), min_size=1, max_size=12),
           st.floats(min_value=0, max_value=1), st.floats(min_value=0, max_value=1))
    def test_threshold_monotonic(self, alpha, low, high):
        low, high = sorted([low, high])
        self.assertLessEqual(extract_key_instances(alpha, high), extract_key_instances(alpha, low))

    def test_kid_f1(self):
        self.assertEqual(kid_f1([{0, 1}], [{1, 2}]), 0.5)
        self.assertEqual(kid_f1([{3}], [{3}]), 1.0)
        self.assertEqual(kid_f1([set()], [{3}]), 0.0)
        self.assertEqual(kid_f1([{1}, {2}], [{1}, set()]), 1.0)
        self.assertIsNone(kid_f1([{1}], [set()]))
        with self.assertRaises(errors.ConfigError):
            kid_f1([{1}], [{1}], average='weighted')

    def test_micro_and_macro(self):
        predicted, gold = [{0}, {0, 1, 2, 3}], [{0}, {4}]
        self.assertAlmostEqual(kid_f1(predicted, gold, consts.AVERAGE_MICRO), 2 * 0.2 * 0.5 / 0.7)
        self.assertAlmostEqual(kid_f1(predicted, gold, consts.AVERAGE_MACRO), 0.5)

    @settings(max_examples=300, deadline=None)
    @given(st.lists(st.tuples(positions, positions), min_size=1, max_size=10))
    def test_micro_flat_count(self, pairs):
        pairs = [(p, g) for p, g in pairs]
        scored = [(p, g) for p, g in pairs if g]
        result = kid_f1([p for p, _ in pairs], [g for _, g in pairs])
        if not scored:
            self.assertIsNone(result)
            return
        tp = sum(len(p & g) for p, g in scored)
        n_pred = sum(len(p) for p, _ in scored)
        n_gold = sum(len(g) for _, g in scored)
        precision = tp / n_pred if n_pred else 0.0
        recall = tp / n_gold
        expected = 2 * precision * recall / (precision + recall) if tp else 0.0
        self.assertAlmostEqual(result, expected)
        self.assertEqual(result == 1.0, all(p == g for p, g in scored))

    def test_kisc(self):
        self.assertEqual(kisc_accuracy([[2, 0, 1]], [{0: 2}]), 1.0)
        self.assertEqual(kisc_accuracy([[2, 0, 1]], [{0: 2, 1: 1}]), 0.5)
        self.assertIsNone(kisc_accuracy([None], [{0: 2}]))
        self.assertIsNone(kisc_accuracy([[1]], [{}]))

    @settings(max_examples=200, deadline=None)
    @given(st.lists(st.lists(st.integers(0, 2), min_size=5, max_size=5), min_size=1, max_size=6),
           st.data())
    def test_kisc_flat_count(self, words, data):
        gold = [data.draw(st.dictionaries(st.integers(0, 4), st.integers(0, 2), max_size=3)) for _ in words]
        flat = [(w[i], polarity) for w, g in zip(words, gold) for i, polarity in g.items()]
        result = kisc_accuracy(words, gold)
        if not flat:
            self.assertIsNone(result)
        else:
            self.assertAlmostEqual(result, sum(p == g for p, g in flat) / float(len(flat)))


class TestPrediction(TestCaseBase):

    def test_properties(self):
        words = np.array([[0.1, 0.2, 0.7], [0.8, 0.1, 0.1]])
        p = prediction('s1', 'food', consts.POS, [0.1, 0.2, 0.7], [0.05, 0.95], words)
        self.assertEqual(p.key, ('s1', 'food'))
        self.assertEqual(p.predicted, consts.POS)
        self.assertEqual(p.word_predictions, [2, 0])
        self.assertEqual(p.key_instances(), {1})
        self.assertIsNone(prediction('s1', 'food', 0, [1, 0, 0], [1.0]).word_predictions)

    def test_split_result(self):
        result = evaluation.SplitResult([prediction('a', 'food', 0, [0.9, 0.05, 0.05], [1.0]),
                                         prediction('b', 'food', None, [0.9, 0.05, 0.05], [1.0])],
                                        acd_loss=0.5, acsa_loss=0.25, items=2)
        self.assertEqual(result.accuracy, 1.0)
        self.assertAlmostEqual(result.loss(2.0), 1.0)


class TestEvaluate(TestCaseBase):

    def setUp(self):
        super(TestEvaluate, self).setUp()
        words = np.array([[0.1, 0.1, 0.8], [0.6, 0.2, 0.2], [0.3, 0.4, 0.3]])
        self.predictions = [
            prediction('s1', 'food', consts.POS, [0.1, 0.1, 0.8], [0.8, 0.15, 0.05], words),
            prediction('s1', 'price', consts.NEG, [0.2, 0.7, 0.1], [0.05, 0.9, 0.05], words),
        ]

    def test_without_annotations(self):
        result = evaluation.evaluate(self.predictions)
        self.assertEqual(result, {'acsa_accuracy': 0.5, 'per_category': {'food': 1.0, 'price': 0.0}})

    def test_with_annotations(self):
        annotations = [KeyInstanceAnnotation('s1', 'food', {0: consts.POS}),
                       KeyInstanceAnnotation('s1', 'price', {1: consts.NEG, 2: consts.POS}),
                       KeyInstanceAnnotation('s9', 'food', {0: consts.POS})]
        result = evaluation.evaluate(self.predictions, annotations)
        self.assertAlmostEqual(result['kid_f1'], 2 / 3.0)
        self.assertAlmostEqual(result['kisc_accuracy'], 2 / 3.0)

    def test_kisc_ignores_attention(self):
        annotations = [KeyInstanceAnnotation('s1', 'food', {0: consts.POS})]
        before = evaluation.evaluate(self.predictions, annotations)['kisc_accuracy']
        self.predictions[0].attention = np.array([0.0, 0.0, 1.0])
        self.assertEqual(evaluation.evaluate(self.predictions, annotations)['kisc_accuracy'], before)


class TestAggregate(TestCaseBase):

    def test_single_run(self):
        report = aggregate_runs([{'acsa_accuracy': 0.8, 'per_category': {'food': 0.5}}])
        self.assertEqual(report.metrics['acsa_accuracy'], (0.8, 0.0))
        self.assertEqual(report.n_runs, 1)
        self.assertFalse(report.has('kid_f1'))
        self.assertIsNone(report.kid_f1)

    def test_mean_std(self):
        runs = [{'acsa_accuracy': 0.8, 'kid_f1': None, 'per_category': {'food': 0.5}},
                {'acsa_accuracy': 0.9, 'kid_f1': 0.4, 'per_category': {'food': 0.7, 'price': 1.0}}]
        report = aggregate_runs(runs)
        self.assertAlmostEqual(report.acsa_accuracy, 0.85)
        self.assertAlmostEqual(report.std('acsa_accuracy'), 0.05)
        self.assertEqual(report.metrics['kid_f1'], (0.4, 0.0))
        self.assertAlmostEqual(report.per_category['food'][0], 0.6)
        self.assertEqual(report.per_category['price'], (1.0, 0.0))
        with self.assertRaises(errors.ContractError):
            aggregate_runs([])

    @settings(max_examples=100, deadline=None)
    @given(st.lists(st.floats(min_value=0, max_value=1), min_size=1, max_size=8))
    def test_two_pass_std(self, values):
        report = aggregate_runs([{'acsa_accuracy': v, 'per_category': {}} for v in values])
        mean = sum(values) / len(values)
        std = (sum((v - mean) ** 2 for v in values) / len(values)) ** 0.5
        self.assertAlmostEqual(report.acsa_accuracy, mean)
        self.assertAlmostEqual(report.std('acsa_accuracy'), std)


class TestRunSplit(TestCaseBase):

    def setUp(self):
        super(TestRunSplit, self).setUp()
        self.examples = [make_example('s1', 'the pizza was great', [('food', consts.POS)]),
                         make_example('s2', 'the bill was awful but the waiter was great',
                                      [('price', consts.NEG), ('service', consts.POS)])]
        self.vocabulary = build_vocabulary(self.examples)
        self.network = small_network(vocab_size=len(self.vocabulary))

    def test_predictions(self):
        result = evaluation.run_split(self.network, self.examples, self.vocabulary, batch_size=1)
        self.assertEqual([p.key for p in result.predictions],
                         [('s1', 'food'), ('s2', 'price'), ('s2', 'service')])
        self.assertEqual(result.items, 2)
        self.assertGreater(result.acd_loss, 0.0)
        self.assertEqual(len(result.predictions[1].attention), 9)
        self.assertEqual(len(result.predictions[1].word_predictions), 9)
        self.assertAlmostEqual(result.predictions[0].distribution.sum(), 1.0, delta=1e-9)

    def test_deterministic(self):
        first = evaluation.predict(self.network, self.examples, self.vocabulary)
        second = evaluation.predict(self.network, self.examples, self.vocabulary, batch_size=1)
        for a, b in zip(first, second):
            self.assertArrayAlmostEqual(a.distribution, b.distribution)

    def test_queried_categories(self):
        predictions = evaluation.predict(self.network, self.examples[:1], self.vocabulary,
                                         queried=['price', 'service'])
        self.assertEqual([p.category for p in predictions], ['price', 'service'])
        self.assertIsNone(predictions[0].gold)

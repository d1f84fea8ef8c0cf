import os

import numpy as np

import consts
import export
from corpus import build_vocabulary
from evaluation import Prediction
from tests.base import TestCaseTemp, make_example, small_network


def make_predictions(words=True):
    tokens = ['great', 'pizza', 'bad', 'bill']
    distributions = None
    if words:
        distributions = np.array([[0.1, 0.1, 0.8], [0.2, 0.6, 0.2], [0.7, 0.2, 0.1], [0.5, 0.25, 0.25]])
    return [
        Prediction('s 1', 'food', tokens, consts.POS, [0.1, 0.2, 0.7], [0.5, 0.5, 0.0, 0.0], 0.9, distributions),
        Prediction('s 1', 'price', tokens, None, [0.6, 0.3, 0.1], [0.0, 0.0, 0.25, 0.75], 0.8, distributions),
    ]


class TestExport(TestCaseTemp):

    def test_safe_name(self):
        self.assertEqual(export.safe_name('1004293:0'), '1004293_0')
        self.assertEqual(export.safe_name('a/b c.d-e'), 'a_b_c.d-e')

    def test_group_by_sentence(self):
        first, second = make_predictions()
        third = Prediction('s 2', 'food', ['ok'], None, [0.3, 0.4, 0.3], [1.0], 0.5)
        groups = export.group_by_sentence([first, second, third])
        self.assertEqual([(key, len(group)) for key, group in groups], [('s 1', 2), ('s 2', 1)])
        self.assertEqual(export.group_by_sentence([]), [])

    def test_attention_rows(self):
        rows = export.attention_rows(make_predictions())
        self.assertEqual([row[0] for row in rows], ['token', 'alpha:food', 'alpha:price', 'Neg', 'Neu', 'Pos'])
        self.assertEqual(rows[0], ['token', 'great', 'pizza', 'bad', 'bill'])
        self.assertEqual([float(x) for x in rows[2][1:]], [0.0, 0.0, 0.25, 0.75])
        self.assertEqual([float(x) for x in rows[5][1:]], [0.8, 0.2, 0.1, 0.25])
        # variants without word sentiments only carry the attention rows
        rows = export.attention_rows(make_predictions(words=False))
        self.assertEqual(len(rows), 3)

    def test_tsv(self):
        predictions = make_predictions()
        path = export.write_tsv(self.path('s_1.tsv'), predictions)
        rows = export.read_tsv(path)
        self.assertEqual(rows, export.attention_rows(predictions))
        for row in rows[1:]:
            self.assertEqual(len(row), 5)

    def test_render(self):
        html = export.render_attention(make_predictions(), text='Great pizza, bad <bill>')
        self.assertIn('<title>s 1</title>', html)
        self.assertIn('Great pizza, bad &lt;bill&gt;', html)
        self.assertIn('Pos (gold Pos)', html)
        self.assertIn('rgba(220, 50, 47, 0.75)', html)
        self.assertIn('Word sentiment', html)
        self.assertNotIn('Word sentiment', export.render_attention(make_predictions(words=False)))
        self.assertIn('<p>great pizza bad bill</p>', export.render_attention(make_predictions(words=False)))

    def test_html_context(self):
        context = export.html_context(make_predictions())
        self.assertEqual([row['name'] for row in context['categories']], ['food', 'price'])
        self.assertEqual(context['categories'][1]['predicted'], 'Neg')
        self.assertIsNone(context['categories'][1]['gold'])
        self.assertEqual(context['categories'][0]['distribution'], '0.10 0.20 0.70')
        self.assertEqual([row['name'] for row in context['words']], ['Neg', 'Neu', 'Pos'])

    def test_export_attention(self):
        examples = [
            make_example('10', 'the pizza was great', [('food', consts.POS)]),
            make_example('11:2', 'the bill was awful', [('price', consts.NEG)]),
        ]
        vocabulary = build_vocabulary(examples)
        network = small_network(vocab_size=len(vocabulary), layers=1)
        out_dir = self.path('attention')
        os.makedirs(out_dir)
        paths = export.export_attention(network, examples, vocabulary, out_dir, batch_size=1)
        self.assertEqual(sorted(os.listdir(out_dir)), ['10.html', '10.tsv', '11_2.html', '11_2.tsv'])
        self.assertEqual(len(paths), 4)
        rows = export.read_tsv(os.path.join(out_dir, '11_2.tsv'))
        self.assertEqual(rows[0], ['token', 'the', 'bill', 'was', 'awful'])
        # every category is queried, so every attention row is present and sums to one
        self.assertEqual([row[0] for row in rows[1:4]], ['alpha:food', 'alpha:price', 'alpha:service'])
        for row in rows[1:4]:
            self.assertAlmostEqual(sum(float(x) for x in row[1:]), 1.0)
        with open(os.path.join(out_dir, '10.html'), encoding='utf-8') as f:
            self.assertIn('the pizza was great', f.read())

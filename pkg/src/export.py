import os
import re

from flask import render_template

import config
import consts
import evaluation
from loggers import getLogger


logger = getLogger(__name__)

WORD_COLORS = {
    consts.NEG: '220, 50, 47',
    consts.NEU: '147, 161, 161',
    consts.POS: '38, 139, 210',
}


def safe_name(sentence_id):
    return re.sub(r'[^A-Za-z0-9_.-]', '_', sentence_id)


def group_by_sentence(predictions):
    groups = []
    for prediction in predictions:
        if groups and groups[-1][0] == prediction.sentence_id:
            groups[-1][1].append(prediction)
        else:
            groups.append((prediction.sentence_id, [prediction]))
    return groups


def attention_rows(predictions):
    """Numeric rows of one sentence: tokens, one alpha row per category, then
    one row per polarity with the word sentiment distributions."""
    tokens = predictions[0].tokens
    rows = [['token'] + list(tokens)]
    for prediction in predictions:
        rows.append(['alpha:{}'.format(prediction.category)] + [repr(float(x)) for x in prediction.attention])
    words = predictions[0].word_distributions
    if words is not None:
        for polarity, name in sorted(consts.POLARITIES.items()):
            rows.append([name] + [repr(float(x)) for x in words[:, polarity]])
    return rows


def write_tsv(path, predictions):
    with open(path, 'w', encoding='utf-8') as f:
        for row in attention_rows(predictions):
            f.write('\t'.join(row))
            f.write('\n')
    return path


def read_tsv(path):
    with open(path, encoding='utf-8') as f:
        return [line.rstrip('\n').split('\t') for line in f if line.strip()]


def _label(value):
    return '{:.2f}'.format(value)


def html_context(predictions, text=None):
    tokens = predictions[0].tokens
    categories = []
    for prediction in predictions:
        categories.append({
            'name': prediction.category,
            'predicted': consts.POLARITIES[prediction.predicted],
            'gold': consts.POLARITIES.get(prediction.gold),
            'distribution': ' '.join(_label(x) for x in prediction.distribution),
            'cells': [{'token': token, 'alpha': float(alpha), 'label': _label(alpha)}
                      for token, alpha in zip(tokens, prediction.attention)],
        })
    words = None
    if predictions[0].word_distributions is not None:
        distributions = predictions[0].word_distributions
        words = [{
            'name': name,
            'color': WORD_COLORS[polarity],
            'cells': [{'alpha': float(x), 'label': _label(x)} for x in distributions[:, polarity]],
        } for polarity, name in sorted(consts.POLARITIES.items())]
    return {
        'sentence_id': predictions[0].sentence_id,
        'text': text if text is not None else ' '.join(tokens),
        'tokens': tokens,
        'categories': categories,
        'words': words,
    }


def render_attention(predictions, text=None):
    from app import app

    with app.app_context():
        return render_template('attention.html', **html_context(predictions, text))


def write_html(path, predictions, text=None):
    with open(path, 'w', encoding='utf-8') as f:
        f.write(render_attention(predictions, text))
    return path


def export_attention(network, examples, vocabulary, out_dir, batch_size=config.BATCH_SIZE):
    """Writes `<sentence>.html` and `<sentence>.tsv` for every example; returns the paths."""
    texts = {example.sentence_id: example.raw_text for example in examples}
    predictions = evaluation.predict(network, examples, vocabulary, batch_size)
    paths = []
    for sentence_id, group in group_by_sentence(predictions):
        base = os.path.join(out_dir, safe_name(sentence_id))
        paths.append(write_tsv(base + '.tsv', group))
        paths.append(write_html(base + '.html', group, texts.get(sentence_id)))
    logger.info('exported attention for %d sentences to %s', len(paths) // 2, out_dir)
    return paths

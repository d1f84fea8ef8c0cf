import numpy as np

import config
import consts
import corpus
import errors
import losses
from loggers import getLogger


logger = getLogger(__name__)


def softmax_rows(x):
    x = np.asarray(x, dtype=np.float64)
    exp = np.exp(x - x.max(axis=-1, keepdims=True))
    return exp / exp.sum(axis=-1, keepdims=True)


class Prediction(object):
    """One (sentence, queried category) pair from an eval-mode forward pass."""

    def __init__(self, sentence_id, category, tokens, gold, distribution, attention, detection,
                 word_distributions=None):
        self.sentence_id = sentence_id
        self.category = category
        self.tokens = tokens
        self.gold = gold
        self.distribution = np.asarray(distribution, dtype=np.float64)
        self.attention = np.asarray(attention, dtype=np.float64)
        self.detection = float(detection)
        self.word_distributions = word_distributions

    @property
    def key(self):
        return self.sentence_id, self.category

    @property
    def predicted(self):
        return int(np.argmax(self.distribution))

    @property
    def word_predictions(self):
        if self.word_distributions is None:
            return None
        return [int(x) for x in np.argmax(self.word_distributions, axis=-1)]

    def key_instances(self, threshold=config.KID_THRESHOLD):
        return extract_key_instances(self.attention, threshold)


class SplitResult(object):

    def __init__(self, predictions, acd_loss=0.0, acsa_loss=0.0, items=0):
        self.predictions = predictions
        self.acd_loss = acd_loss
        self.acsa_loss = acsa_loss
        self.items = items

    @property
    def accuracy(self):
        scored = [p for p in self.predictions if p.gold is not None]
        return acsa_accuracy([p.predicted for p in scored], [p.gold for p in scored])

    def loss(self, beta=config.BETA):
        return self.acd_loss + beta * self.acsa_loss


def collect(out, batch, categories):
    predictions = []
    for row, (example, queried) in enumerate(batch.items):
        n = int(batch.lengths[row])
        words = None
        if out.word_logits is not None:
            words = softmax_rows(out.word_logits.values[row, :n])
        for j in queried:
            predictions.append(Prediction(
                example.sentence_id, categories[j], example.tokens,
                example.polarity(categories[j]),
                out.sentiment.values[row, j],
                out.attention.values[row, j, :n],
                out.detection.values[row, j],
                words,
            ))
    return predictions


def run_split(network, examples, vocabulary, batch_size=config.BATCH_SIZE, mode=consts.MODE_MULTI,
              queried=None):
    """Eval-mode pass over `examples`; losses are per-item means and only
    computed when the gold categories are queried."""
    predictions, acd_total, acsa_total, items = [], 0.0, 0.0, 0
    for batch in corpus.batch(examples, batch_size, mode, None, vocabulary, network.categories, queried):
        out = network.forward(batch.token_ids, batch.lengths)
        if queried is None:
            acd_total += losses.acd_loss(out.detection, batch.acd_targets).item()
            acsa_total += losses.acsa_loss(out.sentiment, batch.sentiment_targets, batch.query_mask).item()
        items += batch.size
        predictions.extend(collect(out, batch, network.categories))
    if not items:
        return SplitResult(predictions)
    return SplitResult(predictions, acd_total / items, acsa_total / items, items)


def predict(network, examples, vocabulary, batch_size=config.BATCH_SIZE, queried=None):
    return run_split(network, examples, vocabulary, batch_size, queried=queried).predictions


def acsa_accuracy(predicted, gold):
    predicted, gold = list(predicted), list(gold)
    if len(predicted) != len(gold):
        raise errors.ContractError('{} predictions for {} gold labels'.format(len(predicted), len(gold)))
    if not gold:
        return 0.0
    return sum(1 for p, g in zip(predicted, gold) if p == g) / float(len(gold))


def per_category_accuracy(predicted, gold, categories):
    groups = {}
    for p, g, category in zip(predicted, gold, categories):
        groups.setdefault(category, ([], []))
        groups[category][0].append(p)
        groups[category][1].append(g)
    return {category: acsa_accuracy(*groups[category]) for category in sorted(groups)}


def extract_key_instances(alpha, threshold=config.KID_THRESHOLD):
    return {int(i) for i in np.nonzero(np.asarray(alpha) >= threshold)[0]}


def kid_f1(predicted_sets, gold_sets, average=config.KID_AVERAGE):
    """Token-level F1 of predicted key instances; pairs with empty gold are skipped.

    Returns None when no pair has gold key instances.
    """
    if average not in (consts.AVERAGE_MICRO, consts.AVERAGE_MACRO):
        raise errors.ConfigError('KID average must be micro or macro, got {}'.format(average))
    pairs = [(set(p), set(g)) for p, g in zip(predicted_sets, gold_sets) if g]
    if not pairs:
        return None
    if average == consts.AVERAGE_MACRO:
        return float(np.mean([_f1(len(p & g), len(p), len(g)) for p, g in pairs]))
    tp = sum(len(p & g) for p, g in pairs)
    return _f1(tp, sum(len(p) for p, _ in pairs), sum(len(g) for _, g in pairs))


def _f1(tp, predicted, gold):
    precision = tp / float(predicted) if predicted else 0.0
    recall = tp / float(gold) if gold else 0.0
    if not precision + recall:
        return 0.0
    return 2.0 * precision * recall / (precision + recall)


def kisc_accuracy(word_predictions, gold_polarities):
    """Accuracy of word argmax at every gold key-instance position.

    Returns None when word predictions are unavailable or there is no position.
    """
    correct = total = 0
    for words, gold in zip(word_predictions, gold_polarities):
        if not gold:
            continue
        if words is None:
            return None
        for position, polarity in gold.items():
            total += 1
            correct += int(words[position] == polarity)
    if not total:
        return None
    return correct / float(total)


def evaluate(predictions, annotations=None, threshold=config.KID_THRESHOLD, average=config.KID_AVERAGE):
    """Metrics of one run as a plain dict; KID/KISC only with annotations."""
    scored = [p for p in predictions if p.gold is not None]
    predicted = [p.predicted for p in scored]
    gold = [p.gold for p in scored]
    result = {
        'acsa_accuracy': acsa_accuracy(predicted, gold),
        'per_category': per_category_accuracy(predicted, gold, [p.category for p in scored]),
    }
    if annotations is not None:
        by_key = {p.key: p for p in predictions}
        matched = [(by_key[a.key], a) for a in annotations if a.key in by_key]
        if len(matched) < len(annotations):
            logger.warning('%d annotations have no prediction', len(annotations) - len(matched))
        result['kid_f1'] = kid_f1([p.key_instances(threshold) for p, _ in matched],
                                  [a.positions for _, a in matched], average)
        result['kisc_accuracy'] = kisc_accuracy([p.word_predictions for p, _ in matched],
                                                [a.polarities for _, a in matched])
    return result


class EvalReport(object):

    METRICS = ('acsa_accuracy', 'kid_f1', 'kisc_accuracy')

    def __init__(self, metrics, per_category, n_runs):
        self.metrics = metrics
        self.per_category = per_category
        self.n_runs = n_runs

    def mean(self, name):
        return self.metrics[name][0] if name in self.metrics else None

    def std(self, name):
        return self.metrics[name][1] if name in self.metrics else None

    @property
    def acsa_accuracy(self):
        return self.mean('acsa_accuracy')

    @property
    def kid_f1(self):
        return self.mean('kid_f1')

    @property
    def kisc_accuracy(self):
        return self.mean('kisc_accuracy')

    def has(self, name):
        return name in self.metrics


def _mean_std(values):
    values = np.asarray(values, dtype=np.float64)
    return float(values.mean()), float(values.std())


def aggregate_runs(reports):
    """Mean and population std of every metric over per-seed `evaluate` results."""
    reports = list(reports)
    if not reports:
        raise errors.ContractError('no runs to aggregate')
    metrics = {}
    for name in EvalReport.METRICS:
        values = [r[name] for r in reports if r.get(name) is not None]
        if values:
            metrics[name] = _mean_std(values)
    categories = sorted({c for r in reports for c in r.get('per_category', {})})
    per_category = {c: _mean_std([r['per_category'][c] for r in reports if c in r['per_category']])
                    for c in categories}
    return EvalReport(metrics, per_category, len(reports))

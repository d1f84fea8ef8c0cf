from flask import json

import consts
from format import format, mean_std
from loggers import getLogger


logger = getLogger(__name__)


def _polarity(value):
    if value is None:
        return None
    return consts.POLARITIES.get(value, 'Conflict')


class BaseSerializer(object):
    def __init__(self, model):
        self._model = model

    def calc(self):
        return self._model

    def to_json(self):
        return json.dumps(self.calc(), ensure_ascii=False)


class ExampleSerializer(BaseSerializer):
    def calc(self):
        return {
            'id': self._model.sentence_id,
            'text': self._model.raw_text,
            'tokens': self._model.tokens,
            'labels': [[category, _polarity(polarity)] for category, polarity in self._model.labels],
        }


class PredictionSerializer(BaseSerializer):
    def calc(self):
        prediction = self._model
        data = {
            'sentence_id': prediction.sentence_id,
            'category': prediction.category,
            'gold': _polarity(prediction.gold),
            'predicted': _polarity(prediction.predicted),
            'distribution': [float(x) for x in prediction.distribution],
            'detection': prediction.detection,
            'attention': [float(x) for x in prediction.attention],
        }
        words = prediction.word_predictions
        if words is not None:
            data['word_predictions'] = [_polarity(x) for x in words]
        return data


class LogRecordSerializer(BaseSerializer):
    def calc(self):
        return format(self._model, digits=6)


class ReportSerializer(BaseSerializer):
    def calc(self):
        report = self._model
        return {
            'n_runs': report.n_runs,
            'metrics': {name: {'mean': mean, 'std': std} for name, (mean, std) in report.metrics.items()},
            'per_category': {name: {'mean': mean, 'std': std}
                             for name, (mean, std) in report.per_category.items()},
        }


class ReportTableSerializer(BaseSerializer):
    """Human-readable report, percentages as mean±(std)."""

    TITLES = {
        'acsa_accuracy': 'ACSA accuracy',
        'kid_f1': 'KID F1',
        'kisc_accuracy': 'KISC accuracy',
    }

    def calc(self):
        report = self._model
        lines = ['runs: {}'.format(report.n_runs)]
        for name in report.METRICS:
            if report.has(name):
                lines.append('{:<16}{}'.format(self.TITLES[name], mean_std(*report.metrics[name])))
            elif name == 'kisc_accuracy' and report.has('kid_f1'):
                # variants without word sentiments cannot classify key instances
                lines.append('{:<16}n/a'.format(self.TITLES[name]))
        if report.per_category:
            lines.append('per category:')
            for category, (mean, std) in sorted(report.per_category.items()):
                lines.append('  {:<14}{}'.format(category, mean_std(mean, std)))
        return lines


class StatisticsSerializer(BaseSerializer):
    def calc(self):
        stats = self._model
        polarities = ' '.join('{}={}'.format(k, v) for k, v in stats['polarities'].items())
        categories = ' '.join('{}={}'.format(k, v) for k, v in stats['categories'].items())
        return 'sentences={} multi={} {} | {}'.format(stats['sentences'], stats['multi'], polarities, categories)


class SweepRowSerializer(BaseSerializer):
    def calc(self):
        row = self._model
        return '{:<10}{:>3}  {}'.format(row['variant'], row['layers'], mean_std(row['mean'], row['std']))


def send_data(stream, data, serializer=BaseSerializer):
    stream.write(serializer(data).to_json())
    stream.write('\n')


def send_lines(stream, items, serializer=BaseSerializer):
    for item in items:
        send_data(stream, item, serializer)

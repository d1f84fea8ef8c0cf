import os

import autodiff as ad
import corpus
import errors
import evaluation
import helpers
from commands.base import CommandBase
from commands.train import write_report
from decorators import validate
from models import load_checkpoint
from serializers import PredictionSerializer, ReportTableSerializer, send_lines
from validators import EvalValidator, PredictValidator


class EvalCommand(CommandBase):
    name = 'eval'
    help = 'evaluate one or more checkpoints on a test corpus; KID and KISC need annotations'
    validator = EvalValidator

    def evaluate(self, path, examples, annotations):
        network, vocabulary, _, metadata = load_checkpoint(path)
        predictions = evaluation.predict(network, examples, vocabulary, self.data['batch_size'])
        result = evaluation.evaluate(predictions, annotations, self.data['kid_threshold'], self.data['kid_average'])
        return result, predictions, metadata

    @validate(EvalValidator)
    def run(self):
        ad.set_precision(self.data['precision'])
        examples = corpus.filter_conflicts(corpus.read_corpus(self.data['test']))
        annotations = None
        if self.data['annotations']:
            annotations = corpus.read_key_instance_annotations(self.data['annotations'], examples)
        runs = [self.evaluate(path, examples, annotations) for path in self.data['checkpoints']]
        report = evaluation.aggregate_runs([result for result, _, _ in runs])
        if self.data['output_dir']:
            with self.staging(self.data['output_dir']) as stage:
                self.echo_config(stage)
                write_report(stage, report)
                for number, (_, predictions, metadata) in enumerate(runs, 1):
                    seed = metadata['seed'] if metadata['seed'] is not None else number
                    path = os.path.join(stage, 'predictions-{}-seed{}.jsonl'.format(number, seed))
                    with open(path, 'w', encoding='utf-8') as f:
                        send_lines(f, predictions, PredictionSerializer)
        for line in ReportTableSerializer(report).calc():
            self.write(line)
        return report


class PredictCommand(CommandBase):
    name = 'predict'
    help = 'print per-category sentiment distributions for one sentence'
    validator = PredictValidator

    @validate(PredictValidator)
    def run(self):
        ad.set_precision(self.data['precision'])
        network, vocabulary, _, _ = load_checkpoint(self.data['checkpoint'])
        tokens = helpers.tokenize(self.data['text'])
        if not tokens:
            raise errors.EmptySequenceError('the input text')
        categories = self.data['categories'] or list(network.categories)
        for category in categories:
            if category not in network.categories:
                raise errors.ConfigError('category {} is not one of {}'.format(
                    category, ', '.join(network.categories)))
        example = corpus.CorpusExample('input', self.data['text'], tokens, [])
        predictions = evaluation.predict(network, [example], vocabulary, queried=categories)
        send_lines(self.stdout, predictions, PredictionSerializer)
        return predictions

import os

import numpy as np

import corpus
import synthetic
from commands.base import CommandBase
from decorators import validate
from serializers import StatisticsSerializer
from validators import ConvertAnnotationsValidator, MakeHardValidator, StatsValidator, SyntheticValidator


class MakeHardCommand(CommandBase):
    name = 'make-hard'
    help = 'keep the sentences with at least two categories of different polarity'
    validator = MakeHardValidator

    @validate(MakeHardValidator)
    def run(self):
        examples = corpus.filter_conflicts(corpus.read_corpus(self.data['input']))
        hard = corpus.make_hard_test_set(examples)
        with self.staged_file(self.data['output']) as path:
            corpus.write_corpus(path, hard)
        self.write(StatisticsSerializer(corpus.corpus_statistics(hard)).calc())
        return hard


class ConvertAnnotationsCommand(CommandBase):
    name = 'convert-annotations'
    help = 'rewrite released key-instance annotations in the tab-separated format'
    validator = ConvertAnnotationsValidator

    @validate(ConvertAnnotationsValidator)
    def run(self):
        examples = corpus.read_corpus(self.data['corpus'])
        annotations = corpus.convert_key_instance_annotations(self.data['input'], examples)
        with self.staged_file(self.data['output']) as path:
            corpus.write_key_instance_annotations(path, annotations)
        self.write('{} annotations written to {}'.format(len(annotations), self.data['output']))
        return annotations


class SyntheticCommand(CommandBase):
    name = 'make-synthetic'
    help = 'write the lexicon corpus or the trigger corpus with its key-instance annotations'
    validator = SyntheticValidator

    @validate(SyntheticValidator)
    def run(self):
        rng = np.random.default_rng(self.data['seed'])
        with self.staging(self.data['output_dir']) as stage:
            if self.data['kind'] == 'lexicon':
                corpus.write_corpus(os.path.join(stage, 'lexicon.jsonl'), synthetic.make_lexicon_corpus(rng))
                return
            sizes = (('train', self.data['size']), ('dev', self.data['test_size']), ('test', self.data['test_size']))
            for split, size in sizes:
                examples, annotations = synthetic.make_trigger_corpus(
                    size, rng, self.data['categories'], self.data['triggers'], prefix=split)
                corpus.write_corpus(os.path.join(stage, '{}.jsonl'.format(split)), examples)
                corpus.write_key_instance_annotations(os.path.join(stage, '{}.annotations.tsv'.format(split)),
                                                      annotations)
                self.write('{}: {}'.format(split, StatisticsSerializer(corpus.corpus_statistics(examples)).calc()))


class StatsCommand(CommandBase):
    name = 'stats'
    help = 'print polarity and category counts of corpus files'
    validator = StatsValidator

    @validate(StatsValidator)
    def run(self):
        results = []
        for path in self.data['corpora']:
            examples = corpus.read_corpus(path)
            if self.data['filter_conflicts']:
                examples = corpus.filter_conflicts(examples)
            stats = corpus.corpus_statistics(examples)
            results.append(stats)
            self.write('{}: {}'.format(path, StatisticsSerializer(stats).calc()))
        return results

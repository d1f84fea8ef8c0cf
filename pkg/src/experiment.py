import os

import numpy as np

import autodiff as ad
import corpus
import evaluation
import helpers
import training
from loggers import getLogger
from models import save_checkpoint
from network import ModelConfig, Network
from serializers import LogRecordSerializer, send_lines


logger = getLogger(__name__)


class Experiment(object):
    """Data, vocabulary and per-seed runs of one resolved configuration."""

    def __init__(self, data):
        self.data = data
        self.train_config = training.TrainConfig.from_dict(data)
        self.train_examples = self.dev_examples = self.test_examples = None
        self.annotations = None
        self.categories = None
        self.vocabulary = None

    def load(self):
        data = self.data
        ad.set_precision(data['precision'])
        train = corpus.filter_conflicts(corpus.read_corpus(data['train']))
        if data.get('dev'):
            dev = corpus.filter_conflicts(corpus.read_corpus(data['dev']))
        else:
            train, dev = corpus.split_by_ids(train, helpers.read_id_list(data['dev_ids']))
        self.train_examples, self.dev_examples = train, dev
        if data.get('test'):
            self.test_examples = corpus.filter_conflicts(corpus.read_corpus(data['test']))
            if data.get('annotations'):
                self.annotations = corpus.read_key_instance_annotations(data['annotations'], self.test_examples)
        self.categories = corpus.category_inventory(train + dev)
        self.vocabulary = corpus.build_vocabulary(train, data['min_count'])
        logger.info('train %d, dev %d, test %d sentences; %d categories; vocabulary %d',
                    len(train), len(dev), len(self.test_examples or []), len(self.categories),
                    len(self.vocabulary))
        return self

    def model_config(self, **overrides):
        fields = {name: self.data[name] for name in ModelConfig.fields if name in self.data}
        fields.update(overrides)
        fields['categories'] = self.categories
        return ModelConfig.from_dict(fields)

    def build_network(self, seed, **overrides):
        rng = np.random.default_rng(seed)
        model_config = self.model_config(**overrides)
        embeddings = None
        if self.data.get('vectors'):
            embeddings = corpus.load_pretrained_vectors(self.data['vectors'], self.vocabulary, model_config.dim, rng)
        return Network(model_config, len(self.vocabulary), rng, embeddings)

    def run_seed(self, seed, out_dir, **overrides):
        """Trains one seed; writes its checkpoint and training log into `out_dir`."""
        logger.info('training seed %d', seed)
        network = self.build_network(seed, **overrides)
        result = training.train(network, self.vocabulary, self.train_examples, self.dev_examples,
                                self.train_config, np.random.default_rng([seed, 1]))
        resolved = dict(self.data, **overrides)
        save_checkpoint(os.path.join(out_dir, helpers.checkpoint_name(seed)), network, self.vocabulary,
                        resolved, seed, result.score)
        with open(os.path.join(out_dir, helpers.log_name(seed)), 'w', encoding='utf-8') as f:
            send_lines(f, [dict(record, seed=seed) for record in result.log], LogRecordSerializer)
        return network, result

    def evaluate(self, network, examples=None):
        examples = self.test_examples if examples is None else examples
        predictions = evaluation.predict(network, examples, self.vocabulary, self.train_config.batch_size)
        return evaluation.evaluate(predictions, self.annotations if examples is self.test_examples else None,
                                   self.data['kid_threshold'], self.data['kid_average']), predictions

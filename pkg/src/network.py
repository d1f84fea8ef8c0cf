import numpy as np

import autodiff as ad
import config
import consts
import errors
from layers import Embedding, LSTMCell, BiLSTMStack, AttentionHead, Linear, run_lstm
from loggers import getLogger


logger = getLogger(__name__)


class ModelConfig(object):
    fields = ('categories', 'dim', 'layers', 'variant', 'dropout', 'detach_attention',
              'train_embeddings', 'dropout_embedding', 'dropout_layers')

    def __init__(self, categories, dim=config.DIM, layers=config.LAYERS, variant=config.VARIANT,
                 dropout=config.DROPOUT, detach_attention=config.DETACH_ATTENTION,
                 train_embeddings=config.TRAIN_EMBEDDINGS, dropout_embedding=config.DROPOUT_EMBEDDING,
                 dropout_layers=config.DROPOUT_LAYERS):
        self.categories = list(categories)
        self.dim = dim
        self.layers = layers
        self.variant = variant
        self.dropout = dropout
        self.detach_attention = detach_attention
        self.train_embeddings = train_embeddings
        self.dropout_embedding = dropout_embedding
        self.dropout_layers = dropout_layers
        self.check()

    def check(self):
        if not self.categories:
            raise errors.ConfigError('at least one aspect category is required')
        if len(set(self.categories)) != len(self.categories):
            raise errors.ConfigError('aspect categories must be unique')
        if self.dim <= 0 or self.dim % 2:
            raise errors.ConfigError('dim {} must be a positive even number'.format(self.dim))
        if self.layers < 1:
            raise errors.ConfigError('layers must be at least 1')
        if self.variant not in consts.VARIANTS:
            raise errors.ConfigError('variant {} is not one of {}'.format(
                self.variant, ', '.join(consts.VARIANTS)))
        if not 0.0 <= self.dropout < 1.0:
            raise errors.ConfigError('dropout {} is outside [0, 1)'.format(self.dropout))

    @property
    def num_categories(self):
        return len(self.categories)

    @property
    def classes(self):
        return consts.NUM_CLASSES

    def to_dict(self):
        return {name: getattr(self, name) for name in self.fields}

    @classmethod
    def from_dict(cls, data):
        return cls(**{name: data[name] for name in cls.fields if name in data})


class ForwardOutput(object):
    """Outputs for a batch: detection [B, N], attention [B, N, n],
    word_logits [B, n, 3] (None for womil) and sentiment [B, N, 3]."""

    def __init__(self, detection, attention, word_logits, sentiment, lengths, queried=None):
        self.detection = detection
        self.attention = attention
        self.word_logits = word_logits
        self.sentiment = sentiment
        self.lengths = lengths
        self.queried = queried

    def category_sentiment(self, category, row=0):
        return self.sentiment.values[row, category]

    def category_attention(self, category, row=0):
        return self.attention.values[row, category, :self.lengths[row]]

    def word_sentiment_logits(self, row=0):
        if self.word_logits is None:
            return None
        return self.word_logits.values[row, :self.lengths[row]]


def aggregate(alphas, words):
    """Per-category attention-weighted sum of word-level vectors: [B, N, n] x [B, n, k] -> [B, N, k]."""
    return ad.bmm(alphas, words)


class Network(object):
    """Attention-based category detection feeding word-level sentiment aggregation."""

    def __init__(self, model_config, vocab_size, rng, embeddings=None):
        self.config = model_config
        self.vocab_size = vocab_size
        self.registry = ad.ParamRegistry()
        cfg, reg, d = model_config, self.registry, model_config.dim
        if embeddings is not None and embeddings.shape[1] != d:
            raise errors.DimensionError('pretrained vectors have {} columns, model dim is {}'.format(
                embeddings.shape[1], d))

        # detection branch
        self.acd_embedding = Embedding(reg, 'acd.embedding', vocab_size, d, rng,
                                       embeddings, cfg.train_embeddings)
        if cfg.variant == consts.VARIANT_AFFINE:
            self.acd_encoder = Linear(reg, 'acd.affine', d, d, rng)
        else:
            self.acd_encoder = LSTMCell(reg, 'acd.lstm', d, d, rng)
        self.heads = [AttentionHead(reg, 'acd.attention.{}'.format(j), d, rng)
                      for j in range(cfg.num_categories)]
        self.detectors = [Linear(reg, 'acd.prediction.{}'.format(j), d, 1, rng)
                          for j in range(cfg.num_categories)]

        # sentiment branch
        self.acsa_embedding = Embedding(reg, 'acsa.embedding', vocab_size, d, rng,
                                        embeddings, cfg.train_embeddings)
        self.bilstm = BiLSTMStack(reg, 'acsa.bilstm', d, cfg.layers, rng)
        head = 'acsa.classifier' if cfg.variant == consts.VARIANT_WOMIL else 'acsa.word'
        self.hidden = Linear(reg, '{}.1'.format(head), d, d, rng)
        self.output = Linear(reg, '{}.2'.format(head), d, consts.NUM_CLASSES, rng)

    @property
    def categories(self):
        return self.config.categories

    def parameters(self, prefix=''):
        return self.registry.items(prefix)

    def _prepare(self, token_ids, lengths):
        ids = np.asarray(token_ids, dtype=np.int64)
        if ids.ndim == 1:
            ids = ids[None]
        if ids.shape[1] == 0:
            raise errors.EmptySequenceError('sentence')
        if lengths is None:
            lengths = [ids.shape[1]] * ids.shape[0]
        lengths = np.asarray(lengths, dtype=np.int64)
        if (lengths < 1).any():
            raise errors.EmptySequenceError('sentence')
        mask = np.arange(ids.shape[1])[None, :] < lengths[:, None]
        return ids, lengths, mask

    def encode_detection(self, X):
        if self.config.variant == consts.VARIANT_AFFINE:
            return ad.tanh(self.acd_encoder(X))
        return run_lstm(self.acd_encoder, X)

    def detect(self, token_ids, lengths=None):
        """Detection branch: returns (y_hat [B, N], alpha [B, N, n], H [B, n, d])."""
        ids, lengths, mask = self._prepare(token_ids, lengths)
        H = self.encode_detection(self.acd_embedding(ids))
        alphas = ad.stack([head(H, mask) for head in self.heads], axis=1)
        R = ad.bmm(alphas, H)
        scores = [detector(ad.select(R, j, axis=1)) for j, detector in enumerate(self.detectors)]
        y_hat = ad.sigmoid(ad.concat(scores, axis=-1))
        return y_hat, alphas, H

    def forward(self, token_ids, lengths=None, training=False, rng=None):
        ids, lengths, mask = self._prepare(token_ids, lengths)
        y_hat, alphas, _ = self.detect(ids, lengths)
        cfg = self.config
        weights = ad.detach(alphas) if cfg.detach_attention else alphas

        X = self.acsa_embedding(ids)
        if cfg.dropout_embedding:
            X = ad.dropout(X, cfg.dropout, training, rng)
        H = self.bilstm(X, lengths, cfg.dropout if cfg.dropout_layers else 0.0, training, rng)

        if cfg.variant == consts.VARIANT_WOMIL:
            # category-specific sentence vectors, then a two-layer classifier
            S = aggregate(weights, H)
            logits = self.output(ad.relu(self.hidden(S)))
            return ForwardOutput(y_hat, alphas, None, ad.softmax(logits), lengths)

        word_logits = self.output(ad.relu(self.hidden(H)))
        words = ad.softmax(word_logits) if cfg.variant == consts.VARIANT_SOFTMAX else word_logits
        sentiment = ad.softmax(aggregate(weights, words))
        return ForwardOutput(y_hat, alphas, word_logits, sentiment, lengths)

    def check_categories(self, queried):
        queried = list(queried)
        if not queried:
            raise errors.ContractError('at least one category must be queried')
        for category in queried:
            if not isinstance(category, (int, np.integer)) or not 0 <= category < self.config.num_categories:
                raise errors.ContractError('unknown category id {}'.format(category))
        return queried

    def forward_acd(self, token_ids):
        y_hat, alphas, H = self.detect(token_ids)
        return y_hat, alphas, H

    def forward_acsa(self, token_ids, queried):
        queried = self.check_categories(queried)
        out = self.forward(token_ids)
        out.queried = queried
        return out

    def forward_variant(self, variant, token_ids, queried):
        if self.config.variant != variant:
            raise errors.ContractError('network is built as {}, not {}'.format(self.config.variant, variant))
        return self.forward_acsa(token_ids, queried)

    def forward_variant_womil(self, token_ids, queried):
        return self.forward_variant(consts.VARIANT_WOMIL, token_ids, queried)

    def forward_variant_affine(self, token_ids, queried):
        return self.forward_variant(consts.VARIANT_AFFINE, token_ids, queried)

    def forward_variant_softmax(self, token_ids, queried):
        return self.forward_variant(consts.VARIANT_SOFTMAX, token_ids, queried)

from contextlib import contextmanager

import numpy as np

import autodiff as ad
import config
import consts
import corpus
import errors
import evaluation
import losses
from loggers import getLogger


logger = getLogger(__name__)

STAGE_JOINT = 'joint'
STAGE_ACD = 'acd'
STAGE_ACSA = 'acsa'


class TrainConfig(object):
    fields = ('lr', 'batch_size', 'beta', 'l2', 'patience', 'max_epochs', 'seeds', 'schedule',
              'stop_metric', 'clip_norm')

    def __init__(self, lr=config.LR, batch_size=config.BATCH_SIZE, beta=config.BETA, l2=config.L2,
                 patience=config.PATIENCE, max_epochs=config.MAX_EPOCHS, seeds=None,
                 schedule=config.SCHEDULE, stop_metric=config.STOP_METRIC, clip_norm=config.CLIP_NORM):
        self.lr = lr
        self.batch_size = batch_size
        self.beta = beta
        self.l2 = l2
        self.patience = patience
        self.max_epochs = max_epochs
        self.seeds = list(config.SEEDS if seeds is None else seeds)
        self.schedule = schedule
        self.stop_metric = stop_metric
        self.clip_norm = clip_norm
        self.check()

    def check(self):
        if self.schedule not in consts.SCHEDULES:
            raise errors.ConfigError('schedule {} is not one of {}'.format(
                self.schedule, ', '.join(sorted(consts.SCHEDULES))))
        if self.stop_metric not in consts.STOP_METRICS:
            raise errors.ConfigError('stop metric {} is not one of {}'.format(
                self.stop_metric, ', '.join(consts.STOP_METRICS)))
        if self.lr <= 0 or self.batch_size < 1 or self.patience < 1 or self.max_epochs < 1:
            raise errors.ConfigError('lr, batch size, patience and max epochs must be positive')
        if self.beta < 0 or self.l2 < 0 or (self.clip_norm or 0) < 0:
            raise errors.ConfigError('beta, l2 and clip norm must not be negative')
        if not self.seeds:
            raise errors.ConfigError('at least one seed is required')

    @property
    def mode(self):
        return consts.SCHEDULES[self.schedule]['mode']

    @property
    def joint(self):
        return consts.SCHEDULES[self.schedule]['joint']

    def to_dict(self):
        return {name: getattr(self, name) for name in self.fields}

    @classmethod
    def from_dict(cls, data):
        return cls(**{name: data[name] for name in cls.fields if name in data})


class AdamState(object):

    def __init__(self, registry, beta1=config.ADAM_BETA1, beta2=config.ADAM_BETA2, eps=config.ADAM_EPS):
        self.beta1 = beta1
        self.beta2 = beta2
        self.eps = eps
        self.step = 0
        self.m = {name: np.zeros(param.shape) for name, param in registry.items()}
        self.v = {name: np.zeros(param.shape) for name, param in registry.items()}


def adam_step(state, registry, lr, grads=None):
    """Bias-corrected Adam update of every trainable parameter, in place."""
    state.step += 1
    correction1 = 1.0 - state.beta1 ** state.step
    correction2 = 1.0 - state.beta2 ** state.step
    for name, param in registry.trainable():
        grad = np.asarray(param.grad if grads is None else grads[name], dtype=np.float64)
        if grad.shape != param.shape:
            raise errors.DimensionError('gradient {} for parameter {} of shape {}'.format(
                grad.shape, name, param.shape))
        m = state.m[name] = state.beta1 * state.m[name] + (1.0 - state.beta1) * grad
        v = state.v[name] = state.beta2 * state.v[name] + (1.0 - state.beta2) * grad * grad
        update = lr * (m / correction1) / (np.sqrt(v / correction2) + state.eps)
        param.values -= update.astype(param.values.dtype)


class EarlyStopper(object):
    """Stops after `patience` consecutive epochs without improvement."""

    def __init__(self, patience=config.PATIENCE, mode='max'):
        self.patience = patience
        self.mode = mode
        self.best = None
        self.best_epoch = None
        self.bad_epochs = 0

    def improves(self, value):
        if self.best is None:
            return True
        return value > self.best if self.mode == 'max' else value < self.best

    def update(self, value, epoch=None):
        if self.improves(value):
            self.best, self.best_epoch, self.bad_epochs = value, epoch, 0
            return True
        self.bad_epochs += 1
        return False

    @property
    def should_stop(self):
        return self.bad_epochs >= self.patience


@contextmanager
def frozen(registry, prefix):
    """Temporarily excludes the parameters under `prefix` from training."""
    flags = {name: param.trainable for name, param in registry.items(prefix)}
    registry.set_trainable(prefix, False)
    try:
        yield registry
    finally:
        for name, flag in flags.items():
            registry[name].trainable = flag


class TrainResult(object):

    def __init__(self, state, score, epoch, log, steps):
        self.state = state
        self.score = score
        self.epoch = epoch
        self.log = log
        self.steps = steps


def batch_loss(network, batch, cfg, stage=STAGE_JOINT, training=True, rng=None):
    """Returns (loss tensor, forward output); losses are averaged over batch items."""
    registry, scale = network.registry, 1.0 / batch.size
    if stage == STAGE_ACD:
        y_hat, _, _ = network.detect(batch.token_ids, batch.lengths)
        acd = ad.mul(losses.acd_loss(y_hat, batch.acd_targets), scale)
        return losses.regularized(acd, registry, cfg.l2), None
    out = network.forward(batch.token_ids, batch.lengths, training, rng)
    acsa = ad.mul(losses.acsa_loss(out.sentiment, batch.sentiment_targets, batch.query_mask), scale)
    if stage == STAGE_ACSA:
        return losses.regularized(acsa, registry, cfg.l2), out
    acd = ad.mul(losses.acd_loss(out.detection, batch.acd_targets), scale)
    return losses.combined_loss(acd, acsa, registry, cfg.beta, cfg.l2), out


def train_step(network, batch, cfg, state, rng, stage=STAGE_JOINT, epoch=0, number=0):
    registry = network.registry
    registry.zero_grad()
    with ad.Tape() as tape:
        loss, out = batch_loss(network, batch, cfg, stage, True, rng)
        value = loss.item()
        if not np.isfinite(value):
            raise errors.TrainingDivergedError(epoch, number, value)
        tape.backward(loss)
    norm = registry.clip_grad_norm(cfg.clip_norm)
    adam_step(state, registry, cfg.lr)
    logger.debug('epoch %d batch %d loss %.6f grad norm %.4f', epoch, number, value, norm)
    return value, out


def count_correct(out, batch):
    if out is None:
        return 0, 0
    mask = batch.query_mask
    predicted = out.sentiment.values.argmax(axis=-1)
    return int((predicted[mask] == batch.sentiment_targets[mask]).sum()), int(mask.sum())


def dev_score(dev, cfg, stage):
    if stage == STAGE_ACD:
        return dev.acd_loss, 'min'
    if stage == STAGE_ACSA or cfg.stop_metric == consts.STOP_ACCURACY:
        return dev.accuracy, 'max'
    return dev.loss(cfg.beta), 'min'


def run_stage(network, vocabulary, train_examples, dev_examples, cfg, rng, stage, log, steps):
    registry = network.registry
    state = AdamState(registry)
    stopper, best_state = None, None
    for epoch in range(1, cfg.max_epochs + 1):
        total, batches, correct, queried = 0.0, 0, 0, 0
        for number, batch in enumerate(corpus.batch(train_examples, cfg.batch_size, cfg.mode, rng,
                                                    vocabulary, network.categories), 1):
            value, out = train_step(network, batch, cfg, state, rng, stage, epoch, number)
            steps.append(value)
            total += value
            batches += 1
            hits, count = count_correct(out, batch)
            correct += hits
            queried += count
        dev = evaluation.run_split(network, dev_examples, vocabulary, cfg.batch_size, cfg.mode)
        score, mode = dev_score(dev, cfg, stage)
        if stopper is None:
            stopper = EarlyStopper(cfg.patience, mode)
        log.append({'epoch': epoch, 'stage': stage, 'split': 'train', 'loss': total / max(batches, 1),
                    'accuracy': correct / float(queried) if queried else None})
        log.append({'epoch': epoch, 'stage': stage, 'split': 'dev',
                    'loss': dev.acd_loss if stage == STAGE_ACD else dev.loss(cfg.beta),
                    'accuracy': dev.accuracy})
        if stopper.update(score, epoch):
            best_state = registry.state_dict()
        logger.info('%s epoch %d: train loss %.4f, dev loss %.4f, dev accuracy %.4f%s',
                    stage, epoch, log[-2]['loss'], log[-1]['loss'], dev.accuracy,
                    ' *' if stopper.best_epoch == epoch else '')
        if stopper.should_stop:
            logger.info('%s stage stopped after %d epochs without improvement', stage, stopper.bad_epochs)
            break
    registry.load_state_dict(best_state)
    return stopper.best, stopper.best_epoch


def check_inventory(network, examples):
    known = set(network.categories)
    for example in examples:
        for category in example.categories:
            if category not in known:
                raise errors.DataError('category {} of sentence {} is not in the model inventory'.format(
                    category, example.sentence_id))


def train(network, vocabulary, train_examples, dev_examples, cfg, rng):
    """Trains `network` in place under `cfg.schedule` and restores the best-dev parameters."""
    check_inventory(network, train_examples)
    check_inventory(network, dev_examples)
    log, steps = [], []
    registry = network.registry
    if cfg.joint:
        score, epoch = run_stage(network, vocabulary, train_examples, dev_examples, cfg, rng,
                                 STAGE_JOINT, log, steps)
    else:
        with frozen(registry, consts.PREFIX_ACSA):
            run_stage(network, vocabulary, train_examples, dev_examples, cfg, rng, STAGE_ACD, log, steps)
        with frozen(registry, consts.PREFIX_ACD):
            score, epoch = run_stage(network, vocabulary, train_examples, dev_examples, cfg, rng,
                                     STAGE_ACSA, log, steps)
    return TrainResult(registry.state_dict(), score, epoch, log, steps)

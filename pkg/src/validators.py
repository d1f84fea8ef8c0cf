import os

import config
import consts
import errors
from autodiff import PRECISIONS
from format import get_argument


class BaseValidator(object):
    """Coerces raw option values (strings from a config file or the command
    line) by the `fields` table; unknown keys and missing files are rejected."""

    fields = {}

    def __init__(self, options):
        self.form, self.cleaned_data, self._error = {}, {}, None
        options = {k: v for k, v in (options or {}).items() if v is not None}
        for name in sorted(options):
            if name not in self.fields:
                raise errors.UnknownKeyError(name)
        for name, params in self.fields.items():
            value = options.get(name)
            if params.get('required') and value is None:
                raise errors.ValidationRequiredError(name)
            if value is not None:
                try:
                    value = get_argument(value, params['type'])
                except (TypeError, ValueError):
                    raise errors.ValidationError(name)
            else:
                value = params.get('default')
            if params.get('file') and value is not None:
                for path in (value if isinstance(value, list) else [value]):
                    if not os.path.isfile(path):
                        raise errors.MissingFileError(path)
            self.form[name] = value

    def is_valid(self):
        self._error = None
        self.cleaned_data = dict(self.form)
        return True

    def error(self, error):
        self._error = error
        return False

    def get_error(self):
        return self._error

    def check_choice(self, name, choices):
        if self.form[name] not in choices:
            return '{} {} is not one of {}'.format(name, self.form[name], ', '.join(sorted(choices)))


MODEL_FIELDS = {
    'dim': dict(type=int, default=config.DIM, help='model dimension d (even)'),
    'layers': dict(type=int, default=config.LAYERS, help='Bi-LSTM depth L'),
    'variant': dict(type=str, default=config.VARIANT, help=', '.join(sorted(consts.VARIANTS))),
    'dropout': dict(type=float, default=config.DROPOUT),
    'detach_attention': dict(type=bool, default=config.DETACH_ATTENTION,
                             help='stop the sentiment loss from reaching the attention'),
    'train_embeddings': dict(type=bool, default=config.TRAIN_EMBEDDINGS),
    'dropout_embedding': dict(type=bool, default=config.DROPOUT_EMBEDDING),
    'dropout_layers': dict(type=bool, default=config.DROPOUT_LAYERS),
}

TRAIN_FIELDS = {
    'lr': dict(type=float, default=config.LR),
    'batch_size': dict(type=int, default=config.BATCH_SIZE),
    'beta': dict(type=float, default=config.BETA, help='weight of the sentiment loss'),
    'l2': dict(type=float, default=config.L2),
    'patience': dict(type=int, default=config.PATIENCE),
    'max_epochs': dict(type=int, default=config.MAX_EPOCHS),
    'seeds': dict(type='int_list', default=config.SEEDS),
    'schedule': dict(type=str, default=config.SCHEDULE, help=', '.join(sorted(consts.SCHEDULES))),
    'stop_metric': dict(type=str, default=config.STOP_METRIC, help=', '.join(consts.STOP_METRICS)),
    'clip_norm': dict(type=float, default=config.CLIP_NORM),
}

DATA_FIELDS = {
    'train': dict(type=str, required=True, file=True, help='training corpus (.xml or internal format)'),
    'dev': dict(type=str, file=True),
    'dev_ids': dict(type=str, file=True, help='sentence ids moved from train to dev'),
    'test': dict(type=str, file=True),
    'vectors': dict(type=str, file=True, help='pretrained word vectors, one token and d values per line'),
    'annotations': dict(type=str, file=True, help='key-instance annotations of the test corpus'),
    'min_count': dict(type=int, default=config.MIN_COUNT),
}

EVAL_FIELDS = {
    'kid_threshold': dict(type=float, default=config.KID_THRESHOLD),
    'kid_average': dict(type=str, default=config.KID_AVERAGE),
    'precision': dict(type=str, default=config.PRECISION),
}


def check_model(form):
    if form['variant'] not in consts.VARIANTS:
        return 'variant {} is not one of {}'.format(form['variant'], ', '.join(sorted(consts.VARIANTS)))
    if form['dim'] < 2 or form['dim'] % 2:
        return 'dim must be a positive even number'
    if form['layers'] < 1:
        return 'layers must be at least 1'
    if not 0.0 <= form['dropout'] < 1.0:
        return 'dropout must be in [0, 1)'


def check_train(form):
    if form['schedule'] not in consts.SCHEDULES:
        return 'schedule {} is not one of {}'.format(form['schedule'], ', '.join(sorted(consts.SCHEDULES)))
    if form['stop_metric'] not in consts.STOP_METRICS:
        return 'stop_metric {} is not one of {}'.format(form['stop_metric'], ', '.join(consts.STOP_METRICS))
    for name in ('lr', 'batch_size', 'patience', 'max_epochs'):
        if form[name] <= 0:
            return '{} must be positive'.format(name)
    for name in ('beta', 'l2', 'clip_norm'):
        if form[name] < 0:
            return '{} must not be negative'.format(name)
    if not form['seeds']:
        return 'at least one seed is required'


def check_eval(form):
    if form['precision'] not in PRECISIONS:
        return 'precision {} is not one of {}'.format(form['precision'], ', '.join(sorted(PRECISIONS)))
    if form['kid_average'] not in (consts.AVERAGE_MICRO, consts.AVERAGE_MACRO):
        return 'kid_average must be micro or macro'
    if not 0.0 <= form['kid_threshold'] <= 1.0:
        return 'kid_threshold must be in [0, 1]'


class ExperimentValidator(BaseValidator):
    fields = dict(MODEL_FIELDS, **TRAIN_FIELDS)
    fields.update(DATA_FIELDS)
    fields.update(EVAL_FIELDS)
    fields['output_dir'] = dict(type=str, default=config.OUTPUT_DIR)

    def is_valid(self):
        for check in (check_model, check_train, check_eval):
            message = check(self.form)
            if message:
                return self.error(message)
        if not self.form['dev'] and not self.form['dev_ids']:
            return self.error('dev or dev_ids is required')
        if self.form['min_count'] < 1:
            return self.error('min_count must be at least 1')
        return super(ExperimentValidator, self).is_valid()


class SweepValidator(ExperimentValidator):
    fields = dict(ExperimentValidator.fields)
    fields['sweep_layers'] = dict(type='int_list', default=[1, 2, 3, 4], help='Bi-LSTM depths to compare')
    fields['sweep_variants'] = dict(type='str_list', default=[consts.VARIANT_STANDARD, consts.VARIANT_SOFTMAX])

    def is_valid(self):
        for variant in self.form['sweep_variants']:
            if variant not in consts.VARIANTS:
                return self.error('variant {} is not one of {}'.format(variant, ', '.join(sorted(consts.VARIANTS))))
        if not self.form['sweep_layers'] or min(self.form['sweep_layers']) < 1:
            return self.error('sweep_layers must list depths of at least 1')
        return super(SweepValidator, self).is_valid()


class EvalValidator(BaseValidator):
    fields = dict(EVAL_FIELDS)
    fields.update({
        'checkpoints': dict(type='str_list', required=True, file=True),
        'test': dict(type=str, required=True, file=True),
        'annotations': dict(type=str, file=True),
        'batch_size': dict(type=int, default=config.BATCH_SIZE),
        'output_dir': dict(type=str),
    })

    def is_valid(self):
        message = check_eval(self.form)
        if message:
            return self.error(message)
        if self.form['batch_size'] < 1:
            return self.error('batch_size must be positive')
        return super(EvalValidator, self).is_valid()


class PredictValidator(BaseValidator):
    fields = {
        'checkpoint': dict(type=str, required=True, file=True),
        'text': dict(type=str, required=True),
        'categories': dict(type='str_list', help='defaults to every category of the checkpoint'),
        'precision': dict(type=str, default=config.PRECISION),
    }

    def is_valid(self):
        message = self.check_choice('precision', PRECISIONS)
        if message:
            return self.error(message)
        if not self.form['text'].strip():
            return self.error('text is empty')
        return super(PredictValidator, self).is_valid()


class ExportValidator(BaseValidator):
    fields = {
        'checkpoint': dict(type=str, required=True, file=True),
        'corpus': dict(type=str, required=True, file=True),
        'output_dir': dict(type=str, required=True),
        'batch_size': dict(type=int, default=config.BATCH_SIZE),
        'precision': dict(type=str, default=config.PRECISION),
    }

    def is_valid(self):
        message = self.check_choice('precision', PRECISIONS)
        if message:
            return self.error(message)
        return super(ExportValidator, self).is_valid()


class MakeHardValidator(BaseValidator):
    fields = {
        'input': dict(type=str, required=True, file=True),
        'output': dict(type=str, required=True),
    }


class ConvertAnnotationsValidator(BaseValidator):
    fields = {
        'input': dict(type=str, required=True, file=True, help='released key-instance file, json lines'),
        'corpus': dict(type=str, required=True, file=True, help='corpus the annotations refer to'),
        'output': dict(type=str, required=True),
    }


class SyntheticValidator(BaseValidator):
    fields = {
        'kind': dict(type=str, default='trigger', help='lexicon or trigger'),
        'output_dir': dict(type=str, required=True),
        'size': dict(type=int, default=2000, help='training sentences of the trigger corpus'),
        'test_size': dict(type=int, default=200, help='dev and test sentences of the trigger corpus'),
        'seed': dict(type=int, default=1),
        'categories': dict(type=int, default=3),
        'triggers': dict(type=int, default=10),
    }

    def is_valid(self):
        message = self.check_choice('kind', ('lexicon', 'trigger'))
        if message:
            return self.error(message)
        for name in ('size', 'test_size', 'categories', 'triggers'):
            if self.form[name] < 1:
                return self.error('{} must be positive'.format(name))
        return super(SyntheticValidator, self).is_valid()


class StatsValidator(BaseValidator):
    fields = {
        'corpora': dict(type='str_list', required=True, file=True),
        'filter_conflicts': dict(type=bool, default=True),
    }

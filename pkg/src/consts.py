UNKNOWN = -1

# sentiment classes
NEG = 0
NEU = 1
POS = 2
CONFLICT = 3

POLARITIES = {
    NEG: 'Neg',
    NEU: 'Neu',
    POS: 'Pos',
}

POLARITIES_NAMES = {value: key for key, value in POLARITIES.items()}

NUM_CLASSES = len(POLARITIES)

# polarity strings used by SemEval-2014 and MAMS files
XML_POLARITIES = {
    'negative': NEG,
    'neutral': NEU,
    'positive': POS,
    'conflict': CONFLICT,
}

# reserved vocabulary entries
PAD = '<pad>'
UNK = '<unk>'
PAD_INDEX = 0
UNK_INDEX = 1

# model variants
VARIANT_STANDARD = 'standard'
VARIANT_WOMIL = 'womil'
VARIANT_AFFINE = 'affine'
VARIANT_SOFTMAX = 'softmax'

VARIANTS = {
    VARIANT_STANDARD: 'word sentiments aggregated by category attention',
    VARIANT_WOMIL: 'attention-weighted sentence vector, then classify',
    VARIANT_AFFINE: 'affine detection encoder instead of an LSTM',
    VARIANT_SOFTMAX: 'word sentiments softmaxed before aggregation',
}

# batching modes
MODE_SINGLE = 'single'
MODE_MULTI = 'multi'

MODES = (MODE_SINGLE, MODE_MULTI)

# multi-task schedules
SCHEDULE_SINGLE_PIPELINE = 'single-pipeline'
SCHEDULE_SINGLE_JOINT = 'single-joint'
SCHEDULE_MULTI_PIPELINE = 'multi-pipeline'
SCHEDULE_MULTI_JOINT = 'multi-joint'

SCHEDULES = {
    SCHEDULE_SINGLE_PIPELINE: {'mode': MODE_SINGLE, 'joint': False},
    SCHEDULE_SINGLE_JOINT: {'mode': MODE_SINGLE, 'joint': True},
    SCHEDULE_MULTI_PIPELINE: {'mode': MODE_MULTI, 'joint': False},
    SCHEDULE_MULTI_JOINT: {'mode': MODE_MULTI, 'joint': True},
}

# early stopping metrics
STOP_ACCURACY = 'accuracy'
STOP_LOSS = 'loss'

STOP_METRICS = (STOP_ACCURACY, STOP_LOSS)

# KID averaging
AVERAGE_MICRO = 'micro'
AVERAGE_MACRO = 'macro'

# parameter name prefixes
PREFIX_ACD = 'acd.'
PREFIX_ACSA = 'acsa.'

# checkpoint container
CHECKPOINT_VERSION = 1
CHECKPOINT_PATTERN = 'checkpoint-seed{}.db'
LOG_PATTERN = 'train-seed{}.log'
CONFIG_ECHO = 'config.resolved.cfg'

# exit codes
EXIT_OK = 0
EXIT_FAILURE = 1
EXIT_CONFIG = 2
EXIT_DATA = 3
EXIT_DIVERGED = 4

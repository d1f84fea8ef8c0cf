# numeric precision of the autodiff core, float64 is used by the gradient checks
PRECISION = 'float32'

# model config
DIM = 300
LAYERS = 3
VARIANT = 'standard'
DROPOUT = 0.5
DETACH_ATTENTION = False
TRAIN_EMBEDDINGS = True
# dropout after the ACSA embedding and after every Bi-LSTM layer
DROPOUT_EMBEDDING = True
DROPOUT_LAYERS = True

# initialization ranges
INIT_RANGE = 0.1
EMBEDDING_INIT_RANGE = 0.25
FORGET_BIAS = 1.0

# train config
LR = 0.001
BATCH_SIZE = 32
BETA = 1.0
L2 = 0.00001
PATIENCE = 10
MAX_EPOCHS = 100
SEEDS = [1, 2, 3, 4, 5]
SCHEDULE = 'multi-joint'
STOP_METRIC = 'accuracy'
CLIP_NORM = 5.0

# adam config
ADAM_BETA1 = 0.9
ADAM_BETA2 = 0.999
ADAM_EPS = 1e-8

# numerical guards
LOG_CLAMP = 1e-12

# evaluation config
KID_THRESHOLD = 0.1
KID_AVERAGE = 'micro'

# vocabulary config
MIN_COUNT = 1

# output config
OUTPUT_DIR = 'output'

# rendering config
TEMPLATES_DIR = 'templates'

# load local config if exists
try:
    from config_local import *  # noqa
except ImportError:
    pass

import sys
sys.path.insert(0, 'src')

from tests.autodiff_t import *
from tests.cache_t import *
from tests.commands_t import *
from tests.corpus_t import *
from tests.decorators_t import *
from tests.evaluation_t import *
from tests.export_t import *
from tests.format_t import *
from tests.helpers_t import *
from tests.layers_t import *
from tests.losses_t import *
from tests.models_t import *
from tests.network_t import *
from tests.serializers_t import *
from tests.synthetic_t import *
from tests.training_t import *
from tests.validators_t import *

__version__ = '0.1.0'

from . import utils
from . import linalg
from . import measurement
from . import infotheory
from . import dynamics
from . import config
from . import plots
from . import experiments
from . import checks

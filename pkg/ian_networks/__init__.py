from packaging.version import Version

from ian_networks.data import Dataset as Dataset
from ian_networks.data import generate_monks2 as generate_monks2
from ian_networks.data import generate_synthetic as generate_synthetic
from ian_networks.data import load_csv as load_csv
from ian_networks.evaluation import evaluate as evaluate
from ian_networks.interpret import extract_rules as extract_rules
from ian_networks.interpret import rules_to_predictor as rules_to_predictor
from ian_networks.model import Network as Network
from ian_networks.model import ProcessingKind as ProcessingKind
from ian_networks.model import load_network as load_network
from ian_networks.model import predict as predict
from ian_networks.search import bfs_search as bfs_search
from ian_networks.training import TrainConfig as TrainConfig
from ian_networks.training import init_network as init_network
from ian_networks.training import train as train

try:
    from ._version import __version__
except ImportError:
    __version__ = "0.0.0+dirty"


CURRENT_VERSION = Version(__version__)

DEFAULT_HORIZON = 500
DEFAULT_CONTINUOUS_HORIZON = 300
DEFAULT_SEEDS = [0, 1, 2, 3, 4]
DEFAULT_STAY_PROB = 0.8
DEFAULT_EPSILON = 1e-3
DEFAULT_GAMMA = 0.95
DEFAULT_TOL = 1e-8
DEFAULT_SWITCH_AT = 100
DEFAULT_PERIOD = 10

PROB_TOL = 1e-9
EQUIV_TOL = 1e-9

CONTROL_RATE_HZ = 5
CONTROL_PERIOD = 1.0 / CONTROL_RATE_HZ

DEFAULT_DEPTH_NOISE = {'a': 0.02, 'b': 0.01}
DEFAULT_REWARD_RADIUS = 1.0
STOP_FRACTION = 0.8
# Noise standard deviations around the reward radius where a projection
# makes no reward prediction.
DEFAULT_BOUNDARY_MARGIN = 4.0

DEFAULT_OUT_DIR = 'oas-out'
ENV_OUT_DIR = 'OAS_OUT_DIR'
ENV_CONFIG = 'OAS_CONFIG'

MANIFEST_KEY = 'x-manifest'
METRICS_FILENAME = 'metrics.csv'
MANIFEST_FILENAME = 'manifest.json'
TRACE_DIRNAME = 'traces'

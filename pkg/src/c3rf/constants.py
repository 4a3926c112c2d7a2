"""/c3rf/src/c3rf/constants.py
Package-wide constants and defaults.
"""

TOOL_NAME = "c3rf"
TOOL_VERSION = "0.1.0"

# JSON document header
FORMAT_VERSION = 1

# Largest configuration space the enumeration oracles will walk.
ENUMERATION_CAP = 2 ** 20

# Synthetic potentials are drawn from Uniform[DEFAULT_POTENTIAL_LOW, 0].
DEFAULT_POTENTIAL_LOW = -5.0

# Belief propagation
DEFAULT_MAX_ITERATIONS = 200
DEFAULT_TOLERANCE = 1e-8
DEFAULT_LOOPY_DAMPING = 0.5

# Tuning grids
DEFAULT_LAMBDAS = (0.05, 0.1, 0.2, 0.5, 1.0)
DEFAULT_RADIUS_FRACTIONS = (0.0, 0.05, 0.1, 0.25, 0.5, 1.0)
DEFAULT_TEMPERATURES = (0.5, 1.0, 2.0, 5.0)

# Temperatures for the rank-correlation and marginal-export sweeps
SWEEP_TEMPERATURES = (0.5, 1.0, 2.0)

# Sample counts for the mass-estimation sweep
DEFAULT_SAMPLE_COUNTS = (10, 100, 1000, 10000)

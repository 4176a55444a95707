# Defaults for the optimizer, the repair operators and the harness.
# To overwrite these settings create a config.py file next to this one
# and redefine the constants you want to change.

# evolutionary search
POPULATION_SIZE = 100
TRUNCATION_RATE = 0.2
CONFIDENCE_LEVEL = 0.99
# Gibbs chain length is GIBBS_SWEEP_MULTIPLIER * |x| single-site updates
GIBBS_SWEEP_MULTIPLIER = 1000
ITERATION_BUDGET = 10
STAGNATION_WINDOW = None
ELITISM = True
CACHE_FITNESS = True
REPAIR = True

# GA baseline
GA_CROSSOVER_RATE = 0.9
GA_MUTATION_RATE = 0.1
GA_TRUNCATION_RATE = 0.6

# fitness assigned to candidates that cannot be simulated
# (only reachable when repair is disabled)
INFEASIBLE_PENALTY = 1e12

# repair operators
# joint code used for active joints that no type rule forces
DEFAULT_JOINT_CODE = 1
# node budget for a single CP search, None means unlimited
CP_NODE_BUDGET = 200000

# harness
# None means os.cpu_count()
JOBS = None
BASE_SEED = 0
OUTPUT_DIR = "./out"

LOG_LEVEL = "INFO"
LOG_FORMAT = "%(asctime)s %(levelname)s %(name)s: %(message)s"

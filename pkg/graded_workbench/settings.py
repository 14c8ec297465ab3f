import os
import json

# Ground field
WORKBENCH_CHAR = int(os.environ.get("WORKBENCH_CHAR", "32003"))

# Randomness and genericity
WORKBENCH_SEED = int(os.environ.get("WORKBENCH_SEED", "0"))
WORKBENCH_TRIALS = int(os.environ.get("WORKBENCH_TRIALS", "2"))
WORKBENCH_GENERICITY_RETRIES = int(os.environ.get("WORKBENCH_GENERICITY_RETRIES", "3"))
WORKBENCH_SATURATION_ROUNDS = int(os.environ.get("WORKBENCH_SATURATION_ROUNDS", "50"))

# Pipeline
WORKBENCH_ORDER = os.environ.get("WORKBENCH_ORDER", "degrevlex")
WORKBENCH_ORACLE = os.environ.get("WORKBENCH_ORACLE", "on").lower() not in ("0", "off", "false", "no")
WORKBENCH_LOG_LEVEL = os.environ.get("WORKBENCH_LOG_LEVEL", "INFO")

# Paths
WORKBENCH_DATA_DIR = os.environ.get("WORKBENCH_DATA_DIR", "./data")
WORKBENCH_SEARCH_SINK = os.environ.get(
    "WORKBENCH_SEARCH_SINK", os.path.join(WORKBENCH_DATA_DIR, "witnesses.jsonl")
)
WORKBENCH_SEARCH_DB = os.environ.get(
    "WORKBENCH_SEARCH_DB", os.path.join(WORKBENCH_DATA_DIR, "witnesses.db")
)
WORKBENCH_SEARCH_WORKERS = int(os.environ.get("WORKBENCH_SEARCH_WORKERS", "2"))


def get_env_dict(var_name, default):
    val = os.environ.get(var_name)
    if val:
        try:
            return json.loads(val)
        except json.JSONDecodeError:
            pass
    return default


# Default search space for `graded_workbench search`, overridable as JSON
SEARCH_SPACE = get_env_dict(
    "WORKBENCH_SEARCH_SPACE",
    {
        "degree": 5,
        "terms": 2,
        "coefficients": [1],
        "fixed_ends": True,
    },
)

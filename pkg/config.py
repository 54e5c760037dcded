"""
Configuration for the group representability toolkit.
Values come from the environment (optionally a .env file next to this module),
prefixed GROUPREP_, and fall back to the defaults below.
"""

import os
from pathlib import Path

from dotenv import load_dotenv

# Base directory - keeps sample paths stable wherever the CLI is launched from
BASE_DIR = Path(__file__).resolve().parent
DATA_DIR = BASE_DIR / 'data'

load_dotenv(BASE_DIR / '.env')

ENV_PREFIX = 'GROUPREP_'


def _env_int(name: str, default: int) -> int:
    raw = os.environ.get(ENV_PREFIX + name, '').strip()
    if not raw:
        return default
    try:
        value = int(raw)
    except ValueError:
        raise ValueError(f"{ENV_PREFIX}{name} must be an integer, got {raw!r}")
    if value < 1:
        raise ValueError(f"{ENV_PREFIX}{name} must be positive, got {value}")
    return value


# ============= SEARCH CAPS =============
# Exact backtracking isomorphism / automorphism search
ISO_SEARCH_CAP = _env_int('ISO_SEARCH_CAP', 32)
# Exhaustive closure oracles exist only for verification
CLOSURE_DEGREE_CAP = _env_int('CLOSURE_DEGREE_CAP', 8)
# Brute-force representability oracle
ORACLE_AUT_CAP = _env_int('ORACLE_AUT_CAP', 100000)
ORACLE_VERTEX_CAP = _env_int('ORACLE_VERTEX_CAP', 10)
# Homomorphism search into S_n
PERM_REP_DEGREE_CAP = _env_int('PERM_REP_DEGREE_CAP', 9)
# Cayley tables built from permutation groups, homomorphism sources
GROUP_ORDER_CAP = _env_int('GROUP_ORDER_CAP', 5000)

# ============= LOGGING =============
LOG_LEVEL = os.environ.get(ENV_PREFIX + 'LOG_LEVEL', 'WARNING').upper()
LOG_FORMAT = '%(levelname)s %(name)s: %(message)s'

import os
import logging
from dotenv import load_dotenv

# Load environment variables from .env file
load_dotenv()

LOG_LEVEL = os.getenv("LOG_LEVEL", "INFO").upper()

# Nondeterministic fan-out per step / per enumerate_outputs call
FANOUT_CAP = int(os.getenv("ARM_FANOUT_CAP", "4096"))

# Largest automaton we are willing to materialize
STATE_CEILING = int(os.getenv("ARM_STATE_CEILING", "200000"))

# Passes over more letters run from their step tables; automata built on demand
EAGER_ALPHABET = int(os.getenv("ARM_EAGER_ALPHABET", "256"))

# CYK: one machine symbol per subset of nonterminals
ALPHABET_CEILING = int(os.getenv("ARM_ALPHABET_CEILING", str(2 ** 16)))

GREIBACH_SHIFT = int(os.getenv("ARM_GREIBACH_SHIFT", "8"))

# Largest pad register read_and_boost may hand out
PAD_CEILING = int(os.getenv("ARM_PAD_CEILING", "5000000"))

DEFAULT_FUEL_BASE = int(os.getenv("ARM_DEFAULT_FUEL_BASE", "1000000"))
DEFAULT_FUEL_SCALE = int(os.getenv("ARM_DEFAULT_FUEL_SCALE", "64"))

PROFILE_SEEDS = int(os.getenv("ARM_PROFILE_SEEDS", "5"))

DATABASE_URL = os.getenv("DATABASE_URL", "sqlite:///./armkit.db")


def default_fuel(n: int) -> int:
    """Instruction budget for an input of size n."""
    return DEFAULT_FUEL_SCALE * n * n + DEFAULT_FUEL_BASE


def configure_logging() -> None:
    logging.basicConfig(level=getattr(logging, LOG_LEVEL, logging.INFO))

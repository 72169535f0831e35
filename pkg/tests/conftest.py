import json
import math
from pathlib import Path

import pytest

GOLDEN_PATH = Path(__file__).parent / "data" / "golden.json"


@pytest.fixture(scope="session")
def golden():
    """Golden entries keyed by name; values at 30 significant digits."""
    with open(GOLDEN_PATH) as fh:
        entries = json.load(fh)
    return {e["key"]: e for e in entries}


@pytest.fixture(scope="session")
def golden_ln(golden):
    """Accessor for (sign, ln_mag, tol_rel) of a golden entry."""

    def get(key: str):
        e = golden[key]
        if not e.get("finite", True):
            return None
        sign = e["sign"]
        ln = float(e["value_ln_mag"]) if sign != 0 else -math.inf
        return sign, ln, float(e.get("tol_rel", 1e-8))

    return get

import sys
from pathlib import Path

from hypothesis import settings

SRC = Path(__file__).parent / "src"
if str(SRC) not in sys.path:
    sys.path.insert(0, str(SRC))

settings.register_profile("deterministic", derandomize=True, max_examples=100)
settings.load_profile("deterministic")

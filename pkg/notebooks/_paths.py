"""Where the example scripts find the bundled zero table."""
from pathlib import Path

ZEROS = Path(__file__).resolve().parents[1] / "data" / "zeros_33k.txt"

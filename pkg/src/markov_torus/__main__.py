"""``python -m markov_torus`` entry point."""

import sys

from .cli import main

if __name__ == "__main__":
    sys.exit(main())

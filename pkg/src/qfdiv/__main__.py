"""Entry point for ``python -m qfdiv``."""

import sys

from .cli import main

sys.exit(main())

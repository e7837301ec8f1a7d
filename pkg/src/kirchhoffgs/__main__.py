"""Allow ``python -m kirchhoffgs``."""

import sys

from .cli import main

sys.exit(main())

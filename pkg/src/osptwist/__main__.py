"""python -m osptwist: run the verification suites."""

import sys

from .cli import main

sys.exit(main())

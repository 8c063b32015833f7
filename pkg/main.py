#!/usr/bin/env python
"""
wardChain entry point.

Equivalent to the installed `ward-chain` script.
"""

import sys
from pathlib import Path

sys.path.insert(0, str(Path(__file__).parent / "src"))

from wardChain.cli import main  # noqa: E402

if __name__ == "__main__":
    sys.exit(main())

"""Let ``python -m profilekit`` behave exactly like the installed script."""

import sys

from profilekit.cli import main

if __name__ == "__main__":
    sys.exit(main())

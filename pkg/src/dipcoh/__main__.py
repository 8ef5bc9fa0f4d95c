"""Allow `python -m dipcoh` to run the command-line interface."""

import sys

from dipcoh.cli import main

if __name__ == "__main__":
    sys.exit(main())

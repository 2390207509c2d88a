"""
Main Application - CCDM command-line entry point
Usage: python main.py {quantize,encode,decode,sweep,selftest} ...
"""
import sys

import config  # noqa: F401  (loads .env and configures logging)
from cli.commands import main

if __name__ == "__main__":
    sys.exit(main())

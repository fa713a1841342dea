"""Run the command line front end as `python -m lpa_forge`."""

import sys

from .harness_cli import main

if __name__ == "__main__":
    sys.exit(main())

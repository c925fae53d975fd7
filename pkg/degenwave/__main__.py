import sys

from degenwave.cli import main

sys.exit(main())

import sys

from .scripts.telecanon_cli import main

sys.exit(main())

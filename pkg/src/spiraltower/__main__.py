import sys

from spiraltower.cli import main

sys.exit(main())

import sys

from tilehull.cli import main

sys.exit(main())

import sys

from linstark.cli import main

sys.exit(main())

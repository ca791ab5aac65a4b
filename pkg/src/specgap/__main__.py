import sys

from specgap.cli import main

sys.exit(main())

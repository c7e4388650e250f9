import sys

from toruslayer.cli import main

sys.exit(main())

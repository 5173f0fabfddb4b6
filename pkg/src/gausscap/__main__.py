import sys

from gausscap.cli import main

sys.exit(main())

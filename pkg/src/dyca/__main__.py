import sys

from dyca.cli import main

sys.exit(main())

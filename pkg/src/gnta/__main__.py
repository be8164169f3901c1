import sys

from gnta.cli import main

sys.exit(main())

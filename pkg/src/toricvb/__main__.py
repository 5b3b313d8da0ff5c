import sys

from toricvb.cli import main

sys.exit(main())

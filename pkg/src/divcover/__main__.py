import sys

from divcover.cli import main

sys.exit(main())

import sys

from regretfear.cli import main

sys.exit(main())

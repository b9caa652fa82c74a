import sys

from coverings.cli import main

sys.exit(main())

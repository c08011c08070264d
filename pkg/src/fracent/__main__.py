import sys

from fracent.cli import main

sys.exit(main())

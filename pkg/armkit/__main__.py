import sys

from armkit.cli.main import main

sys.exit(main())

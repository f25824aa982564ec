import sys

from cohtele.cli import main

sys.exit(main())

import sys

from taffin.main import main

sys.exit(main())

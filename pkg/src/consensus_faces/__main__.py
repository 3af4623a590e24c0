import sys

from consensus_faces.cli import main

sys.exit(main())

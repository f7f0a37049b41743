"""
Allows ``python3 -m privex.folr`` to run the ``folr`` command line.
"""
import sys

from privex.folr.cli import main

if __name__ == '__main__':
    sys.exit(main())

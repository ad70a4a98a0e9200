#!/usr/bin/env python

"""Command line driver for the Choose the Leader dynamics and its kinetic limit."""

import sys
from topokinetic.cli import main

if __name__ == '__main__':
    sys.exit(main())

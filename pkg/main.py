#!/usr/bin/env python3
"""
RP_RCT_Toolkit - command line entry point
"""

import os
import sys

# Add the src directory to the Python path
sys.path.insert(0, os.path.join(os.path.dirname(__file__), 'src'))

from RP_RCT_Toolkit.cli import main

if __name__ == "__main__":
    sys.exit(main())

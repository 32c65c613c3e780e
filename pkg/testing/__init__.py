# This file makes the 'testing' directory a Python package.

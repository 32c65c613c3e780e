import sys

from paramrls_lab._version import __version__


def main():
    """Entry point function for the paramrls-lab command."""
    from paramrls_lab import cli
    sys.exit(cli.main())


__all__ = ['main', '__version__']

#!/usr/bin/env python
"""lorval command-line entry point."""
import os
import sys


def main():
    """Run a lorval subcommand."""
    os.environ.setdefault('LORVAL_ENVIRONMENT', 'dev')
    from cli.main import main as cli_main
    return cli_main(sys.argv[1:])


if __name__ == '__main__':
    sys.exit(main())

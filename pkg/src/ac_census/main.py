"""
Main entry point for the AC census toolkit.
"""

import sys

from .cli import run_command


def main() -> int:
    """Console entry point; returns the process exit code."""
    try:
        return run_command(sys.argv[1:])
    except KeyboardInterrupt:
        print("\nInterrupted; completed shards are kept and skipped on rerun.", file=sys.stderr)
        return 130


if __name__ == "__main__":
    sys.exit(main())

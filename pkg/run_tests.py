#!/usr/bin/env python3
"""
Test Runner for the AC census toolkit

Wraps pytest invocations by marker. The default selection excludes tests
marked ``slow`` (full length-12 census, extended-budget genetic search).
"""

import argparse
import os
import shutil
import subprocess
import sys
from pathlib import Path
from typing import List

COVERAGE_ARGS = ["--cov=src/ac_census", "--cov-report=term-missing"]


def run_command(cmd: List[str], description: str) -> bool:
    """Run a command and return success status."""
    print(f"\n{'=' * 60}")
    print(f"Running: {description}")
    print(f"Command: {' '.join(cmd)}")
    print(f"{'=' * 60}")

    try:
        subprocess.run(cmd, check=True)
        print(f"{description} completed successfully")
        return True
    except subprocess.CalledProcessError as e:
        print(f"{description} failed with exit code {e.returncode}")
        return False
    except FileNotFoundError:
        print(f"Command not found: {cmd[0]}")
        return False


def pytest_command(marker: str, verbose: bool, coverage: bool, workers: int) -> List[str]:
    cmd = [sys.executable, "-m", "pytest", "tests/", "-m", marker]
    if verbose:
        cmd.append("-v")
    if coverage:
        cmd.extend(COVERAGE_ARGS)
    if workers > 1:
        cmd.extend(["-n", str(workers)])
    return cmd


def run_linting() -> bool:
    """Run code linting."""
    success = True
    if not run_command([sys.executable, "-m", "flake8", "src/", "tests/"], "Flake8 Linting"):
        success = False
    if not run_command([sys.executable, "-m", "black", "--check", "src/", "tests/"], "Black Format Check"):
        success = False
    if not run_command([sys.executable, "-m", "mypy", "src/"], "MyPy Type Checking"):
        success = False
    return success


def clean_test_artifacts() -> bool:
    """Clean up test artifacts."""
    for artifact in ["htmlcov", "coverage.xml", ".coverage", ".pytest_cache"]:
        path = Path(artifact)
        if path.is_dir():
            shutil.rmtree(path)
        elif path.exists():
            path.unlink()
    return True


def main():
    """Main test runner function."""
    parser = argparse.ArgumentParser(description="AC census test runner")

    parser.add_argument("--unit", action="store_true", help="Run unit tests only")
    parser.add_argument("--integration", action="store_true", help="Run integration and e2e tests")
    parser.add_argument("--slow", action="store_true", help="Run the long census and search tests")
    parser.add_argument("--all", action="store_true", help="Run every test, slow ones included")
    parser.add_argument("--marker", type=str, help="Run tests with specific marker expression")
    parser.add_argument("--lint", action="store_true", help="Run code linting")

    parser.add_argument("--verbose", "-v", action="store_true", help="Verbose output")
    parser.add_argument("--no-coverage", action="store_true", help="Disable coverage reporting")
    parser.add_argument("--workers", "-n", type=int, default=1, help="pytest-xdist workers")
    parser.add_argument("--clean", action="store_true", help="Clean test artifacts")

    args = parser.parse_args()
    os.chdir(Path(__file__).parent)
    coverage = not args.no_coverage

    if args.clean:
        clean_test_artifacts()

    selections = []
    if args.unit:
        selections.append(("unit and not slow", "Unit Tests"))
    if args.integration:
        selections.append(("(integration or e2e) and not slow", "Integration Tests"))
    if args.slow:
        selections.append(("slow", "Slow Tests"))
    if args.all:
        selections.append(("", "All Tests"))
    if args.marker:
        selections.append((args.marker, f"Tests with marker '{args.marker}'"))
    if not selections and not args.lint:
        selections.append(("not slow", "Default Tests"))

    success = True
    for marker, description in selections:
        cmd = pytest_command(marker, args.verbose, coverage, args.workers)
        if not marker:
            cmd = [c for c in cmd if c not in ("-m", "")]
        if not run_command(cmd, description):
            success = False

    if args.lint and not run_linting():
        success = False

    print(f"\n{'=' * 60}")
    print("All tests and checks completed successfully!" if success else "Some tests or checks failed!")
    return 0 if success else 1


if __name__ == "__main__":
    sys.exit(main())

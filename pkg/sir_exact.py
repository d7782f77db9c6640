#!/usr/bin/env python3
"""Run the sir-exact command line from a source checkout: python sir_exact.py simulate ..."""

from cli.main import run

if __name__ == "__main__":
    run()

"""Module entry point so `python -m risuav` behaves like the `risuav` script."""

from .cli import main

if __name__ == "__main__":
    raise SystemExit(main())

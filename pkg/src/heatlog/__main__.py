"""Main entry point for the heatlog package."""

from .cli import main

if __name__ == "__main__":
    main()

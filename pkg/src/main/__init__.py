"""Command-line entry point (`python -m src.main.app`)."""

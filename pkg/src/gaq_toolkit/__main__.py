"""Entry point for `python -m gaq_toolkit`."""
from gaq_toolkit.cli.main import app

if __name__ == "__main__":
    app()

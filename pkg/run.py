# run.py
import os
import sys
from pathlib import Path

from dotenv import load_dotenv

# Load environment variables from .env file before the config module reads them
load_dotenv()


def setup_directories():
    """Create the artifact directory the pipeline writes into."""
    directory = Path(os.getenv("LAURENTNET_OUTPUT_DIR", "output"))
    try:
        directory.mkdir(parents=True, exist_ok=True)
    except OSError as e:
        print(f"Failed to create {directory}: {e}", file=sys.stderr)


if __name__ == "__main__":
    setup_directories()

    from laurentnet.cli.main import main

    sys.exit(main())

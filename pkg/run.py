import sys
from pathlib import Path

# put src/ on the import path
sys.path.insert(0, str(Path(__file__).parent / "src"))

from swekit.app.cli import main

if __name__ == "__main__":
    raise SystemExit(main())

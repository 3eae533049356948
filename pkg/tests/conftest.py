import pathlib
import sys

# allow running pytest from a fresh checkout without installing first
sys.path.insert(0, str(pathlib.Path(__file__).resolve().parent.parent / "src"))

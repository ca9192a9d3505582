import uuid
from pathlib import Path
from typing import Union


class Paths:
    """
    Test folders, resolved from a test module path.

    Attributes
    ----------
    root:
        Tests directory
    data:
        Static test data
    yaml:
        YAML fixtures for the recursive loader and hand model files
    tmp:
        Scratch outputs, created on first use
    """

    def __init__(self, file: Union[str, Path]):
        self.root = Path(file).parent
        self.data = self.root / "data"
        self.yaml = self.data / "yaml"
        self.tmp = self.root / "tmp"
        self.tmp.mkdir(parents=True, exist_ok=True)

    def unique_dir(self, prefix: str) -> Path:
        """Fresh scratch directory path, not created"""
        return self.tmp / f"{prefix}_{uuid.uuid4().hex}"

    def log(self, name: str) -> Path:
        """Correction log path under the scratch directory"""
        return self.tmp / "logs" / f"{name}.jsonl"

import subprocess
import sys
from pathlib import Path

import pytest

ROOT = Path(__file__).resolve().parent.parent


@pytest.mark.parametrize("module", [
    "services.group",
    "services.roots",
    "services.rings",
    "services.interp",
    "services.suites",
    "models",
    "models.schemas",
    "cli",
    "main",
])
def test_module_imports_first_in_fresh_interpreter(module):
    result = subprocess.run([sys.executable, "-c", f"import {module}"], cwd=ROOT,
                            capture_output=True, text=True)
    assert result.returncode == 0, result.stderr

import os
import shutil

import pytest


@pytest.fixture(scope="session")
def cli():
    path = os.environ.get("FRACDIFF_CLI") or shutil.which("fracdiff")
    if not path:
        pytest.skip("fracdiff executable not available")
    return path

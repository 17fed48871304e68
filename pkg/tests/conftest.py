import json
import os

import pytest


@pytest.fixture(scope="session")
def golden():
    path = os.path.join(os.path.dirname(__file__), "golden.json")
    with open(path) as fh:
        return json.load(fh)

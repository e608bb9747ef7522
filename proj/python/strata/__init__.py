"""Python access to the strata numerical layer."""

import json

from ._strata import *  # noqa: F401,F403
from ._strata import run_suite_json as _run_suite_json


def verify(suite, **overrides):
    """Run one verification suite and return the report as a dict."""
    return json.loads(_run_suite_json(suite, {k: str(v) for k, v in overrides.items()}))

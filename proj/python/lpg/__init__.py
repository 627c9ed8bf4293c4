"""Littlewood-Paley decompositions and Besov norms on model graded groups."""

import json
import os

from ._lpg import *  # noqa: F401,F403
from ._lpg import run_config as _run_config


def run(config):
    """Run an experiment from a dict or a path to a JSON config; returns the manifest dict."""
    if isinstance(config, (str, os.PathLike)):
        with open(config, encoding="utf-8") as fh:
            config = json.load(fh)
    return json.loads(_run_config(json.dumps(config)))

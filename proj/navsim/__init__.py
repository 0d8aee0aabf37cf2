"""Procedural navigation worlds, proxy rollouts, and metrics.

Thin wrapper over the compiled _navsim module: configs go in as dicts,
results come back as dicts; the JSON-string plumbing stays internal.
"""

import json as _json

from navsim._navsim import (  # noqa: F401
    NavsimError,
    World,
    beta_log_prob,
    beta_sample,
    load_world,
    spl,
)
from navsim import _navsim as _core

__all__ = [
    "NavsimError",
    "World",
    "beta_log_prob",
    "beta_sample",
    "filter_terrain",
    "generate_world",
    "load_world",
    "rollout",
    "run_scripted_episode",
    "save_world",
    "spl",
    "wfc_generate",
]


def _cfg(config):
    return _json.dumps(config) if config else ""


def generate_world(config=None):
    return _core.generate_world(_cfg(config))


def save_world(world, out_dir, config=None):
    _core.save_world(world, _cfg(config), out_dir)


def wfc_generate(config=None):
    return _core.wfc_generate(_cfg(config))


def rollout(world, config=None, episodes=10, seed=0, threads=1):
    return _json.loads(_core.rollout(world, _cfg(config), episodes, seed, threads))


def run_scripted_episode(world, config=None, seed=0):
    lines = _core.run_scripted_episode(world, _cfg(config), seed).splitlines()
    return [_json.loads(line) for line in lines]


def filter_terrain(config=None, generations=10):
    return _json.loads(_core.filter_terrain(_cfg(config), generations))

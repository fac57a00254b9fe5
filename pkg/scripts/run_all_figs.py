"""Regenerate the data behind every figure config into ``out/`` (or argv[1])."""
import sys
from pathlib import Path

from wqed import cli
from wqed.config import load_config

ROOT = Path(__file__).resolve().parents[1]


def main(out="out"):
    failures = 0
    for config in sorted((ROOT / "figs").glob("*.toml")):
        task = load_config(config, task=None).task
        code = cli.main([task, "--config", str(config), "--out", str(out)])
        failures += code != 0
    return 1 if failures else 0


if __name__ == "__main__":
    sys.exit(main(*sys.argv[1:]))

import csv
import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from slrt import cli


def _read_sweep(path):
    rows = []
    with open(path) as fh:
        for rec in csv.DictReader(fh):
            row = {}
            for key, val in rec.items():
                if key == "status":
                    row[key] = val
                elif key == "seed":
                    row[key] = int(val)
                else:
                    row[key] = float(val)
            rows.append(row)
    return rows


@pytest.fixture(scope="session")
def preset_sweeps(tmp_path_factory):
    """Full CLI sweeps of both presets, shared by the acceptance tests."""
    out = tmp_path_factory.mktemp("sweeps")
    data = {}
    for preset in ("as1", "as20"):
        config = cli.build_run_config(dict(cli.PRESETS[preset]), out / preset)
        path = cli.cmd_sweep(config)
        data[preset] = {"config": config, "rows": _read_sweep(path), "path": path}
    return data

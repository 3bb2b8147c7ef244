"""End-to-end: preset sweep through the batch interface plus SI heating.

Equivalent shell commands:

    slrt sweep  --preset as20 --out out/as20
    slrt report --preset as20 --out out/as20

The sweep CSV carries, per (u, sigma, seed): the band averages, the
network average of the physical / untextured / matched-ensemble
matrices, the sparsity, the hopping estimate, and both absorption
coefficients.  The report adds provenance and the cold-atom scenario in
SI units.
"""

import csv
import json
import tempfile
from pathlib import Path

from slrt import cli, experiment_estimate

out = Path(tempfile.mkdtemp()) / "as20"
config = cli.build_run_config(dict(cli.PRESETS["as20"]), out)
sweep_path = cli.cmd_sweep(config)
print(f"sweep written to {sweep_path}")
print(f"{'u':>10} {'q':>12} {'slrt':>12} {'g_lrt':>12} {'g_slrt':>12}")
for row in csv.DictReader(sweep_path.open()):
    print(f"{float(row['u']):10.1e} {float(row['q']):12.3e} "
          f"{float(row['slrt']):12.3e} {float(row['g_lrt']):12.3e} "
          f"{float(row['g_slrt']):12.3e}")

report_path = cli.cmd_report(config)
summary = json.loads(report_path.read_text())
print(f"\nreport written to {report_path}")
print(f"config hash {summary['config_hash'][:16]}..., "
      f"{len(summary['emitted_files'])} files emitted")

est = experiment_estimate()
print("\ncold-atom scenario (Rb-85, 10 uK, 200 um x 10 um trap):")
print(f"  thermal velocity   {est['thermal_velocity_m_s']*1e3:.1f} mm/s")
print(f"  level spacing      {est['mean_spacing_J']:.2e} J "
      f"({est['mean_spacing_over_hbar_hz']:.1f} /s over hbar)")
print(f"  G_LRT              {est['g_lrt_si']:.2e} J^2 s/m^2")
print(f"  heating rate       {est['heating_rate_J_s']:.2e} J/s "
      f"= {est['heating_rate_mK_s']:.3f} mK/s")

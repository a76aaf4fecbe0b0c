"""Smoke test for the projcool extension module.

Build and install first, e.g. ``maturin develop --release`` or
``pip install . --no-build-isolation``, then run ``python python/smoke_test.py``.
"""

import math
import tempfile
from pathlib import Path

import projcool


def main():
    energy, amplitudes = projcool.ground_state("model_1a", half_extent=200, interior_radius=5)
    assert abs(energy - (1.0 - math.sqrt(2.0))) < 1e-4, energy
    assert abs(sum(abs(a) ** 2 for a in amplitudes) - 1.0) < 1e-10

    assert projcool.localized_count("model_1b") == 4
    assert projcool.localized_count("model_1b", kinetic_scale=10.0) <= 1

    passed, deviation, shift = projcool.qubit_equivalence("model_2", 2)
    assert passed and deviation < 1e-12 and abs(shift + 1.0) < 1e-12

    overlaps = projcool.evolve("model_1b", method="trotter", initial="spread")
    assert len(overlaps) == 41 and max(overlaps[1:]) >= 0.94, max(overlaps)

    report = projcool.run_figure("fig2a", eps=0.0)
    assert report.passed, report.checks
    assert "ae_full_point" in report.table_names
    lines = report.table("pc_full_point_eps0").splitlines()
    assert lines[0] == "# format: projcool-table/1"
    assert lines[1] == "step,t,overlap,norm,energy"

    with tempfile.TemporaryDirectory() as tmp:
        written = report.write(tmp)
        assert Path(tmp, "manifest.toml").exists() and len(written) == len(report.table_names) + 1

    config = '[model]\npreset = "model_1b"\nhalf_extent = 12\n'
    custom = projcool.run_config('experiment = "custom"\nsteps = 5\n' + config)
    assert custom.table_names == ["run"]

    try:
        projcool.run_config('experiment = "custom"\ndt = -1.0\n' + config)
    except ValueError:
        pass
    else:
        raise AssertionError("negative dt accepted")

    print("smoke test passed:", report)


if __name__ == "__main__":
    main()

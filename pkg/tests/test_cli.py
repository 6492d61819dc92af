"""
Copyright 2026 MISHydro Contributors

   Licensed under the Apache License, Version 2.0 (the "License");
   you may not use this file except in compliance with the License.
   You may obtain a copy of the License at

       http://www.apache.org/licenses/LICENSE-2.0

   Unless required by applicable law or agreed to in writing, software
   distributed under the License is distributed on an "AS IS" BASIS,
   WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
   See the License for the specific language governing permissions and
   limitations under the License.

===
"""

from pathlib import Path

import configobj
import numpy as np
import pandas as pd
import pytest

from mishydro import __version__
from mishydro.cli import EXIT_FAILED, EXIT_INPUT, EXIT_OK, main

SMALL_RUN = (
    "[simulation]\ncells = 40\nend_time = 0.05\noutput_cadence = 5\nrun_name = small\n"
)
PULSE_RUN = (
    "[simulation]\ncells = 40\nend_time = 0.05\ninitial_condition = pulse\n"
    "pulse_amplitude = 0.05\nrun_name = pulse\n"
)
CONFIGS = Path(__file__).resolve().parents[1] / "configs"


def write(tmp_path, text: str):
    path = tmp_path / "run.cfg"
    path.write_text(text)
    return str(path)


class TestParser:
    def test_version(self, capsys):
        assert main(["--version"]) == EXIT_OK
        assert __version__ in capsys.readouterr().out

    def test_missing_command(self):
        assert main([]) == EXIT_INPUT

    def test_unknown_flag(self):
        assert main(["speeds", "--bogus"]) == EXIT_INPUT

    @pytest.mark.parametrize("jobs", ["0", "-2"])
    def test_invalid_worker_count(self, tmp_path, jobs):
        out = tmp_path / "out"
        code = main(["check-eos", "--samples", "3", "--jobs", jobs, "--out", str(out)])
        assert code == EXIT_INPUT
        assert not out.exists()


class TestCheckEos:
    def test_default_box_passes(self, tmp_path):
        assert main(["check-eos", "--samples", "20", "--out", str(tmp_path), "-q"]) == EXIT_OK
        frame = pd.read_csv(tmp_path / "check_eos.csv")
        assert len(frame) == 20
        assert set(frame["status"]) == {"pass"}

    def test_acausal_box_fails(self, tmp_path):
        config = write(tmp_path, "[sampling]\neps_range = 1.0, 1.05\n")
        out = tmp_path / "out"
        code = main(["check-eos", "--config", config, "--samples", "5", "--out", str(out)])
        assert code == EXIT_FAILED
        frame = pd.read_csv(out / "check_eos.csv")
        assert set(frame["status"]) == {"condition-failed"}

    def test_convex_entropy_fails(self, tmp_path):
        config = str(CONFIGS / "quadratic.cfg")
        code = main(["check-eos", "--config", config, "--samples", "5", "--out", str(tmp_path)])
        assert code == EXIT_FAILED
        frame = pd.read_csv(tmp_path / "check_eos.csv")
        assert "pass" not in set(frame["status"])

    def test_same_seed_same_bytes(self, tmp_path):
        for name, jobs in (("a", "1"), ("b", "2")):
            out = tmp_path / name
            main(["check-eos", "--samples", "6", "--seed", "9", "--jobs", jobs, "--out", str(out)])
        assert (tmp_path / "a" / "check_eos.csv").read_bytes() == (
            tmp_path / "b" / "check_eos.csv"
        ).read_bytes()


class TestSpeeds:
    def test_no_samples(self, tmp_path):
        assert main(["speeds", "--samples", "0", "--out", str(tmp_path)]) == EXIT_OK
        frame = pd.read_csv(tmp_path / "speeds.csv")
        assert frame.empty
        assert "lambda_6" in frame.columns

    def test_reference_row_first(self, tmp_path):
        config = write(tmp_path, "[sampling]\ncovectors = 3\n")
        code = main(["speeds", "--config", config, "--samples", "3", "--out", str(tmp_path)])
        assert code == EXIT_OK
        frame = pd.read_csv(tmp_path / "speeds.csv")
        assert len(frame) == 3
        first = frame.iloc[0]
        assert bool(first["at_rest"])
        assert first["eps"] == 3.0
        assert first["lambda_6"] == pytest.approx(np.sqrt(13.0 / 15.0), rel=1e-6)
        assert np.all(frame["parity_defect"][frame["at_rest"]] < 1e-6)
        assert frame["causal"].all()

    def test_acausal_reference(self, tmp_path):
        config = write(tmp_path, "[sampling]\ncovectors = 2\nreference_state = 1.0, 1.0, 0.0\n")
        code = main(["speeds", "--config", config, "--samples", "1", "--out", str(tmp_path)])
        assert code == EXIT_FAILED


class TestHugoniot:
    def test_loci_files(self, tmp_path):
        config = write(tmp_path, "[hugoniot]\nsteps = 15\nstep_size = 2e-3\n")
        assert main(["hugoniot", "--config", config, "--out", str(tmp_path)]) == EXIT_OK
        for family in (1, 6):
            frame = pd.read_csv(tmp_path / f"hugoniot_family{family}.csv")
            assert set(frame["kind"]) == {"point", "fit"}
            assert sorted(frame["branch"].unique()) == [-1, 1]
            points = frame[frame["kind"] == "point"]
            assert len(points) == 2 * 16
            assert (points["family"] == family).all()

    def test_non_simple_family(self, tmp_path):
        config = write(tmp_path, "[hugoniot]\nfamilies = 3\nsteps = 2\n")
        assert main(["hugoniot", "--config", config, "--out", str(tmp_path)]) == EXIT_INPUT


class TestSimulate:
    def test_outputs(self, tmp_path):
        config = write(tmp_path, SMALL_RUN)
        out = tmp_path / "out"
        assert main(["simulate", "--config", config, "--out", str(out)]) == EXIT_OK
        manifest = configobj.ConfigObj(str(out / "small.manifest"))
        assert manifest["mishydro"]["version"] == __version__
        assert len(manifest["mishydro"]["config_hash"]) == 64
        assert manifest["audit"]["entropy_non_decreasing"] == "True"
        steps = int(manifest["audit"]["steps"])
        assert (out / "small_0.csv").is_file()
        assert (out / f"small_{steps}.csv").is_file()

    def test_invalid_config_writes_nothing(self, tmp_path):
        config = write(tmp_path, "[simulation]\ncfl = 1.5\n")
        out = tmp_path / "out"
        assert main(["simulate", "--config", config, "--out", str(out)]) == EXIT_INPUT
        assert not out.exists()

    def test_inadmissible_initial_state(self, tmp_path):
        config = write(tmp_path, "[simulation]\nleft_state = 0, 0, 0, -1, 1, 0\n")
        out = tmp_path / "out"
        assert main(["simulate", "--config", config, "--out", str(out)]) == EXIT_INPUT
        assert not any(out.iterdir())

    @pytest.mark.slow
    def test_audit(self, tmp_path):
        config = write(tmp_path, PULSE_RUN)
        assert main(["simulate", "--config", config, "--audit", "--out", str(tmp_path)]) == EXIT_OK
        frame = pd.read_csv(tmp_path / "pulse_entropy_audit.csv")
        assert list(frame["cells"]) == [40, 80, 160]
        manifest = configobj.ConfigObj(str(tmp_path / "pulse.manifest"))
        assert manifest["audit"]["entropy_defect_decreasing"] == "True"
        assert manifest["audit"]["entropy_max_defect_decreasing"] in ("True", "False")


@pytest.mark.slow
def test_entropy_audit(tmp_path):
    config = write(tmp_path, PULSE_RUN)
    assert main(["entropy-audit", "--config", config, "--out", str(tmp_path)]) == EXIT_OK
    frame = pd.read_csv(tmp_path / "entropy_audit.csv")
    assert set(frame["kind"]) == {"manufactured", "solver"}

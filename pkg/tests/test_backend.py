import os
import subprocess
import sys

import pytest

CODE = "import hornpol._kernels as k; print(k.BACKEND)"


@pytest.mark.parametrize("flag, expected", [("1", "numpy"), ("true", "numpy"), ("0", "numba"), ("", "numba")])
def test_env_flag_selects_backend(flag, expected):
    env = dict(os.environ, HORNPOL_DISABLE_NUMBA=flag)
    out = subprocess.run([sys.executable, "-c", CODE], env=env, capture_output=True, text=True, check=True)
    assert out.stdout.strip() == expected


def test_numpy_backend_runs_pipeline():
    code = (
        "from hornpol.pipeline import PipelineConfig, Sweep, run_pipeline;"
        "import hornpol._kernels as k; assert k.BACKEND == 'numpy';"
        "r = run_pipeline(PipelineConfig(sweep=Sweep(300e9, 310e9)));"
        "print(r.bands[0].pos, r.bands[0].neg)"
    )
    env_np = dict(os.environ, HORNPOL_DISABLE_NUMBA="1")
    env_nb = dict(os.environ, HORNPOL_DISABLE_NUMBA="0")
    a = subprocess.run([sys.executable, "-c", code], env=env_np, capture_output=True, text=True, check=True)
    b = subprocess.run([sys.executable, "-c", code.replace("'numpy'", "'numba'")], env=env_nb,
                       capture_output=True, text=True, check=True)
    assert a.stdout == b.stdout

import pathlib
import runpy

import pytest

DEMOS = sorted((pathlib.Path(__file__).resolve().parents[1] / "demos").glob("*.py"))


@pytest.mark.parametrize("path", DEMOS, ids=lambda p: p.name)
def test_demo_runs(path, capsys):
    runpy.run_path(str(path), run_name="__main__")
    assert capsys.readouterr().out


def test_demo_specs_load():
    from kerneldyn.report import load_spec
    specs = sorted((DEMOS[0].parent / "specs").glob("*.json"))
    assert specs
    for p in specs:
        load_spec(p)

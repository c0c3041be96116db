from __future__ import annotations

from pathlib import Path

import pytest

from augcat.fileformat import parse_family, parse_system

ROOT = Path(__file__).resolve().parent.parent
DATA = ROOT / "data"

# (family file, source system, target system)
FAMILIES = {
    "trefoil-shift": ("trefoil", "trefoil-shifted"),
    "unknot-stabilisation": ("unknot", "unknot-stabilised"),
    "unknot-perturbation": ("unknot", "unknot-perturbed"),
}

_criteria: dict[int, str] = {}


def record_criterion(number: int, ok: bool, detail: str) -> None:
    line = f"criterion {number:2d}: {'PASS' if ok else 'FAIL'}  {detail}"
    _criteria[number] = line
    print(line)


def pytest_terminal_summary(terminalreporter):
    if _criteria:
        terminalreporter.section("acceptance criteria")
        for n in sorted(_criteria):
            terminalreporter.write_line(_criteria[n])


@pytest.fixture(scope="session")
def data_dir() -> Path:
    return DATA


@pytest.fixture(scope="session")
def systems() -> dict:
    return {p.stem: parse_system(p) for p in sorted((DATA / "systems").glob("*.json"))}


@pytest.fixture(scope="session")
def families(systems) -> dict:
    out = {}
    for name, (src, tgt) in FAMILIES.items():
        out[name] = (parse_family(DATA / "families" / f"{name}.json", systems[src], systems[tgt]),
                     systems[src], systems[tgt])
    return out

from pathlib import Path

import pytest

from citbdd import parse_model

MODELS_DIR = Path(__file__).resolve().parent.parent / "models"

PRINTER_TEXT = """\
[PARAMETERS]
Paper size: B4, A4, B5
Feed tray: Bypass, Tray 1, Tray 2
Paper type: Thick, Normal, Thin

[CONSTRAINTS]
"Paper size" = B4 => "Feed tray" = Bypass
"Feed tray" = Bypass => !("Paper type" = Thick)
"""


@pytest.fixture(scope="session")
def printer():
    """The running example: 3 parameters x 3 values, 2 constraints."""
    return parse_model(PRINTER_TEXT)


@pytest.fixture(scope="session")
def printer_free():
    """The printer parameters without any constraints."""
    return parse_model(PRINTER_TEXT.split("[CONSTRAINTS]")[0])


@pytest.fixture(scope="session")
def models_dir():
    return MODELS_DIR


def load_model(name):
    return parse_model((MODELS_DIR / f"{name}.model").read_text(encoding="utf-8"))

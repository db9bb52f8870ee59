from __future__ import annotations

from pathlib import Path

import pytest

# Surface with a parabolic origin: base (u, 0, u^2, 0), director (0, 1, 0, u).
PARABOLIC_TOML = """\
scalar = "rational"
[base]
x1 = [0, 1]
x2 = [0]
x3 = [0, 0, 1]
x4 = [0]
[director]
e1 = [0]
e2 = [1]
e3 = [0]
e4 = [0, 1]
"""

# Ruling through u = 0 carries an inflection of real type at t = -1.
INFLECTION_TOML = """\
scalar = "rational"
[base]
x1 = [0, 1]
x2 = [0]
x3 = [0]
x4 = [0, 0, 1]
[director]
e1 = [0]
e2 = [1]
e3 = [0, 1]
e4 = [0, 1, 1]
"""

# Monge form at (0, 0) is exactly (x^2 + x^3 y + x^5, xy + x^4): already in
# the reduced parabolic gauge, butterfly directions alpha = +-1, and the
# projection along either direction plane lands on a clean butterfly.
BUTTERFLY_TOML = """\
scalar = "rational"
[base]
x1 = [0, 1]
x2 = [0]
x3 = [0, 0, 1, 0, 0, 1]
x4 = [0, 0, 0, 0, 1]
[director]
e1 = [0]
e2 = [1]
e3 = [0, 0, 0, 1]
e4 = [0, 1]
"""

# Generic rational surface whose ruling u = 0 is hyperbolic at t = 1/3.
HYPERBOLIC_TOML = """\
scalar = "rational"
[base]
x1 = [0, 1]
x2 = [0]
x3 = [0, 0, "1/2", 1]
x4 = [0, 0, "1/3", -1]
[director]
e1 = [0, 0, "2/3", 1]
e2 = [1]
e3 = [0, 1, "1/2", 0]
e4 = [0, "3/2", -1, "1/4"]
"""

# Float-mode surface used by the scan determinism checks.
SCAN_TOML = """\
scalar = "f64"
[base]
x1 = [0, 1]
x2 = [0]
x3 = [0, 0, 1, 0.5]
x4 = [0, 0, 0.25]
[director]
e1 = [0, 0, 0.5]
e2 = [1]
e3 = [0, 1, 0.25]
e4 = [0, 1, 1]
"""


@pytest.fixture
def write_surface(tmp_path: Path):
    """Drop a TOML surface description into tmp_path and return its path."""

    def _write(text: str, name: str = "surface.toml") -> Path:
        target = tmp_path / name
        target.write_text(text)
        return target

    return _write

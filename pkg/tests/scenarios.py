"""Shared golden CLI scenarios: (name, argv after --config, expected exit)."""

import pathlib

FIXTURES = pathlib.Path(__file__).parent / "fixtures"
GOLDEN = pathlib.Path(__file__).parent / "golden"

SCENARIOS = [
    ("additive_check", "additive.json", ["check"], 0),
    ("additive_eval", "additive.json", ["eval", "--t0", "0,0", "--x0", "1", "--t", "2,3"], 0),
    ("additive_trace", "additive.json", ["trace", "--t0", "0,0", "--x0", "1", "--corner", "1,1"], 0),
    ("additive_paths", "additive.json", ["paths", "--t0", "0,0", "--x0", "1", "--t", "2,2"], 0),
    ("matrix_check", "matrix.json", ["check"], 0),
    ("matrix_eval", "matrix.json", ["eval", "--t0", "0,0", "--x0", "0,1", "--t", "3,2"], 0),
    ("matrix_trace", "matrix.json", ["trace", "--t0", "0,0", "--x0", "0,1", "--corner", "2,0"], 0),
    ("matrix_paths", "matrix.json", ["paths", "--t0", "0,0", "--x0", "0,1", "--t", "1,1"], 0),
    ("incompatible_check", "incompatible.json", ["check"], 1),
    ("incompatible_eval", "incompatible.json", ["eval", "--t0", "0,0", "--x0", "0", "--t", "1,1"], 1),
    ("incompatible_trace", "incompatible.json", ["trace", "--t0", "0,0", "--x0", "0", "--corner", "1,1"], 1),
    ("incompatible_paths", "incompatible.json", ["paths", "--t0", "0,0", "--x0", "0", "--t", "1,1"], 1),
]


def argv_for(fixture: str, tail: list[str]) -> list[str]:
    return [tail[0], "--config", str(FIXTURES / fixture)] + tail[1:]

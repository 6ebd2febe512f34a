"""Strict JSON system definitions for the command-line front end.

Documents are rejected on any unknown key, and validation collects every
problem it can find instead of stopping at the first.  Numbers are integers
or ``"p/q"`` strings; nothing is ever coerced through floating point.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction

from .autonomous import AutonomousSystem
from .closedforms import MonoidActionSystem
from .errors import ConfigError, LatticeRecError
from .exact import parse_scalar, render_scalar
from .lattice import MultiIndex
from .limits import Limits
from .matrices import Matrix
from .monoids import (
    AdditiveSelfAction,
    FiniteAction,
    FiniteMonoid,
    IntegerAdditive,
    RationalMultiplicative,
    ScalingAction,
)
from .nonautonomous import (
    AffineIntTimed,
    AxisPolynomial,
    MatrixTimed,
    NonAutonomousSystem,
    TablePerTime,
    TimedStepMap,
)
from .statespace import (
    AffineInt,
    FiniteEnumerated,
    IntegerLine,
    IntegerVector,
    MatrixLinear,
    ModularAffine,
    ModularLine,
    ModularVector,
    MonoidTranslate,
    RationalVector,
    StepMap,
    Table,
    contains,
)

KINDS = ("autonomous", "nonautonomous", "monoid", "matrix")


@dataclass
class SystemConfig:
    """A validated system definition plus the objects built from it."""

    dimension: int
    kind: str
    space: object
    limits: Limits
    autonomous: AutonomousSystem | None = None
    nonautonomous: NonAutonomousSystem | None = None
    monoid_system: MonoidActionSystem | None = None
    matrices: tuple[Matrix, ...] | None = None


class _Problems:
    def __init__(self):
        self.items: list[tuple[str, str]] = []

    def add(self, where: str, what: str) -> None:
        self.items.append((where, what))

    def raise_if_any(self) -> None:
        if self.items:
            raise ConfigError(self.items)


def _check_keys(obj: dict, allowed: set[str], where: str, problems: _Problems) -> None:
    for key in sorted(set(obj) - allowed):
        problems.add(where, f"unknown key {key!r}")


def _expect_int(value, where: str, problems: _Problems, minimum: int | None = None):
    if not isinstance(value, int) or isinstance(value, bool):
        problems.add(where, f"expected an integer, got {value!r}")
        return None
    if minimum is not None and value < minimum:
        problems.add(where, f"must be at least {minimum}, got {value}")
        return None
    return value


def _parse_space(obj, problems: _Problems):
    where = "state_space"
    if not isinstance(obj, dict):
        problems.add(where, "must be an object")
        return None
    kind = obj.get("kind")
    specs = {
        "finite_enumerated": ({"kind", "size"}, lambda: FiniteEnumerated(obj["size"])),
        "integer_line": ({"kind"}, IntegerLine),
        "integer_vector": ({"kind", "dim"}, lambda: IntegerVector(obj["dim"])),
        "modular_line": ({"kind", "modulus"}, lambda: ModularLine(obj["modulus"])),
        "rational_vector": ({"kind", "dim"}, lambda: RationalVector(obj["dim"])),
        "modular_vector": (
            {"kind", "dim", "modulus"},
            lambda: ModularVector(obj["dim"], obj["modulus"]),
        ),
    }
    if kind not in specs:
        problems.add(where, f"unknown state space kind {kind!r}")
        return None
    allowed, build = specs[kind]
    _check_keys(obj, allowed, where, problems)
    missing = allowed - set(obj)
    if missing:
        problems.add(where, f"missing keys: {sorted(missing)}")
        return None
    try:
        return build()
    except (LatticeRecError, TypeError, ValueError) as exc:
        problems.add(where, str(exc))
        return None


def _parse_matrix_entries(entries, modulus, where: str, problems: _Problems):
    if not isinstance(entries, list) or not entries:
        problems.add(where, "entries must be a nonempty array of rows")
        return None
    rows = []
    for i, row in enumerate(entries):
        if not isinstance(row, list):
            problems.add(where, f"row {i} must be an array")
            return None
        parsed = []
        for j, cell in enumerate(row):
            try:
                parsed.append(parse_scalar(cell))
            except (ValueError, TypeError, LatticeRecError):
                problems.add(where, f"entry ({i}, {j}) is not a number: {cell!r}")
                return None
        rows.append(parsed)
    try:
        return Matrix(rows, modulus)
    except LatticeRecError as exc:
        problems.add(where, str(exc))
        return None


def _parse_polynomial(obj, m: int, where: str, problems: _Problems):
    if not isinstance(obj, dict):
        problems.add(where, "polynomial must be an object")
        return None
    _check_keys(obj, {"const", "per_axis"}, where, problems)
    const = obj.get("const", 0)
    per_axis = obj.get("per_axis", [[] for _ in range(m)])
    if not isinstance(const, int) or isinstance(const, bool):
        problems.add(where, f"const must be an integer, got {const!r}")
        return None
    if (
        not isinstance(per_axis, list)
        or len(per_axis) != m
        or any(
            not isinstance(coeffs, list)
            or any(not isinstance(c, int) or isinstance(c, bool) for c in coeffs)
            for coeffs in per_axis
        )
    ):
        problems.add(where, f"per_axis must be {m} arrays of integer coefficients")
        return None
    return AxisPolynomial(const, per_axis)


def _parse_monoid(obj, where: str, problems: _Problems):
    if not isinstance(obj, dict):
        problems.add(where, "monoid must be an object")
        return None
    kind = obj.get("kind")
    if kind == "integer_additive":
        _check_keys(obj, {"kind"}, where, problems)
        return IntegerAdditive()
    if kind == "rational_multiplicative":
        _check_keys(obj, {"kind"}, where, problems)
        return RationalMultiplicative()
    if kind == "finite":
        _check_keys(obj, {"kind", "table"}, where, problems)
        try:
            return FiniteMonoid(obj.get("table") or ())
        except (LatticeRecError, TypeError) as exc:
            problems.add(where, str(exc))
            return None
    problems.add(where, f"unknown monoid kind {kind!r}")
    return None


def _build_translate(desc, space, where, problems):
    _check_keys(desc, {"rule", "monoid", "element", "action"}, where, problems)
    monoid = _parse_monoid(desc.get("monoid"), f"{where}.monoid", problems)
    if monoid is None:
        return None
    element = desc.get("element")
    if isinstance(monoid, IntegerAdditive):
        if not isinstance(space, IntegerLine):
            problems.add(where, "integer_additive translations need integer_line")
            return None
        action = AdditiveSelfAction()
    elif isinstance(monoid, RationalMultiplicative):
        if not isinstance(space, RationalVector):
            problems.add(where, "rational_multiplicative translations need rational_vector")
            return None
        try:
            element = parse_scalar(element)
        except (ValueError, TypeError):
            problems.add(where, f"element is not a number: {element!r}")
            return None
        action = ScalingAction(space.dim)
    else:
        action_obj = desc.get("action")
        if not isinstance(action_obj, dict) or action_obj.get("kind") != "table":
            problems.add(f"{where}.action", "finite monoids need an action table")
            return None
        _check_keys(action_obj, {"kind", "table"}, f"{where}.action", problems)
        try:
            action = FiniteAction(action_obj.get("table") or ())
        except (LatticeRecError, TypeError) as exc:
            problems.add(f"{where}.action", str(exc))
            return None
    try:
        return MonoidTranslate(monoid, element, action)
    except LatticeRecError as exc:
        problems.add(where, str(exc))
        return None


def _build_rule(desc, space, m, where, problems):
    if not isinstance(desc, dict):
        problems.add(where, "map descriptor must be an object")
        return None
    rule_name = desc.get("rule")
    if rule_name == "table":
        _check_keys(desc, {"rule", "images"}, where, problems)
        images = desc.get("images")
        if not isinstance(images, list) or any(
            not isinstance(v, int) or isinstance(v, bool) for v in images or []
        ):
            problems.add(where, "images must be an array of integers")
            return None
        return Table(images)
    if rule_name == "affine_int":
        _check_keys(desc, {"rule", "a", "b"}, where, problems)
        a = _expect_int(desc.get("a"), f"{where}.a", problems)
        b = _expect_int(desc.get("b"), f"{where}.b", problems)
        return AffineInt(a, b) if a is not None and b is not None else None
    if rule_name == "modular_affine":
        _check_keys(desc, {"rule", "a", "b"}, where, problems)
        a = _expect_int(desc.get("a"), f"{where}.a", problems)
        b = _expect_int(desc.get("b"), f"{where}.b", problems)
        if a is None or b is None:
            return None
        if not isinstance(space, ModularLine):
            problems.add(where, "modular_affine needs a modular_line space")
            return None
        return ModularAffine(a % space.modulus, b % space.modulus)
    if rule_name == "matrix_linear":
        _check_keys(desc, {"rule", "entries"}, where, problems)
        modulus = space.modulus if isinstance(space, ModularVector) else None
        matrix = _parse_matrix_entries(desc.get("entries"), modulus, where, problems)
        return MatrixLinear(matrix) if matrix is not None else None
    if rule_name == "monoid_translate":
        return _build_translate(desc, space, where, problems)
    if rule_name == "table_per_time":
        _check_keys(desc, {"rule", "entries"}, where, problems)
        entries = desc.get("entries")
        if not isinstance(entries, list) or not entries:
            problems.add(where, "entries must be a nonempty array")
            return None
        parsed = []
        for i, entry in enumerate(entries):
            ok = (
                isinstance(entry, dict)
                and set(entry) == {"t", "images"}
                and isinstance(entry.get("t"), list)
                and len(entry["t"]) == m
                and all(isinstance(v, int) and not isinstance(v, bool) for v in entry["t"])
                and isinstance(entry.get("images"), list)
            )
            if not ok:
                problems.add(where, f"entry {i} must have keys 't' (length {m}) and 'images'")
                return None
            parsed.append((MultiIndex(entry["t"]), tuple(entry["images"])))
        try:
            return TablePerTime(parsed)
        except LatticeRecError as exc:
            problems.add(where, str(exc))
            return None
    if rule_name == "affine_int_timed":
        _check_keys(desc, {"rule", "a", "b"}, where, problems)
        a = _parse_polynomial(desc.get("a"), m, f"{where}.a", problems)
        b = _parse_polynomial(desc.get("b"), m, f"{where}.b", problems)
        return AffineIntTimed(a, b) if a is not None and b is not None else None
    if rule_name == "matrix_timed":
        _check_keys(desc, {"rule", "entries"}, where, problems)
        entries = desc.get("entries")
        if not isinstance(entries, list) or not entries:
            problems.add(where, "entries must be a nonempty array of rows")
            return None
        rows = []
        for i, row in enumerate(entries):
            if not isinstance(row, list):
                problems.add(where, f"row {i} must be an array")
                return None
            parsed_row = []
            for j, cell in enumerate(row):
                poly = _parse_polynomial(cell, m, f"{where}.entries[{i}][{j}]", problems)
                if poly is None:
                    return None
                parsed_row.append(poly)
            rows.append(tuple(parsed_row))
        modulus = space.modulus if isinstance(space, ModularVector) else None
        return MatrixTimed(tuple(rows), modulus)
    problems.add(where, f"unknown rule {rule_name!r}")
    return None


_TIMED_RULES = ("table_per_time", "affine_int_timed", "matrix_timed")


def parse_config(text: str) -> SystemConfig:
    """Parse and validate a configuration document.

    Raises :class:`ConfigError` carrying the full list of problems.
    """
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigError(
            [(f"line {exc.lineno} column {exc.colno}", f"syntax error: {exc.msg}")]
        ) from None

    problems = _Problems()
    if not isinstance(doc, dict):
        problems.add("document", "top level must be an object")
        problems.raise_if_any()

    _check_keys(doc, {"dimension", "kind", "state_space", "maps", "t1", "limits"}, "document", problems)
    dimension = _expect_int(doc.get("dimension"), "dimension", problems, minimum=1)
    kind = doc.get("kind")
    if kind not in KINDS:
        problems.add("kind", f"must be one of {list(KINDS)}, got {kind!r}")
    space = _parse_space(doc.get("state_space"), problems)

    limits = Limits()
    if "limits" in doc:
        lobj = doc["limits"]
        if not isinstance(lobj, dict):
            problems.add("limits", "must be an object")
        else:
            _check_keys(lobj, {"path_cap", "volume_cap", "exponent_cap"}, "limits", problems)
            values = {}
            for key in ("path_cap", "volume_cap", "exponent_cap"):
                if key in lobj:
                    v = _expect_int(lobj[key], f"limits.{key}", problems, minimum=1)
                    if v is not None:
                        values[key] = v
            limits = Limits(**values)

    if "t1" in doc and kind != "nonautonomous":
        problems.add("t1", "only nonautonomous systems take a threshold")

    maps = doc.get("maps")
    if not isinstance(maps, list):
        problems.add("maps", "must be an array of map descriptors")
        maps = []
    elif dimension is not None and len(maps) != dimension:
        problems.add(
            "maps", f"got {len(maps)} descriptors for dimension {dimension}"
        )

    rules = []
    if space is not None and dimension is not None:
        for i, desc in enumerate(maps):
            rule = _build_rule(desc, space, dimension, f"maps[{i}]", problems)
            rules.append(rule)
            if rule is None:
                continue
            timed = isinstance(desc, dict) and desc.get("rule") in _TIMED_RULES
            if timed != (kind == "nonautonomous"):
                problems.add(
                    f"maps[{i}]",
                    f"rule {desc.get('rule')!r} does not fit kind {kind!r}",
                )
            if kind == "matrix" and not isinstance(rule, MatrixLinear):
                problems.add(f"maps[{i}]", "matrix systems take matrix_linear rules")
            if kind == "monoid" and not isinstance(rule, MonoidTranslate):
                problems.add(f"maps[{i}]", "monoid systems take monoid_translate rules")

    problems.raise_if_any()

    cfg = SystemConfig(dimension, kind, space, limits)
    try:
        if kind == "nonautonomous":
            t1_raw = doc.get("t1")
            if (
                not isinstance(t1_raw, list)
                or len(t1_raw) != dimension
                or any(not isinstance(v, int) or isinstance(v, bool) for v in t1_raw)
            ):
                problems.add("t1", f"must be an array of {dimension} integers")
                problems.raise_if_any()
            cfg.nonautonomous = NonAutonomousSystem(
                MultiIndex(t1_raw), [TimedStepMap(space, r) for r in rules]
            )
        else:
            steps = [StepMap(space, r) for r in rules]
            cfg.autonomous = AutonomousSystem(steps)
            if kind == "matrix":
                cfg.matrices = tuple(r.matrix for r in rules)
            if kind == "monoid":
                first = rules[0]
                for i, r in enumerate(rules[1:], start=1):
                    if r.monoid != first.monoid or r.action != first.action:
                        problems.add(
                            f"maps[{i}]", "monoid systems need one shared monoid and action"
                        )
                problems.raise_if_any()
                cfg.monoid_system = MonoidActionSystem(
                    first.monoid, tuple(r.element for r in rules), space, first.action
                )
    except LatticeRecError as exc:
        if isinstance(exc, ConfigError):
            raise
        problems.add("maps", str(exc))
        problems.raise_if_any()
    return cfg


# -- CLI value parsing and rendering ------------------------------------------

def parse_index(text: str, dimension: int) -> MultiIndex:
    parts = [p.strip() for p in text.split(",")]
    try:
        coords = [int(p) for p in parts]
    except ValueError:
        raise LatticeRecError(f"bad lattice index {text!r}") from None
    if len(coords) != dimension:
        raise LatticeRecError(
            f"index {text!r} has {len(coords)} coordinates, expected {dimension}"
        )
    return MultiIndex(coords)


def parse_state(space, text: str):
    """Parse a state literal for the given space; strict domain check."""
    if isinstance(space, (FiniteEnumerated, IntegerLine, ModularLine)):
        try:
            value = int(text)
        except ValueError:
            raise LatticeRecError(f"bad state {text!r}") from None
    else:
        parts = [p.strip() for p in text.split(",")]
        try:
            value = tuple(parse_scalar(p) for p in parts)
        except (ValueError, TypeError, LatticeRecError):
            raise LatticeRecError(f"bad state {text!r}") from None
    if not contains(space, value):
        raise LatticeRecError(f"state {text!r} is outside the state space")
    return value


def render_state(state):
    """JSON-friendly state rendering: integers plain, rationals as "p/q"."""
    if isinstance(state, tuple):
        return [render_scalar(c) for c in state]
    if isinstance(state, Fraction):
        return render_scalar(state)
    return state

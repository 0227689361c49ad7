"""JSON circuit files and the ``a+bi`` complex literal grammar.

A file looks like::

    {
      "modes": 2,
      "input": {"type": "core", "terms": [{"occ": [2, 0], "amp": [1, 0]},
                                          {"occ": [0, 1], "amp": [0, 1]}]},
      "gates": [
        {"g": "sqz", "modes": [0], "r": 0.3, "theta": 0.0},
        {"g": "bs", "modes": [0, 1], "theta": 0.7, "phi": 0.0},
        {"g": "add", "modes": [1]},
        {"g": "disp", "modes": [1], "beta": [0.2, -0.1]}
      ],
      "measurement": {"measured_modes": [0]}
    }

Input types are ``core`` (normalised on load unless ``"normalize": false``),
``fock`` with ``occ``, and ``vacuum``. Complex parameters are ``[re, im]``
pairs, plain numbers, or ``a+bi`` strings.
"""

from __future__ import annotations

import cmath
import json
import math
import re
from typing import Any

from gcore.circuit import Circuit, Ladder
from gcore.corestate import CoreState, fock, new_core, vacuum
from gcore.gaussian import Gate

_NUM = r"(?:\d+(?:\.\d*)?|\.\d+)(?:[eE][+-]?\d+)?"
_COMPLEX = re.compile(rf"^([+-]?{_NUM})([+-]{_NUM})i$")


class CircuitFileError(ValueError):
    """Malformed circuit file or literal; the message carries the location."""


def parse_complex(text: str) -> complex:
    """Parse ``±a±bi`` (mandatory ``i`` suffix, no spaces)."""
    t = text.strip().replace("−", "-")
    match = _COMPLEX.match(t)
    if not match:
        raise CircuitFileError(f"bad complex literal {text!r}; expected the form a+bi, e.g. 0.1-0.2i")
    return complex(float(match.group(1)), float(match.group(2)))


def parse_outcome(text: str) -> tuple[complex, ...]:
    """Comma-separated complex literals, one per measured mode."""
    parts = text.split(",")
    out = []
    for i, part in enumerate(parts):
        try:
            out.append(parse_complex(part))
        except CircuitFileError as err:
            raise CircuitFileError(f"outcome entry {i}: {err}") from None
    return tuple(out)


def format_complex(z: complex, digits: int = 12) -> str:
    return f"{z.real:.{digits}g}{z.imag:+.{digits}g}i"


def _fail(where: str, msg: str):
    raise CircuitFileError(f"{where}: {msg}")


def _get(rec: dict, key: str, where: str) -> Any:
    if not isinstance(rec, dict):
        _fail(where, "expected an object")
    if key not in rec:
        _fail(where, f"missing field {key!r}")
    return rec[key]


def _real(x: Any, where: str) -> float:
    if isinstance(x, bool) or not isinstance(x, (int, float)):
        _fail(where, f"expected a number, got {x!r}")
    if not math.isfinite(x):
        _fail(where, "non-finite number")
    return float(x)


def _cplx(x: Any, where: str) -> complex:
    if isinstance(x, str):
        try:
            return parse_complex(x)
        except CircuitFileError as err:
            _fail(where, str(err))
    if isinstance(x, list):
        if len(x) != 2:
            _fail(where, f"complex pair must have 2 entries, got {len(x)}")
        return complex(_real(x[0], where + "[0]"), _real(x[1], where + "[1]"))
    return complex(_real(x, where))


def _ints(x: Any, where: str) -> list[int]:
    if not isinstance(x, list) or any(isinstance(k, bool) or not isinstance(k, int) for k in x):
        _fail(where, f"expected a list of integers, got {x!r}")
    return list(x)


def _input(rec: Any, m: int) -> CoreState:
    kind = _get(rec, "type", "input")
    if kind == "vacuum":
        return vacuum(m)
    if kind == "fock":
        occ = _ints(_get(rec, "occ", "input"), "input.occ")
        if len(occ) != m:
            _fail("input.occ", f"length {len(occ)} does not match modes={m}")
        if any(k < 0 for k in occ):
            _fail("input.occ", "negative occupation")
        return fock(occ)
    if kind == "core":
        terms = _get(rec, "terms", "input")
        if not isinstance(terms, list) or not terms:
            _fail("input.terms", "expected a non-empty list")
        parsed = []
        for i, t in enumerate(terms):
            where = f"input.terms[{i}]"
            occ = _ints(_get(t, "occ", where), where + ".occ")
            if len(occ) != m:
                _fail(where + ".occ", f"length {len(occ)} does not match modes={m}")
            if any(k < 0 for k in occ):
                _fail(where + ".occ", "negative occupation")
            parsed.append((occ, _cplx(_get(t, "amp", where), where + ".amp")))
        normalize = rec.get("normalize", True)
        if not isinstance(normalize, bool):
            _fail("input.normalize", "expected true or false")
        try:
            return new_core(parsed, normalize=normalize)
        except ValueError as err:
            _fail("input.terms", str(err))
    _fail("input.type", f"unknown input type {kind!r}; use core, fock or vacuum")


def _gate(rec: Any, i: int, m: int) -> Gate | Ladder:
    where = f"gates[{i}]"
    name = _get(rec, "g", where)
    modes = _ints(_get(rec, "modes", where), where + ".modes")
    for k in modes:
        if not 0 <= k < m:
            _fail(where + ".modes", f"mode {k} out of range for modes={m}")

    def real(key):
        return _real(_get(rec, key, where), f"{where}.{key}")

    def polar():
        return real("r") * cmath.exp(1j * real("theta"))

    try:
        if name in ("add", "sub"):
            if len(modes) != 1:
                _fail(where + ".modes", f"{name} acts on one mode")
            return Ladder(modes[0], name)
        if name == "disp":
            return Gate("disp", modes, (_cplx(_get(rec, "beta", where), where + ".beta"),))
        if name == "rot":
            return Gate("rot", modes, (real("phi"),))
        if name == "sqz":
            return Gate("sqz", modes, (polar(),))
        if name == "bs":
            return Gate("bs", modes, (real("theta"), real("phi")))
        if name == "tms":
            return Gate("tms", modes, (polar(),))
        if name == "swap":
            return Gate("swap", modes)
    except CircuitFileError:
        raise
    except ValueError as err:
        _fail(where, str(err))
    _fail(where + ".g", f"unknown gate {name!r}")


def circuit_from_dict(doc: Any) -> Circuit:
    if not isinstance(doc, dict):
        _fail("document", "top level must be an object")
    m = _get(doc, "modes", "document")
    if isinstance(m, bool) or not isinstance(m, int) or m < 1:
        _fail("modes", f"expected a positive integer, got {m!r}")
    C = _input(_get(doc, "input", "document"), m)
    gates = doc.get("gates", [])
    if not isinstance(gates, list):
        _fail("gates", "expected a list")
    ops = [_gate(g, i, m) for i, g in enumerate(gates)]
    measured = None
    if "measurement" in doc:
        mm = _ints(_get(doc["measurement"], "measured_modes", "measurement"), "measurement.measured_modes")
        if not mm or len(set(mm)) != len(mm) or any(not 0 <= k < m for k in mm):
            _fail("measurement.measured_modes", f"invalid modes {mm} for modes={m}")
        measured = tuple(mm)
    return Circuit(m, C, tuple(ops), measured)


def loads(text: str) -> Circuit:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as err:
        raise CircuitFileError(f"line {err.lineno}, column {err.colno}: {err.msg}") from None
    return circuit_from_dict(doc)


def load(path: str) -> Circuit:
    with open(path, encoding="utf-8") as fh:
        text = fh.read()
    try:
        return loads(text)
    except CircuitFileError as err:
        raise CircuitFileError(f"{path}: {err}") from None


def _gate_record(g: Gate) -> dict:
    rec: dict[str, Any] = {"g": g.kind, "modes": list(g.modes)}
    p = [complex(x) for x in g.params]
    if g.kind == "disp":
        rec["beta"] = [p[0].real, p[0].imag]
    elif g.kind == "rot":
        rec["phi"] = p[0].real
    elif g.kind in ("sqz", "tms"):
        rec["r"], rec["theta"] = abs(p[0]), cmath.phase(p[0])
    elif g.kind == "bs":
        rec["theta"], rec["phi"] = p[0].real, p[1].real
    return rec


def core_record(C: CoreState) -> dict:
    return {
        "type": "core",
        "terms": [{"occ": list(p), "amp": [c.real, c.imag]} for p, c in C.terms],
    }


def circuit_to_dict(c: Circuit) -> dict:
    gates = []
    for op in c.ops:
        if isinstance(op, Ladder):
            gates.append({"g": op.kind, "modes": [op.mode]})
        elif isinstance(op, Gate):
            gates.append(_gate_record(op))
        else:
            raise TypeError("only elementary gates and ladder events can be written to a circuit file")
    doc: dict[str, Any] = {"modes": c.modes, "input": core_record(c.input), "gates": gates}
    if c.measured_modes is not None:
        doc["measurement"] = {"measured_modes": list(c.measured_modes)}
    return doc


def dumps(c: Circuit) -> str:
    return json.dumps(circuit_to_dict(c), indent=2)

"""Reading group definitions and writing deterministic reports.

Rationals are always written as ``"num/den"`` strings (``"0/1"``, ``"-3/4"``)
so that reports diff cleanly.  On input, integers and ``"n"`` strings are
accepted as well; floats are refused because everything here is exact.

A finite group file holds either ``{"table": [[...]]}`` or
``{"permutation_generators": [[...]], "degree": n}``, optionally with
``"labels"`` and ``"name"``.  A toral group file holds ``"component_group"``
(an inline finite group object, a catalog reference such as
``"catalog:Z2"``, or a path relative to the file), ``"rank"``, ``"action"``
(component index -> integer matrix) and ``"cocycle"`` (``"(p,q)"`` ->
rational coordinates).  Both JSON and TOML are accepted.
"""

from __future__ import annotations

import json
import re
import sys
from fractions import Fraction
from pathlib import Path

from . import groups
from .errors import ParseError

if sys.version_info >= (3, 11):
    import tomllib
else:
    import tomli as tomllib

CATALOG_PREFIX = "catalog:"
_PAIR = re.compile(r"^\s*\(?\s*(\d+)\s*,\s*(\d+)\s*\)?\s*$")


def fraction_str(q):
    q = Fraction(q)
    return f"{q.numerator}/{q.denominator}"


def parse_rational(x):
    if isinstance(x, bool):
        raise ParseError(f"expected a rational, got {x!r}")
    if isinstance(x, (int, Fraction)):
        return Fraction(x)
    if isinstance(x, str):
        s = x.strip()
        if re.fullmatch(r"[+-]?\d+(/\d+)?", s):
            q = Fraction(s)
            return q
        raise ParseError(f"malformed rational {x!r}; write it as \"num/den\"")
    raise ParseError(f"expected a rational, got {type(x).__name__} {x!r}")


def vector_json(v):
    return [fraction_str(x) for x in v]


def dumps(obj):
    """Canonical JSON: sorted keys, two-space indent, trailing newline."""
    return json.dumps(obj, sort_keys=True, indent=2, ensure_ascii=False) + "\n"


def read_document(path):
    path = Path(path)
    try:
        raw = path.read_bytes()
    except OSError as exc:
        raise ParseError(f"cannot read {path}: {exc.strerror}") from exc
    try:
        if path.suffix.lower() == ".toml":
            return tomllib.loads(raw.decode("utf-8"))
        return json.loads(raw.decode("utf-8"))
    except (ValueError, UnicodeDecodeError) as exc:
        raise ParseError(f"{path}: {exc}") from exc


# -- finite groups --------------------------------------------------------------

def finite_group_from_data(data, name=""):
    if not isinstance(data, dict):
        raise ParseError("a group definition must be an object")
    name = str(data.get("name", name))
    labels = data.get("labels")
    if "table" in data:
        table = data["table"]
        if not isinstance(table, list) or not all(isinstance(r, list) for r in table):
            raise ParseError("\"table\" must be a list of rows")
        return groups.validate_group(table, labels, name)
    if "permutation_generators" in data:
        if "degree" not in data:
            raise ParseError("\"permutation_generators\" needs a \"degree\"")
        try:
            degree = int(data["degree"])
        except (TypeError, ValueError) as exc:
            raise ParseError(f"bad degree {data['degree']!r}") from exc
        G = groups.group_from_permutations(data["permutation_generators"], degree, name=name)
        if labels is not None:
            G = groups.validate_group(G.table, labels, name)
        return G
    raise ParseError("group definition needs \"table\" or \"permutation_generators\"")


def load_finite_group(ref):
    """``ref`` is ``catalog:NAME``, a file path, or a bare catalog name."""
    from .toral import finite_catalog

    ref = str(ref)
    if ref.startswith(CATALOG_PREFIX):
        return _catalog(finite_catalog, ref[len(CATALOG_PREFIX):])
    path = Path(ref)
    if path.exists():
        data = read_document(path)
        return finite_group_from_data(data, name=path.stem)
    return _catalog(finite_catalog, ref)


def _catalog(lookup, name):
    try:
        return lookup(name)
    except (KeyError, IndexError, ValueError) as exc:
        raise ParseError(f"unknown catalog group {name!r}") from exc


# -- toral groups ----------------------------------------------------------------

def toral_group_from_data(data, base=None, name=""):
    from .toral import make_toral_group

    if not isinstance(data, dict):
        raise ParseError("a toral group definition must be an object")
    if "rank" not in data:
        # a plain finite group is a rank-0 toral group
        G = finite_group_from_data(data, name)
        return make_toral_group(G, 0, name=G.name)
    name = str(data.get("name", name))
    comp = data.get("component_group", "catalog:Z1")
    if isinstance(comp, dict):
        pi = finite_group_from_data(comp)
    elif isinstance(comp, str):
        ref = comp
        if not ref.startswith(CATALOG_PREFIX) and base is not None and not Path(ref).is_absolute():
            candidate = Path(base) / ref
            if candidate.exists():
                ref = str(candidate)
        pi = load_finite_group(ref)
    else:
        raise ParseError("\"component_group\" must be an object or a reference string")
    try:
        rank = int(data["rank"])
    except (TypeError, ValueError) as exc:
        raise ParseError(f"bad rank {data['rank']!r}") from exc
    if rank < 0:
        raise ParseError("rank must be non-negative")
    action = {}
    for key, M in (data.get("action") or {}).items():
        p = _index(key, pi)
        if not isinstance(M, list) or not all(isinstance(r, list) for r in M):
            raise ParseError(f"action matrix for {key} must be a list of rows")
        try:
            action[p] = [[_integer(x) for x in row] for row in M]
        except ParseError as exc:
            raise ParseError(f"action matrix for {key}: {exc}") from exc
    cocycle = {}
    for key, v in (data.get("cocycle") or {}).items():
        m = _PAIR.match(str(key))
        if not m:
            raise ParseError(f"cocycle key {key!r} is not of the form \"(p,q)\"")
        p, q = _index(m.group(1), pi), _index(m.group(2), pi)
        if not isinstance(v, list):
            raise ParseError(f"cocycle value at {key} must be a list")
        cocycle[(p, q)] = [parse_rational(x) for x in v]
    return make_toral_group(pi, rank, action, cocycle, name=name)


def _index(key, pi):
    try:
        p = int(str(key).strip())
    except ValueError as exc:
        raise ParseError(f"component index {key!r} is not an integer") from exc
    if not 0 <= p < pi.order:
        raise ParseError(f"component index {p} out of range for a group of order {pi.order}")
    return p


def _integer(x):
    q = parse_rational(x)
    if q.denominator != 1:
        raise ParseError(f"expected an integer, got {fraction_str(q)}")
    return int(q)


def load_toral_group(ref):
    """``ref`` is ``catalog:NAME``, a file path, or a bare catalog name."""
    from .toral import toral_catalog

    ref = str(ref)
    if ref.startswith(CATALOG_PREFIX):
        return _catalog(toral_catalog, ref[len(CATALOG_PREFIX):])
    path = Path(ref)
    if path.exists():
        data = read_document(path)
        return toral_group_from_data(data, base=path.parent, name=path.stem)
    return _catalog(toral_catalog, ref)

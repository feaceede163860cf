"""JSON file formats and canonical report encoding.

Family files look like ``{"n": 6, "sets": [[1, 2], [2, 3]]}`` and permutation
files like ``{"n": 4, "perms": [[2, 1, 3, 4]]}``; elements are 1-indexed.
Output is canonical: sorted keys, sorted sets, fixed separators, trailing
newline, so equal content gives equal bytes.
"""

from __future__ import annotations

import json
import math
from dataclasses import fields, is_dataclass
from fractions import Fraction
from pathlib import Path

from .family import FamilyError, PermutationFamily, SetFamily, elements_of


class InputError(ValueError):
    """Malformed input file, with the location of the problem."""

    def __init__(self, message: str, *, source: str = "<input>", line: int | None = None, field: str | None = None):
        self.source, self.line, self.field = source, line, field
        where = source
        if line is not None:
            where += f":{line}"
        if field is not None:
            where += f" [{field}]"
        super().__init__(f"{where}: {message}")

    def to_json(self) -> dict:
        return {"message": str(self), "source": self.source, "line": self.line, "field": self.field}


def _line_of(text: str, needle_index: int) -> int:
    return text.count("\n", 0, needle_index) + 1


def _locate(text: str, key: str, index: int | None = None) -> int | None:
    """Best-effort line number of ``key`` (and its ``index``-th entry) in raw JSON text."""
    at = text.find(f'"{key}"')
    if at < 0:
        return None
    if index is None:
        return _line_of(text, at)
    pos = text.find("[", at)
    if pos < 0:
        return _line_of(text, at)
    depth, count = 0, -1
    for i in range(pos, len(text)):
        c = text[i]
        if c == "[":
            depth += 1
            if depth == 2:
                count += 1
                if count == index:
                    return _line_of(text, i)
        elif c == "]":
            depth -= 1
            if depth == 0:
                break
    return _line_of(text, at)


def _parse(text: str, source: str) -> dict:
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise InputError(exc.msg, source=source, line=exc.lineno) from None
    if not isinstance(data, dict):
        raise InputError("top level must be a JSON object", source=source, line=1)
    return data


def _positive_int(data: dict, key: str, text: str, source: str) -> int:
    if key not in data:
        raise InputError(f"missing field {key!r}", source=source, field=key)
    v = data[key]
    if isinstance(v, bool) or not isinstance(v, int) or v < 1:
        raise InputError(f"{key} must be a positive integer", source=source, line=_locate(text, key), field=key)
    return v


def _int_rows(data: dict, key: str, text: str, source: str) -> list[list[int]]:
    if key not in data:
        raise InputError(f"missing field {key!r}", source=source, field=key)
    rows = data[key]
    if not isinstance(rows, list):
        raise InputError(f"{key} must be a list", source=source, line=_locate(text, key), field=key)
    for i, row in enumerate(rows):
        if not isinstance(row, list) or any(isinstance(v, bool) or not isinstance(v, int) for v in row):
            raise InputError("entry must be a list of integers", source=source,
                             line=_locate(text, key, i), field=f"{key}[{i}]")
    return rows


def loads_family(text: str, source: str = "<input>") -> SetFamily:
    data = _parse(text, source)
    n = _positive_int(data, "n", text, source)
    rows = _int_rows(data, "sets", text, source)
    for i, row in enumerate(rows):
        for j, v in enumerate(row):
            if not 1 <= v <= n:
                raise InputError(f"element {v} outside 1..{n}", source=source,
                                 line=_locate(text, "sets", i), field=f"sets[{i}][{j}]")
        if len(set(row)) != len(row):
            raise InputError("repeated element", source=source, line=_locate(text, "sets", i), field=f"sets[{i}]")
    return SetFamily.from_sets(n, rows)


def loads_perms(text: str, source: str = "<input>") -> PermutationFamily:
    data = _parse(text, source)
    n = _positive_int(data, "n", text, source)
    rows = _int_rows(data, "perms", text, source)
    for i, row in enumerate(rows):
        if sorted(row) != list(range(1, n + 1)):
            raise InputError(f"not a permutation of 1..{n}", source=source,
                             line=_locate(text, "perms", i), field=f"perms[{i}]")
    try:
        return PermutationFamily(n, rows)
    except FamilyError as exc:
        raise InputError(str(exc), source=source, field="perms") from None


def load_family(path: str | Path) -> SetFamily:
    """Read a set-family file, or a permutation file as its grid family."""
    p = Path(path)
    try:
        text = p.read_text()
    except OSError as exc:
        raise InputError(exc.strerror or str(exc), source=str(p)) from None
    data = _parse(text, str(p))
    if "perms" in data and "sets" not in data:
        return loads_perms(text, str(p)).to_set_family()
    return loads_family(text, str(p))


def load_perms(path: str | Path) -> PermutationFamily:
    p = Path(path)
    try:
        text = p.read_text()
    except OSError as exc:
        raise InputError(exc.strerror or str(exc), source=str(p)) from None
    return loads_perms(text, str(p))


def family_doc(F: SetFamily) -> dict:
    return {"n": F.n, "sets": F.to_sets()}


def perms_doc(P: PermutationFamily) -> dict:
    return {"n": P.n, "perms": [list(p) for p in P.perms]}


def _rows_text(n: int, key: str, rows: list[list[int]]) -> str:
    body = ",\n".join("  " + json.dumps(r) for r in rows)
    inner = f"\n{body}\n " if rows else ""
    return f'{{\n "n": {n},\n "{key}": [{inner}]\n}}\n'


def dumps_family(F: SetFamily) -> str:
    """Canonical family file text: one set per line, sets in canonical order."""
    return _rows_text(F.n, "sets", F.to_sets())


def dumps_perms(P: PermutationFamily) -> str:
    return _rows_text(P.n, "perms", [list(p) for p in P.perms])


def mask_json(mask: int | None) -> list[int] | None:
    return None if mask is None else [e + 1 for e in elements_of(mask)]


def to_jsonable(obj):
    """Convert results to plain JSON values.

    Fractions become ``{"num", "den"}``; non-finite floats become strings;
    dataclasses and objects with ``to_json`` are expanded.
    """
    if obj is None or isinstance(obj, (bool, int, str)):
        return obj
    if isinstance(obj, float):
        if math.isfinite(obj):
            return obj
        return "inf" if obj > 0 else ("-inf" if obj < 0 else "nan")
    if isinstance(obj, Fraction):
        return {"num": obj.numerator, "den": obj.denominator}
    if hasattr(obj, "to_json"):
        return to_jsonable(obj.to_json())
    if isinstance(obj, SetFamily):
        return family_doc(obj)
    if isinstance(obj, PermutationFamily):
        return perms_doc(obj)
    if is_dataclass(obj):
        return {f.name: to_jsonable(getattr(obj, f.name)) for f in fields(obj)}
    if isinstance(obj, dict):
        return {str(k): to_jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [to_jsonable(v) for v in obj]
    if hasattr(obj, "item"):  # numpy scalar
        return to_jsonable(obj.item())
    raise TypeError(f"cannot serialize {type(obj).__name__}")


def _scalar(v) -> bool:
    return not isinstance(v, (dict, list))


def _render(v, indent: int) -> str:
    pad = " " * (indent + 1)
    if isinstance(v, dict):
        if not v:
            return "{}"
        items = [f"{pad}{json.dumps(k)}: {_render(v[k], indent + 1)}" for k in sorted(v)]
        return "{\n" + ",\n".join(items) + "\n" + " " * indent + "}"
    if isinstance(v, list):
        if all(_scalar(x) for x in v):
            return json.dumps(v, allow_nan=False)
        if all(isinstance(x, list) and all(_scalar(y) for y in x) for x in v):
            rows = [pad + json.dumps(x, allow_nan=False) for x in v]
        else:
            rows = [pad + _render(x, indent + 1) for x in v]
        return "[\n" + ",\n".join(rows) + "\n" + " " * indent + "]"
    return json.dumps(v, allow_nan=False)


def canonical_dumps(obj) -> str:
    """Sorted keys, one-space indentation, flat lists on one line."""
    return _render(to_jsonable(obj), 0) + "\n"


def write_canonical(obj, path: str | Path) -> None:
    Path(path).write_text(canonical_dumps(obj))

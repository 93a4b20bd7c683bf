"""Reading and writing the MLAT lattice file format (JSON, version 1).

::

    {
      "mlat": 1,
      "name": "D(4)",
      "elements": ["1", "2", "4"],
      "bottom": 2,
      "top": 0,
      "leq": [[1, 0], [2, 0], [2, 1]],
      "mul": [
        [0, 1, 2],
        [1, 2, 2],
        [2, 2, 2]
      ]
    }

``leq`` pairs ``[i, j]`` mean element i <= element j.  Reflexive pairs may be
omitted and the transitive closure is taken on input.  The canonical form
written by :func:`to_file` lists every non-reflexive pair, sorted.
"""

from __future__ import annotations

import json
from pathlib import Path

import numpy as np

from .errors import MLATFormatError
from .lattice import MultLattice

__all__ = ["to_file", "from_file", "load", "save", "FORMAT_VERSION"]

FORMAT_VERSION = 1


def to_file(L: MultLattice) -> bytes:
    s = L.size
    pairs = [[int(i), int(j)] for i, j in np.argwhere(L.order) if i != j]
    rows = ",\n".join("    " + json.dumps([int(v) for v in row]) for row in L.table)
    lines = [
        "{",
        f'  "mlat": {FORMAT_VERSION},',
        f'  "name": {json.dumps(L.name, ensure_ascii=False)},',
        f'  "elements": {json.dumps(list(L.labels), ensure_ascii=False)},',
        f'  "bottom": {L.bottom},',
        f'  "top": {L.top},',
        f'  "leq": {json.dumps(pairs)},',
        '  "mul": [' + ("\n" + rows + "\n  ]" if s else "]"),
        "}",
        "",
    ]
    return "\n".join(lines).encode("utf-8")


def _field(doc: dict, key: str, kind, what: str):
    if key not in doc:
        raise MLATFormatError(f"missing field {key!r}")
    val = doc[key]
    if kind is int:
        ok = isinstance(val, int) and not isinstance(val, bool)
    else:
        ok = isinstance(val, kind)
    if not ok:
        raise MLATFormatError(f"field {key!r} must be {what}")
    return val


def _closure(order: np.ndarray) -> np.ndarray:
    # Warshall on boolean rows
    order = order.copy()
    for k in range(order.shape[0]):
        order |= order[:, k : k + 1] & order[k : k + 1, :]
    return order


def from_file(data: bytes | str, check: bool = True) -> MultLattice:
    """Parse MLAT text.  With ``check`` the axioms are validated and a
    :class:`LatticeAxiomError` carries the report on failure."""
    if isinstance(data, bytes):
        try:
            text = data.decode("utf-8")
        except UnicodeDecodeError as exc:
            raise MLATFormatError("file is not valid UTF-8", exc.start) from None
    else:
        text = data
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise MLATFormatError(f"invalid JSON: {exc.msg}", len(text[: exc.pos].encode("utf-8"))) from None
    if not isinstance(doc, dict):
        raise MLATFormatError("top level must be a JSON object")
    version = _field(doc, "mlat", int, "an integer")
    if version != FORMAT_VERSION:
        raise MLATFormatError(f"unsupported mlat version {version}")
    name = _field(doc, "name", str, "a string")
    labels = _field(doc, "elements", list, "a list of labels")
    if not all(isinstance(x, str) for x in labels):
        raise MLATFormatError("element labels must be strings")
    s = len(labels)
    bottom = _field(doc, "bottom", int, "an element index")
    top = _field(doc, "top", int, "an element index")
    leq = _field(doc, "leq", list, "a list of index pairs")
    mul = _field(doc, "mul", list, "a square table of indices")

    order = np.eye(s, dtype=bool)
    for k, pair in enumerate(leq):
        if (
            not isinstance(pair, list)
            or len(pair) != 2
            or not all(isinstance(v, int) and not isinstance(v, bool) for v in pair)
        ):
            raise MLATFormatError(f"leq[{k}] must be a pair of indices")
        i, j = pair
        if not (0 <= i < s and 0 <= j < s):
            raise MLATFormatError(f"leq[{k}] = {pair} is out of range")
        order[i, j] = True
    order = _closure(order)

    if len(mul) != s or not all(isinstance(r, list) and len(r) == s for r in mul):
        raise MLATFormatError(f"mul must be a {s}x{s} table")
    for r, row in enumerate(mul):
        for c, v in enumerate(row):
            if not isinstance(v, int) or isinstance(v, bool):
                raise MLATFormatError(f"mul[{r}][{c}] must be an integer")
    table = np.array(mul, dtype=np.intp).reshape(s, s)

    L = MultLattice(labels, order, table, bottom=bottom, top=top, name=name)
    return L.checked() if check else L


def load(path: str | Path, check: bool = True) -> MultLattice:
    return from_file(Path(path).read_bytes(), check=check)


def save(L: MultLattice, path: str | Path) -> None:
    Path(path).write_bytes(to_file(L))

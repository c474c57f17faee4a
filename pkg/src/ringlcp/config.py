"""Ring and code specification files (JSON or TOML).

Ring file::

    {"name": "...", "preset": {"name": "blockpair", "q": 3}}
    {"name": "...", "field": {"p": 3},
     "custom": {"dim": 2, "structure_constants": [...], "unity": [1, 0],
                "basis_names": ["1", "u"]}}

``preset`` may also be a string such as ``"ut2(3)"``.

Code file::

    {"ring": "ring.toml", "n": 1, "generators": [["e1"]]}

``ring`` is a preset reference or a path relative to the code file.
"""

from __future__ import annotations

import json
import sys
from pathlib import Path

if sys.version_info >= (3, 11):
    import tomllib
else:  # pragma: no cover
    import tomli as tomllib

from .algebra import AlgebraSpec, preset
from .codes import LinearCode
from .errors import RingLcpError
from .field import FieldSpec


class ConfigError(RingLcpError, ValueError):
    """A specification file could not be read or is malformed."""


def read_document(path: Path) -> dict:
    text = path.read_text()
    if path.suffix.lower() == ".toml":
        try:
            return tomllib.loads(text)
        except tomllib.TOMLDecodeError as exc:
            raise ConfigError(f"{path}: {exc}") from None
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigError(f"{path}:{exc.lineno}:{exc.colno}: {exc.msg}") from None
    if not isinstance(doc, dict):
        raise ConfigError(f"{path}: top level must be an object")
    return doc


def _require(doc: dict, key: str, where: str):
    if key not in doc:
        raise ConfigError(f"{where}: missing key {key!r}")
    return doc[key]


def ring_from_document(doc: dict, where: str = "<ring>") -> AlgebraSpec:
    pre = doc.get("preset")
    if pre is not None:
        try:
            if isinstance(pre, str):
                return preset(pre)
            return preset(_require(pre, "name", f"{where}: preset"), int(_require(pre, "q", f"{where}: preset")))
        except RingLcpError as exc:
            raise ConfigError(f"{where}: preset: {exc}") from None
    custom = doc.get("custom")
    if custom is None:
        raise ConfigError(f"{where}: give either 'preset' or 'custom'")
    fld = _require(doc, "field", where)
    try:
        spec = FieldSpec(int(_require(fld, "p", f"{where}: field")), int(fld.get("m", 1)), tuple(fld.get("modulus", ())))
        c = _require(custom, "structure_constants", f"{where}: custom")
        dim = custom.get("dim")
        if dim is not None and len(c) != dim:
            raise ConfigError(f"{where}: custom.dim is {dim} but structure_constants has {len(c)} slices")
        return AlgebraSpec(
            spec,
            c,
            _require(custom, "unity", f"{where}: custom"),
            name=doc.get("name", ""),
            basis_names=custom.get("basis_names"),
        )
    except ConfigError:
        raise
    except (RingLcpError, ValueError, TypeError) as exc:
        raise ConfigError(f"{where}: {exc}") from None


def load_ring(ref: str, base: Path | None = None) -> AlgebraSpec:
    """A preset reference (``"ut2(3)"``) or a ring file path."""
    path = Path(ref) if base is None else (base / ref)
    if path.is_file():
        return ring_from_document(read_document(path), str(path))
    if Path(ref).is_file():
        return ring_from_document(read_document(Path(ref)), ref)
    try:
        return preset(ref)
    except RingLcpError as exc:
        raise ConfigError(f"{ref!r} is neither a ring file nor a preset reference ({exc})") from None


def code_from_document(doc: dict, alg: AlgebraSpec, where: str = "<code>") -> LinearCode:
    gens = _require(doc, "generators", where)
    n = doc.get("n")
    if n is None:
        if not gens:
            raise ConfigError(f"{where}: 'n' is required when there are no generators")
        n = len(gens[0])
    for i, row in enumerate(gens):
        if len(row) != n:
            raise ConfigError(f"{where}: generator row {i} has length {len(row)}, expected n = {n}")
    try:
        return LinearCode.from_generators(alg, [[str(x) if not isinstance(x, list) else x for x in row] for row in gens], n)
    except RingLcpError as exc:
        raise ConfigError(f"{where}: {exc}") from None


def load_code(ref: str, alg: AlgebraSpec | None = None) -> tuple[AlgebraSpec, LinearCode]:
    path = Path(ref)
    if not path.is_file():
        raise ConfigError(f"code file {ref!r} not found")
    doc = read_document(path)
    if "ring" in doc:
        ring = load_ring(str(doc["ring"]), path.parent)
        if alg is not None and ring != alg:
            raise ConfigError(f"{ref}: code is over {ring.name} but {alg.name} was requested")
        alg = ring
    if alg is None:
        raise ConfigError(f"{ref}: no ring given in the file or on the command line")
    return alg, code_from_document(doc, alg, ref)

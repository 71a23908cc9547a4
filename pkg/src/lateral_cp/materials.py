"""Named material registry backed by a plain-text key/value file.

The shipped file lives next to this module. Set ``LATERAL_CP_MATERIALS`` to
the path of another file with the same layout to override it::

    [gold]
    name = gold
    eps_re = 1.40
    eps_im = 1.35
    perfect_conductor = false
"""
from __future__ import annotations

import configparser
import hashlib
import os
from functools import lru_cache
from pathlib import Path

from .planar_em import Material

__all__ = ["ENV_VAR", "UnknownMaterial", "registry_path", "load_registry", "get_material", "registry_hash"]

ENV_VAR = "LATERAL_CP_MATERIALS"
_DEFAULT_PATH = Path(__file__).with_name("materials.cfg")


class UnknownMaterial(KeyError):
    pass


def registry_path() -> Path:
    override = os.environ.get(ENV_VAR)
    return Path(override) if override else _DEFAULT_PATH


def _parse(text: str) -> dict[str, Material]:
    parser = configparser.ConfigParser()
    parser.read_string(text)
    out = {}
    for section in parser.sections():
        entry = parser[section]
        name = entry.get("name", section).strip()
        pc = entry.getboolean("perfect_conductor", fallback=False)
        eps = complex(entry.getfloat("eps_re", fallback=1.0), entry.getfloat("eps_im", fallback=0.0))
        out[name] = Material(name, eps, pc)
    return out


@lru_cache(maxsize=8)
def _load(path: str, mtime: float) -> dict[str, Material]:
    return _parse(Path(path).read_text())


def load_registry(path: str | os.PathLike | None = None) -> dict[str, Material]:
    """Read the registry file and return ``{name: Material}``."""
    p = Path(path) if path is not None else registry_path()
    return dict(_load(str(p), p.stat().st_mtime))


def get_material(name: str, path=None) -> Material:
    reg = load_registry(path)
    try:
        return reg[name]
    except KeyError:
        raise UnknownMaterial(f"unknown material {name!r}; known: {', '.join(sorted(reg))}") from None


def registry_hash(path=None) -> str:
    """SHA-256 of the registry file contents, recorded in run metadata."""
    p = Path(path) if path is not None else registry_path()
    return hashlib.sha256(p.read_bytes()).hexdigest()

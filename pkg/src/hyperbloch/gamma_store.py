"""Disk cache for gamma-matrix sets.

File layout (little endian):

* 8-byte magic ``b"HBGAMMA\\0"``
* ``uint32`` header length followed by a UTF-8 JSON header with keys
  ``group, k, twoS, dim, construction, version, arrays``
* each array listed in ``arrays`` as row-major complex entries stored as
  pairs of 64-bit floats

Writes go to a temporary file in the target directory and are moved into
place with :func:`os.replace`, so readers never see a partial file.
"""

import json
import os
from pathlib import Path
import struct
import tempfile

import numpy as np

from .fuzzy_gamma import GammaSet, build_gammas
from .spin_algebra import SpinLabel

MAGIC = b"HBGAMMA\0"
VERSION = 1
ENV_VAR = "HYPERBLOCH_CACHE"
SUFFIX = ".hbg"


def cache_dir(path=None):
    """Resolve the cache directory: explicit path, then ``$HYPERBLOCH_CACHE``, then ``~/.cache/hyperbloch``."""
    if path is None:
        path = os.environ.get(ENV_VAR) or Path.home() / ".cache" / "hyperbloch"
    path = Path(path)
    path.mkdir(parents=True, exist_ok=True)
    return path


def cache_name(n, twoS, construction):
    return f"so{n}_k{n // 2}_2S{twoS}_{construction}{SUFFIX}"


def _arrays(g):
    out = {"gammas": g.gammas, "generators": g.generators}
    if g.chirality is not None:
        out["chirality"] = g.chirality
    return out


def _header(g):
    arrays = _arrays(g)
    return {
        "group": f"so{g.n}",
        "k": g.k,
        "twoS": g.twoS,
        "dim": g.dim,
        "construction": g.construction,
        "version": VERSION,
        "arrays": [[name, list(a.shape)] for name, a in arrays.items()],
    }


def to_bytes(g):
    head = json.dumps(_header(g), sort_keys=True).encode()
    parts = [MAGIC, struct.pack("<I", len(head)), head]
    for a in _arrays(g).values():
        parts.append(np.ascontiguousarray(a, dtype="<c16").tobytes())
    return b"".join(parts)


def from_bytes(data):
    if data[: len(MAGIC)] != MAGIC:
        raise ValueError("not a gamma cache file")
    off = len(MAGIC)
    (hlen,) = struct.unpack_from("<I", data, off)
    off += 4
    head = json.loads(data[off : off + hlen].decode())
    off += hlen
    if head.get("version") != VERSION:
        raise ValueError(f"unsupported cache version {head.get('version')}")
    arrays = {}
    for name, shape in head["arrays"]:
        count = int(np.prod(shape))
        arr = np.frombuffer(data, dtype="<c16", count=count, offset=off).reshape(shape)
        arrays[name] = arr.astype(np.complex128)
        off += 16 * count
    if off != len(data):
        raise ValueError("trailing bytes in cache file")
    label = SpinLabel.of(head["group"], head["twoS"])
    return GammaSet(
        label.n,
        head["twoS"],
        arrays["gammas"],
        arrays["generators"],
        chirality=arrays.get("chirality"),
        construction=head["construction"],
    )


def save(g, path):
    """Atomically write ``g`` to ``path``."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=path.name, suffix=".tmp")
    try:
        with os.fdopen(fd, "wb") as fh:
            fh.write(to_bytes(g))
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise
    return path


def load(path):
    return from_bytes(Path(path).read_bytes())


def load_or_build(group, twoS, construction="auto", directory=None):
    """``(gammaset, path, hit)``; builds and stores the set on a miss."""
    label = SpinLabel.of(group, twoS)
    d = cache_dir(directory)
    if construction == "auto":
        construction = "oscillator" if label.odd else "restricted"
    path = d / cache_name(label.n, twoS, construction)
    if path.exists():
        return load(path), path, True
    g = build_gammas(group, twoS, construction)
    g.construction = construction
    save(g, path)
    return g, path, False


def to_json(g):
    """Inspection dump: header plus arrays as nested ``[re, im]`` pairs."""
    out = _header(g)
    out["data"] = {
        name: np.stack([a.real, a.imag], axis=-1).tolist() for name, a in _arrays(g).items()
    }
    return out


def export_json(g, path):
    Path(path).write_text(json.dumps(to_json(g)))
    return path

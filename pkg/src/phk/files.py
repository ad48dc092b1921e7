"""File formats for spaces, maps and towers, plus corpus-name resolution.

A space reference is either a corpus name or a path to an SSet JSON file.
Map files are JSON objects ``{"source": ref, "target": ref, "images": {id:
formal}}`` where a ref is a corpus name, a path relative to the map file, or
an inline SSet object.  Tower files list their levels and transitions:

    {"levels": [ref, ...], "transitions": [map-ref, ...]}

where transition k maps level k+1 to level k; a transition may be an
inline ``{"images": ...}`` object, its source and target being implied.
Group towers use ``{"levels": [[orders], ...], "maps": [matrix, ...]}``.
"""

import json
import os

from .corpus import CORPUS, CorpusError, corpus
from .simplicial import SMap, SSet, SSetError, build_sset, parse_formal, parse_space
from .towers import GroupTower, SpaceTower, TowerError, TowerMap


class InputError(ValueError):
    """Unreadable or malformed input; the CLI maps it to exit status 2."""


def _read_json(path):
    try:
        with open(path) as fh:
            text = fh.read()
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc.strerror}") from None
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise InputError(f"{path}: parse error at line {exc.lineno}, column {exc.colno}: "
                         f"{exc.msg}") from None


def load_space(ref, base_dir=".", D=None):
    """SSet from a corpus name, a file path or an inline dict."""
    if isinstance(ref, SSet):
        return ref
    if isinstance(ref, dict):
        return build_sset(ref)
    if ref in CORPUS:
        obj = corpus(ref, D=D) if D is not None else corpus(ref)
        if not isinstance(obj, SSet):
            raise InputError(f"corpus entry {ref!r} is not a simplicial set")
        return obj
    path = os.path.join(base_dir, ref)
    if not os.path.exists(path):
        raise InputError(f"{ref!r} is neither a corpus entry nor an existing file")
    try:
        with open(path) as fh:
            X = parse_space(fh.read())
    except SSetError as exc:
        raise SSetError(f"{path}: {exc}", exc.simplex, exc.kind) from None
    return X.truncate(D) if D is not None and D < X.dim_cap else X


def map_to_dict(f):
    return {"source": f.source.to_dict(), "target": f.target.to_dict(),
            "images": {x: f.images[x].format() for lv in f.source.nd for x in lv}}


def _images(raw, S, T, where):
    if not isinstance(raw, dict):
        raise InputError(f"{where}: 'images' must be an object")
    out = {}
    for x, t in raw.items():
        if x not in S.dim:
            raise SSetError(f"{where}: image given for unknown simplex {x!r}", x, "dangling")
        out[x] = parse_formal(str(t), T.dim, S.dim[x], x)
    return out


def load_map(ref, base_dir="."):
    """SMap or TowerMap from a map file or a corpus name."""
    if ref in CORPUS:
        obj = corpus(ref)
        if not isinstance(obj, (SMap, TowerMap)):
            raise InputError(f"corpus entry {ref!r} is not a map")
        return obj
    path = os.path.join(base_dir, ref)
    doc = _read_json(path)
    here = os.path.dirname(path)
    if "tower" in doc:
        S = load_space(doc["source"], here)
        T = load_tower(doc["tower"], here)
        maps = [SMap(S, Y, _images(m, S, Y, f"{path}: level {k}"))
                for k, (m, Y) in enumerate(zip(doc.get("maps", []), T.levels))]
        f = TowerMap(S, T, maps)
        try:
            f.validate()
        except TowerError as exc:
            raise InputError(f"{path}: {exc}") from None
        return f
    for key in ("source", "target", "images"):
        if key not in doc:
            raise InputError(f"{path}: missing key {key!r}")
    S, T = load_space(doc["source"], here), load_space(doc["target"], here)
    return SMap(S, T, _images(doc["images"], S, T, path))


def load_tower(ref, base_dir="."):
    """SpaceTower from a tower file or a corpus name; coherence is validated."""
    if isinstance(ref, str) and ref in CORPUS:
        obj = corpus(ref)
        if not isinstance(obj, SpaceTower):
            raise InputError(f"corpus entry {ref!r} is not a tower")
        return obj
    if isinstance(ref, dict):
        doc, here = ref, base_dir
    else:
        path = os.path.join(base_dir, ref)
        doc, here = _read_json(path), os.path.dirname(path)
    levels = [load_space(r, here) for r in doc.get("levels", [])]
    trans = doc.get("transitions", [])
    if len(trans) != max(len(levels) - 1, 0):
        raise InputError("tower needs one transition per consecutive pair of levels")
    maps = []
    for k, t in enumerate(trans):
        if isinstance(t, str):
            t = _read_json(os.path.join(here, t))
        S, T = levels[k + 1], levels[k]
        maps.append(SMap(S, T, _images(t.get("images"), S, T, f"transition {k + 1} -> {k}"),
                         validate=False))
    try:
        return SpaceTower(levels, maps)
    except TowerError as exc:
        raise InputError(str(exc)) from None


def write_tower(T, directory):
    """Write ``tower.json`` with one level file and one transition file per entry."""
    os.makedirs(directory, exist_ok=True)
    names = []
    for k, X in enumerate(T.levels):
        names.append(f"level_{k}.json")
        with open(os.path.join(directory, names[-1]), "w") as fh:
            fh.write(X.to_json())
    trans = []
    for k, f in enumerate(T.maps):
        trans.append(f"transition_{k + 1}_{k}.json")
        with open(os.path.join(directory, trans[-1]), "w") as fh:
            json.dump({"images": {x: f.images[x].format() for lv in f.source.nd for x in lv}},
                      fh, indent=2)
            fh.write("\n")
    path = os.path.join(directory, "tower.json")
    with open(path, "w") as fh:
        json.dump({"levels": names, "transitions": trans}, fh, indent=2)
        fh.write("\n")
    return path


def load_group_tower(ref, base_dir="."):
    """GroupTower from a JSON file, or from ``a,b,c`` meaning Z/a <- Z/b <- Z/c."""
    if os.path.exists(os.path.join(base_dir, ref)):
        doc = _read_json(os.path.join(base_dir, ref))
        try:
            return GroupTower.from_dict(doc)
        except (KeyError, TypeError, ValueError) as exc:
            raise InputError(f"{ref}: malformed group tower ({exc})") from None
    try:
        moduli = [int(t) for t in ref.split(",")]
    except ValueError:
        raise InputError(f"{ref!r} is neither a group-tower file nor a modulus list") from None
    try:
        return GroupTower.cyclic_chain(moduli)
    except TowerError as exc:
        raise InputError(str(exc)) from None


__all__ = ["InputError", "load_space", "load_map", "load_tower", "write_tower",
           "load_group_tower", "map_to_dict", "CorpusError"]

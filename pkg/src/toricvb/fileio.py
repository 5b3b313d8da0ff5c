"""JSON file formats: fans, filtration data, multisets, and flags.

All indices are 0-based.  Field elements travel as strings ("3/4", "2")
so exactness never depends on numeric parsing; multiset lifts are plain
integer vectors and are canonicalized on load.  Serialization preserves
input order for rays and cones, and parse(serialize(x)) == x.
"""

import json
import os

from toricvb.errors import SchemaError
from toricvb.fan import Fan
from toricvb.klyachko import Filtration, KlyachkoData, MultisetPsi
from toricvb.linalg import Field, Subspace
from toricvb.moduli import FlagCollection


def _fail(path, msg):
    raise SchemaError(f"{path}: {msg}")


def _require(doc, key, kind, path):
    if not isinstance(doc, dict) or key not in doc:
        _fail(path, f"missing field '{key}'")
    val = doc[key]
    if kind is not None and not isinstance(val, kind):
        _fail(f"{path}.{key}", f"expected {kind.__name__}")
    return val


def _int_list(val, path):
    if not isinstance(val, list) or not all(isinstance(x, int) for x in val):
        _fail(path, "expected a list of integers")
    return val


def parse_field(doc, path="field"):
    if doc == "Q":
        return Field()
    if isinstance(doc, dict) and set(doc) == {"Fp"} and isinstance(doc["Fp"], int):
        try:
            return Field(doc["Fp"])
        except ValueError as e:
            _fail(path, str(e))
    _fail(path, 'expected "Q" or {"Fp": p}')


def dump_field(field):
    return "Q" if field.is_rational else {"Fp": field.p}


def parse_fan(doc, path="fan"):
    n = _require(doc, "lattice_rank", int, path)
    rays = _require(doc, "rays", list, path)
    cones = _require(doc, "max_cones", list, path)
    rays = [_int_list(r, f"{path}.rays[{k}]") for k, r in enumerate(rays)]
    cones = [_int_list(c, f"{path}.max_cones[{k}]") for k, c in enumerate(cones)]
    try:
        return Fan(lattice_rank=n, rays=tuple(map(tuple, rays)),
                   max_cones=tuple(map(tuple, cones)))
    except ValueError as e:
        _fail(path, str(e))


def dump_fan(fan):
    return {
        "lattice_rank": fan.lattice_rank,
        "rays": [list(r) for r in fan.rays],
        "max_cones": [list(c) for c in fan.max_cones],
    }


def _resolve_fan(doc, base_dir, path):
    if isinstance(doc, str):
        fan_path = doc if os.path.isabs(doc) else os.path.join(base_dir, doc)
        return parse_fan(_read_json(fan_path), path=fan_path)
    return parse_fan(doc, path=path)


def _read_json(filename):
    try:
        with open(filename) as fh:
            return json.load(fh)
    except OSError as e:
        raise SchemaError(f"{filename}: {e.strerror or e}")
    except json.JSONDecodeError as e:
        raise SchemaError(f"{filename}:{e.lineno}:{e.colno}: invalid JSON ({e.msg})")


def _parse_basis(field, ambient, rows, path):
    if not isinstance(rows, list):
        _fail(path, "expected a list of basis rows")
    parsed = []
    for k, row in enumerate(rows):
        if not isinstance(row, list) or len(row) != ambient:
            _fail(f"{path}[{k}]", f"expected a row of {ambient} entries")
        try:
            parsed.append([field.parse(str(x)) for x in row])
        except (ValueError, ZeroDivisionError) as e:
            _fail(f"{path}[{k}]", f"bad field element: {e}")
    return Subspace.from_rows(field, ambient, parsed)


def _dump_basis(field, space):
    return [[field.format(x) for x in row] for row in space.basis.entries]


def _indexed(doc, count, what, path):
    """Dict keyed by stringified indices 0..count-1, as an ordered list."""
    if not isinstance(doc, dict):
        _fail(path, "expected an object keyed by index")
    try:
        keys = {int(k): v for k, v in doc.items()}
    except ValueError:
        _fail(path, "keys must be integer strings")
    if set(keys) != set(range(count)):
        _fail(path, f"need exactly one entry per {what} (0..{count - 1})")
    return [keys[i] for i in range(count)]


def parse_klyachko(doc, base_dir="."):
    field = parse_field(_require(doc, "field", None, "klyachko"))
    rank = _require(doc, "rank", int, "klyachko")
    fan = _resolve_fan(_require(doc, "fan", None, "klyachko"), base_dir, "klyachko.fan")
    filts = _require(doc, "filtrations", dict, "klyachko")
    entries_per_ray = _indexed(filts, len(fan.rays), "ray", "klyachko.filtrations")
    filtrations = []
    for ray, entries in enumerate(entries_per_ray):
        path = f"klyachko.filtrations.{ray}"
        if not isinstance(entries, list) or not entries:
            _fail(path, "expected a nonempty list of filtration entries")
        parsed = []
        for k, entry in enumerate(entries):
            jump = _require(entry, "jump", int, f"{path}[{k}]")
            basis = _require(entry, "basis", list, f"{path}[{k}]")
            parsed.append((jump, _parse_basis(field, rank, basis, f"{path}[{k}].basis")))
        filtrations.append(Filtration(ray=ray, entries=tuple(parsed)))
    return KlyachkoData(field=field, rank=rank, fan=fan, filtrations=tuple(filtrations))


def dump_klyachko(d):
    return {
        "field": dump_field(d.field),
        "rank": d.rank,
        "fan": dump_fan(d.fan),
        "filtrations": {
            str(k): [{"jump": jump, "basis": _dump_basis(d.field, space)}
                     for jump, space in f.entries]
            for k, f in enumerate(d.filtrations)
        },
    }


def parse_psi(doc, base_dir="."):
    fan = _resolve_fan(_require(doc, "fan", None, "psi"), base_dir, "psi.fan")
    ms = _require(doc, "multisets", dict, "psi")
    per_cone = _indexed(ms, len(fan.max_cones), "maximal cone", "psi.multisets")
    lifts = []
    for k, entry in enumerate(per_cone):
        path = f"psi.multisets.{k}"
        if not isinstance(entry, list) or not entry:
            _fail(path, "expected a nonempty list of integer lifts")
        lifts.append([tuple(_int_list(u, f"{path}[{i}]")) for i, u in enumerate(entry)])
        for u in lifts[-1]:
            if len(u) != fan.lattice_rank:
                _fail(path, f"lift {u} has wrong length")
    try:
        return MultisetPsi.from_lifts(fan, lifts)
    except ValueError as e:
        _fail("psi.multisets", str(e))


def dump_psi(psi):
    return {
        "fan": dump_fan(psi.fan),
        "multisets": {
            str(k): [list(c.canonical) for c in ms]
            for k, ms in enumerate(psi.multisets)
        },
    }


def parse_flags(doc):
    field = parse_field(_require(doc, "field", None, "flags"))
    rank = _require(doc, "rank", int, "flags")
    flags = _require(doc, "flags", dict, "flags")
    try:
        keys = sorted(int(k) for k in flags)
    except ValueError:
        _fail("flags.flags", "keys must be integer strings")
    if keys != list(range(len(keys))):
        _fail("flags.flags", "ray keys must be 0..n-1 with no gaps")
    chains = []
    for ray in range(len(keys)):
        entry = flags[str(ray)]
        path = f"flags.flags.{ray}"
        if not isinstance(entry, list):
            _fail(path, "expected a list of flag members")
        chain = []
        for k, member in enumerate(entry):
            dim = _require(member, "dim", int, f"{path}[{k}]")
            basis = _require(member, "basis", list, f"{path}[{k}]")
            space = _parse_basis(field, rank, basis, f"{path}[{k}].basis")
            if space.dim != dim:
                _fail(f"{path}[{k}]", f"basis spans dimension {space.dim}, "
                                      f"declared {dim}")
            chain.append(space)
        chains.append(tuple(chain))
    return FlagCollection(field=field, rank=rank, chains=tuple(chains))


def dump_flags(flags):
    return {
        "field": dump_field(flags.field),
        "rank": flags.rank,
        "flags": {
            str(ray): [{"dim": s.dim, "basis": _dump_basis(flags.field, s)}
                       for s in chain]
            for ray, chain in enumerate(flags.chains)
        },
    }


def load_fan(filename):
    return parse_fan(_read_json(filename), path=filename)


def load_klyachko(filename):
    return parse_klyachko(_read_json(filename), base_dir=os.path.dirname(filename) or ".")


def load_psi(filename):
    return parse_psi(_read_json(filename), base_dir=os.path.dirname(filename) or ".")


def load_flags(filename):
    return parse_flags(_read_json(filename))


def write_json(doc, filename):
    with open(filename, "w") as fh:
        json.dump(doc, fh, indent=2)
        fh.write("\n")

"""JSON field-spec and report files.

A field spec stores components as ``{"i,j,...": "polynomial"}`` with 1-based
indices; absent components are zero. Reports store exact values as ``"p/q"``
strings and floats only under ``sup_norm``.
"""
import hashlib
import itertools
import json
import os
from dataclasses import dataclass, field

from gmpy2 import mpq
import numpy as np

from .curvature import MetricField
from .errors import ArgumentError, InvalidSectionError, ParseError
from .jets import check_acs
from .parsing import parse_polynomial
from .polyfield import MAX_DEGREE, MAX_FIBER, MAX_VARS, PolyMatrix, PolyScalar, TensorPolyField

FORMAT_VERSION = 1
CASES = ("form", "metric", "connection", "acs", "superconnection", "gauge", "diffeo")
SUPER_BLOCKS = ("A_plus", "A_minus", "chi_pm", "chi_mp")
GRADED_GAUGE_BLOCKS = ("plus", "minus")


def degree_cap():
    raw = os.environ.get("CURVLAB_MAX_DEGREE")
    if not raw:
        return MAX_DEGREE
    try:
        cap = int(raw)
    except ValueError as exc:
        raise ArgumentError(f"CURVLAB_MAX_DEGREE must be an integer, got {raw!r}") from exc
    return max(0, min(cap, MAX_DEGREE))


def index_key(idx):
    return ",".join(str(i + 1) for i in idx)


def _parse_key(key, shape, where):
    try:
        idx = tuple(int(t) - 1 for t in key.split(","))
    except ValueError as exc:
        raise ParseError(f"bad index {key!r}", where) from exc
    if len(idx) != len(shape) or any(not 0 <= i < d for i, d in zip(idx, shape)):
        raise ParseError(f"index {key!r} outside the shape {tuple(shape)} (1-based)", where)
    return idx


def _grid(table, shape, m, where):
    """Dense object array from a ``{key: polynomial string}`` table."""
    if not isinstance(table, dict):
        raise ParseError("components must be an object", where)
    zero = PolyScalar.zero(m)
    arr = np.empty(shape, dtype=object)
    for idx in itertools.product(*(range(d) for d in shape)):
        arr[idx] = zero
    cap = degree_cap()
    for key, text in table.items():
        idx = _parse_key(key, shape, where)
        loc = f"{where}[{key}]"
        try:
            p = parse_polynomial(text, m)
        except ParseError as exc:
            raise ParseError(exc.args[0], loc) from None
        if p.degree > cap:
            raise ParseError(f"degree {p.degree} exceeds the cap {cap}", loc)
        arr[idx] = p
    return arr


def _table(arr):
    return {index_key(idx): str(p) for idx, p in np.ndenumerate(arr) if not p.is_zero()}


def _fill_antisymmetric(arr, where):
    k = arr.ndim
    for idx in itertools.product(range(arr.shape[0]), repeat=k):
        p = arr[idx]
        if p.is_zero():
            continue
        for perm in itertools.permutations(range(k)):
            target = tuple(idx[i] for i in perm)
            sign = _sign(perm)
            want = p if sign > 0 else -p
            have = arr[target]
            if have.is_zero():
                arr[target] = want
            elif have != want:
                raise InvalidSectionError(
                    f"{where}: components {index_key(idx)} and {index_key(target)} "
                    "are not antisymmetric", target)
    return arr


def _sign(perm):
    inv = sum(1 for i, j in itertools.combinations(range(len(perm)), 2) if perm[i] > perm[j])
    return -1 if inv % 2 else 1


def _fill_symmetric(arr, where):
    n = arr.shape[0]
    for i, j in itertools.combinations(range(n), 2):
        a, b = arr[i, j], arr[j, i]
        if a.is_zero():
            arr[i, j] = b
        elif b.is_zero():
            arr[j, i] = a
        elif a != b:
            raise InvalidSectionError(
                f"{where}: components {i + 1},{j + 1} and {j + 1},{i + 1} differ", (i, j))
    return arr


@dataclass
class FieldSpec:
    """In-memory form of a field-spec file."""

    case: str
    base_dim: int
    data: dict = field(default_factory=dict)   # block name -> ndarray of PolyScalar
    fiber_dim: int = None
    degree: int = None
    grading: tuple = None
    inverse: dict = None

    # -- conversion to library objects

    def value(self):
        """The library object this field spec describes."""
        c = self.case
        m = self.base_dim
        if c == "form":
            return TensorPolyField.form(self.data["components"], m)
        if c == "metric":
            return MetricField(PolyMatrix(self.data["components"], m))
        if c == "connection":
            return TensorPolyField.connection(
                [PolyMatrix(a, m) for a in self.data["components"]])
        if c == "acs":
            J = TensorPolyField.endomorphism(PolyMatrix(self.data["components"], m))
            check_acs(J)
            return J
        if c == "superconnection":
            from .supergeometry import SuperconnectionField

            d = self.data
            return SuperconnectionField(
                [PolyMatrix(a, m) for a in d["A_plus"]], [PolyMatrix(a, m) for a in d["A_minus"]],
                PolyMatrix(d["chi_pm"], m), PolyMatrix(d["chi_mp"], m))
        if c == "gauge":
            if self.grading:
                return tuple(PolyMatrix(self.data[b], m) for b in GRADED_GAUGE_BLOCKS)
            return PolyMatrix(self.data["components"], m)
        if c == "diffeo":
            return list(self.data["components"])
        raise ArgumentError(f"unknown case {c!r}")

    def inverse_value(self):
        if not self.inverse:
            return None
        m = self.base_dim
        if self.grading:
            return tuple(PolyMatrix(self.inverse[b], m) if b in self.inverse else None
                         for b in GRADED_GAUGE_BLOCKS)
        return PolyMatrix(self.inverse["components"], m)

    # -- construction from library objects

    @classmethod
    def from_value(cls, case, value, inverse=None):
        if case == "form":
            return cls(case, value.base_dim, {"components": value.components}, degree=value.rank)
        if case == "metric":
            g = (value if isinstance(value, MetricField) else MetricField(value)).g
            return cls(case, g.base_dim, {"components": g.components})
        if case == "connection":
            return cls(case, value.base_dim, {"components": value.components},
                       fiber_dim=value.shape[1])
        if case == "acs":
            return cls(case, value.base_dim, {"components": value.components})
        if case == "superconnection":
            return cls(case, value.base_dim, {
                "A_plus": value.A_plus.components, "A_minus": value.A_minus.components,
                "chi_pm": value.chi_pm.entries, "chi_mp": value.chi_mp.entries},
                grading=(value.spec.n_plus, value.spec.n_minus))
        if case == "gauge":
            if isinstance(value, tuple):
                inv = None if inverse is None else {
                    b: v.entries for b, v in zip(GRADED_GAUGE_BLOCKS, inverse) if v is not None}
                return cls(case, value[0].num_vars,
                           {b: v.entries for b, v in zip(GRADED_GAUGE_BLOCKS, value)},
                           grading=(value[0].rows, value[1].rows), inverse=inv)
            inv = None if inverse is None else {"components": inverse.entries}
            return cls(case, value.num_vars, {"components": value.entries},
                       fiber_dim=value.rows, inverse=inv)
        if case == "diffeo":
            arr = np.empty(len(value), dtype=object)
            for i, p in enumerate(value):
                arr[i] = p
            return cls(case, len(value), {"components": arr})
        raise ArgumentError(f"unknown case {case!r}")

    # -- JSON

    def to_json(self):
        out = {"format_version": FORMAT_VERSION, "case": self.case, "base_dim": self.base_dim}
        if self.fiber_dim is not None:
            out["fiber_dim"] = self.fiber_dim
        if self.degree is not None:
            out["degree"] = self.degree
        if self.grading is not None:
            out["grading"] = list(self.grading)
        if list(self.data) == ["components"]:
            out["components"] = _table(self.data["components"])
        else:
            out["components"] = {name: _table(arr) for name, arr in self.data.items()}
        if self.inverse:
            if list(self.inverse) == ["components"]:
                out["inverse"] = _table(self.inverse["components"])
            else:
                out["inverse"] = {name: _table(arr) for name, arr in self.inverse.items()}
        return out

    def dumps(self):
        return json.dumps(self.to_json(), indent=2, sort_keys=False) + "\n"

    def __eq__(self, other):
        if not isinstance(other, FieldSpec):
            return NotImplemented
        return self.to_json() == other.to_json()


def _require_int(doc, key, lo, hi, where="spec"):
    v = doc.get(key)
    if not isinstance(v, int) or isinstance(v, bool) or not lo <= v <= hi:
        raise ParseError(f"{key} must be an integer in [{lo}, {hi}], got {v!r}", where)
    return v


def load_spec(doc):
    """Parse a field-spec JSON document (dict or text)."""
    if isinstance(doc, (str, bytes)):
        try:
            doc = json.loads(doc)
        except json.JSONDecodeError as exc:
            raise ParseError(f"invalid JSON: {exc.msg}", f"line {exc.lineno} column {exc.colno}")
    if not isinstance(doc, dict):
        raise ParseError("spec must be a JSON object")
    if doc.get("format_version") != FORMAT_VERSION:
        raise ParseError(f"unsupported format_version {doc.get('format_version')!r}")
    case = doc.get("case")
    if case not in CASES:
        raise ParseError(f"case must be one of {', '.join(CASES)}; got {case!r}")
    m = _require_int(doc, "base_dim", 1, MAX_VARS)
    comps = doc.get("components")
    if comps is None:
        raise ParseError("missing components")
    spec = FieldSpec(case, m)
    if case == "form":
        k = _require_int(doc, "degree", 0, m)
        spec.degree = k
        arr = _grid(comps, (m,) * k, m, "components")
        spec.data["components"] = _fill_antisymmetric(arr, "components") if k > 1 else arr
    elif case == "metric":
        spec.data["components"] = _fill_symmetric(_grid(comps, (m, m), m, "components"),
                                                  "components")
    elif case == "connection":
        n = spec.fiber_dim = _require_int(doc, "fiber_dim", 1, MAX_FIBER)
        spec.data["components"] = _grid(comps, (m, n, n), m, "components")
    elif case == "acs":
        spec.data["components"] = _grid(comps, (m, m), m, "components")
    elif case == "diffeo":
        spec.data["components"] = _grid(comps, (m,), m, "components")
    elif case == "superconnection" or (case == "gauge" and "grading" in doc):
        grading = doc.get("grading")
        if (not isinstance(grading, list) or len(grading) != 2
                or not all(isinstance(v, int) and 1 <= v <= MAX_FIBER for v in grading)):
            raise ParseError(f"grading must be [n_plus, n_minus], got {grading!r}")
        spec.grading = p, q = tuple(grading)
        if case == "superconnection":
            shapes = {"A_plus": (m, p, p), "A_minus": (m, q, q), "chi_pm": (p, q),
                      "chi_mp": (q, p)}
        else:
            shapes = {"plus": (p, p), "minus": (q, q)}
        spec.data = _blocks(comps, shapes, m, "components")
        if case == "gauge" and "inverse" in doc:
            inv = doc["inverse"]
            if not isinstance(inv, dict) or set(inv) - set(shapes):
                raise ParseError("inverse must map plus/minus to component tables")
            spec.inverse = {b: _grid(inv[b], shapes[b], m, f"inverse.{b}")
                            for b in shapes if b in inv}
    else:  # ungraded gauge
        n = spec.fiber_dim = _require_int(doc, "fiber_dim", 1, MAX_FIBER)
        spec.data["components"] = _grid(comps, (n, n), m, "components")
        if "inverse" in doc:
            spec.inverse = {"components": _grid(doc["inverse"], (n, n), m, "inverse")}
    return spec


def _blocks(comps, shapes, m, where):
    if not isinstance(comps, dict) or set(comps) - set(shapes):
        raise ParseError(f"{where} must have blocks among {', '.join(shapes)}")
    return {name: _grid(comps.get(name, {}), shape, m, f"{where}.{name}")
            for name, shape in shapes.items()}


def read_spec(path):
    try:
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise ParseError(f"cannot read {path}: {exc.strerror}") from exc
    try:
        return load_spec(text)
    except ParseError as exc:
        exc.args = (f"{os.path.basename(path)}: {exc.args[0]}",)
        raise


def digest(path):
    with open(path, "rb") as fh:
        return hashlib.sha256(fh.read()).hexdigest()


# -- reports ---------------------------------------------------------------------


def format_value(v):
    if isinstance(v, PolyScalar):
        return str(v)
    v = mpq(v)
    return str(v)


def _norm(v):
    if isinstance(v, PolyScalar):
        return max((abs(float(c)) for c in v.terms.values()), default=0.0)
    return abs(float(v))


def block_entry(arr):
    """Report entry for an array of exact values (rationals or polynomials).

    For polynomial entries ``sup_norm`` is the largest absolute coefficient.
    """
    arr = np.asarray(arr, dtype=object)
    comps = {}
    norm = 0.0
    for idx, v in np.ndenumerate(arr):
        n = _norm(v)
        if n:
            comps[index_key(idx) if idx else "scalar"] = format_value(v)
        norm = max(norm, n)
    return {"shape": list(arr.shape), "components": comps, "sup_norm": norm}


def parse_block(entry, num_vars=None):
    """Inverse of ``block_entry``: dense array of rationals (or polynomials)."""
    shape = tuple(entry["shape"])
    out = np.empty(shape, dtype=object)
    zero = mpq(0) if num_vars is None else PolyScalar.zero(num_vars)
    for idx in itertools.product(*(range(d) for d in shape)):
        out[idx] = zero
    for key, text in entry["components"].items():
        idx = () if key == "scalar" else tuple(int(t) - 1 for t in key.split(","))
        out[idx] = mpq(text) if num_vars is None else parse_polynomial(text, num_vars)
    return out


def make_report(operation, inputs, blocks, point=None, verdict=None, details=None,
                timing=None):
    return {
        "format_version": FORMAT_VERSION,
        "operation": operation,
        "inputs": inputs,
        "point": None if point is None else [format_value(c) for c in point],
        "blocks": {name: block_entry(arr) for name, arr in blocks.items()},
        "verdict": verdict,
        "details": details or {},
        "timing_seconds": timing,
    }


def dump_report(report):
    return json.dumps(report, indent=2, sort_keys=False) + "\n"


def load_report(text):
    doc = json.loads(text)
    if doc.get("format_version") != FORMAT_VERSION:
        raise ParseError("unsupported report format_version")
    return doc

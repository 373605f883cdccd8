"""Versioned JSON instance documents: parsing, validation and serialization."""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import Any

from .algebra import Cardinal, CardinalBound, FiniteCarrier, FiniteSemigroup, Full, IdealSpec
from .errors import ChaoslabError, ParseError, ValidationError
from .finite import FiniteAction
from .fort import FortGroupSpec, OrbitClass, TranslationActionSpec
from .iterated import IteratedSystem

SCHEMA_VERSION = 1
KINDS = ("finite-action", "iterated-system", "fort-spec", "translation")
KIND_ALIASES = {"translation-action": "translation"}

_FIELDS = {
    "finite-action": ({"phase", "semigroup", "act"}, {"parts"}),
    "iterated-system": ({"phase", "step"}, {"metric"}),
    "fort-spec": ({"group_size", "classes"}, {"abelian"}),
    "translation": (set(), {"rank", "coefficients", "real_factor", "k_card"}),
}
_COMMON = {"schema", "kind", "ideals", "name"}


@dataclass(frozen=True)
class InstanceDocument:
    kind: str
    body: dict
    ideals: tuple = ()
    name: str | None = None
    model: Any = field(default=None, compare=False, repr=False)

    def to_json(self) -> dict:
        doc = {"schema": SCHEMA_VERSION, "kind": self.kind}
        if self.name is not None:
            doc["name"] = self.name
        doc.update(self.body)
        if self.ideals:
            doc["ideals"] = [ideal_to_json(i) for i in self.ideals]
        return doc

    def dumps(self) -> str:
        return json.dumps(self.to_json(), indent=2, ensure_ascii=False) + "\n"


# --------------------------------------------------------------------------
# small validators
# --------------------------------------------------------------------------


def _int(value, path: str, lo: int | None = None, hi: int | None = None) -> int:
    if isinstance(value, bool) or not isinstance(value, int):
        raise ValidationError(path, "expected an integer")
    if lo is not None and value < lo or hi is not None and value >= hi:
        raise ValidationError(path, "integer out of range")
    return value


def _list(value, path: str, length: int | None = None) -> list:
    if not isinstance(value, list):
        raise ValidationError(path, "expected a list")
    if length is not None and len(value) != length:
        # point at the first missing or surplus entry
        where = min(len(value), length)
        raise ValidationError(f"{path}[{where}]", f"expected {length} entries, got {len(value)}")
    return value


def _table(value, path: str, rows: int, cols: int, hi: int) -> list[list[int]]:
    out = []
    for i, row in enumerate(_list(value, path, rows)):
        row = _list(row, f"{path}[{i}]", cols)
        out.append([_int(v, f"{path}[{i}][{j}]", 0, hi) for j, v in enumerate(row)])
    return out


def _cardinal(value, path: str) -> Cardinal:
    try:
        return Cardinal.parse(value)
    except (ValueError, TypeError, AttributeError):
        raise ValidationError(path, f"not a cardinal: {value!r}") from None


def _rational(value, path: str) -> Fraction:
    if isinstance(value, bool):
        raise ValidationError(path, "expected a rational")
    try:
        if isinstance(value, (int, str)):
            return Fraction(value)
    except (ValueError, ZeroDivisionError):
        pass
    raise ValidationError(path, "expected an integer or a 'p/q' string")


def parse_ideal(value, path: str) -> IdealSpec:
    if value == "full":
        return Full()
    if not isinstance(value, dict) or len(value) != 1:
        raise ValidationError(path, "expected {'carrier': [...]}, {'kappa': ...} or 'full'")
    (key, inner), = value.items()
    if key == "carrier":
        items = _list(inner, f"{path}.carrier")
        return FiniteCarrier(frozenset(_int(v, f"{path}.carrier[{i}]", 0) for i, v in enumerate(items)))
    if key == "kappa":
        kappa = _cardinal(inner, f"{path}.kappa")
        if not kappa.infinite:
            raise ValidationError(f"{path}.kappa", "cardinal bounds must be infinite")
        return CardinalBound(kappa)
    raise ValidationError(f"{path}.{key}", "unknown ideal field")


def ideal_to_json(ideal: IdealSpec):
    if isinstance(ideal, Full):
        return "full"
    if isinstance(ideal, FiniteCarrier):
        return {"carrier": sorted(ideal.carrier)}
    return {"kappa": str(ideal.kappa)}


def _rational_json(q: Fraction):
    return q.numerator if q.denominator == 1 else f"{q.numerator}/{q.denominator}"


# --------------------------------------------------------------------------
# per-kind builders
# --------------------------------------------------------------------------


def _finite_action(raw: dict):
    m = _int(raw["phase"], "body.phase", 1)
    sg_raw = raw["semigroup"]
    if not isinstance(sg_raw, dict):
        raise ValidationError("body.semigroup", "expected an object")
    extra = set(sg_raw) - {"elements", "compose", "identity"}
    if extra:
        raise ValidationError(f"body.semigroup.{sorted(extra)[0]}", "unknown field")
    for key in ("elements", "compose", "identity"):
        if key not in sg_raw:
            raise ValidationError(f"body.semigroup.{key}", "missing field")
    n = _int(sg_raw["elements"], "body.semigroup.elements", 1)
    compose = _table(sg_raw["compose"], "body.semigroup.compose", n, n, n)
    identity = _int(sg_raw["identity"], "body.semigroup.identity", 0, n)
    act = _table(raw["act"], "body.act", m, n, m)
    try:
        sg = FiniteSemigroup(compose, identity)
    except ChaoslabError as exc:
        raise ValidationError("body.semigroup", str(exc)) from None
    try:
        action = FiniteAction(sg, act)
    except ChaoslabError as exc:
        raise ValidationError("body.act", str(exc)) from None
    body = {"phase": m, "semigroup": {"elements": n, "compose": compose, "identity": identity},
            "act": act}
    if "parts" in raw:
        parts = [[_int(v, f"body.parts[{i}][{j}]", 0, n) for j, v in enumerate(_list(p, f"body.parts[{i}]"))]
                 for i, p in enumerate(_list(raw["parts"], "body.parts"))]
        body["parts"] = parts
    return body, action


def _iterated(raw: dict):
    m = _int(raw["phase"], "body.phase", 1)
    step = [_int(v, f"body.step[{i}]", 0, m) for i, v in enumerate(_list(raw["step"], "body.step", m))]
    metric_raw = raw.get("metric", "discrete")
    body = {"phase": m, "step": step}
    if metric_raw == "discrete":
        sys = IteratedSystem.discrete(step)
        body["metric"] = "discrete"
    else:
        rows = _list(metric_raw, "body.metric", m)
        metric = [[_rational(v, f"body.metric[{i}][{j}]") for j, v in enumerate(_list(r, f"body.metric[{i}]", m))]
                  for i, r in enumerate(rows)]
        try:
            sys = IteratedSystem(step, metric)
        except ChaoslabError as exc:
            raise ValidationError("body.metric", str(exc)) from None
        body["metric"] = [[_rational_json(q) for q in row] for row in metric]
    return body, sys


def _fort_spec(raw: dict):
    group = _cardinal(raw["group_size"], "body.group_size")
    abelian = raw.get("abelian", True)
    if not isinstance(abelian, bool):
        raise ValidationError("body.abelian", "expected a boolean")
    classes = []
    body_classes = []
    for i, c in enumerate(_list(raw["classes"], "body.classes")):
        path = f"body.classes[{i}]"
        if not isinstance(c, dict):
            raise ValidationError(path, "expected an object")
        extra = set(c) - {"label", "points", "orbit", "stabilizer"}
        if extra:
            raise ValidationError(f"{path}.{sorted(extra)[0]}", "unknown field")
        for key in ("points", "orbit", "stabilizer"):
            if key not in c:
                raise ValidationError(f"{path}.{key}", "missing field")
        label = c.get("label", f"c{i}")
        if not isinstance(label, str):
            raise ValidationError(f"{path}.label", "expected a string")
        cls = OrbitClass(label, _cardinal(c["points"], f"{path}.points"),
                         _cardinal(c["orbit"], f"{path}.orbit"),
                         _cardinal(c["stabilizer"], f"{path}.stabilizer"))
        classes.append(cls)
        body_classes.append({"label": label, "points": cls.point_count.to_json(),
                             "orbit": cls.orbit_size.to_json(),
                             "stabilizer": cls.stabilizer_size.to_json()})
    try:
        spec = FortGroupSpec(group, abelian, tuple(classes))
    except ChaoslabError as exc:
        raise ValidationError("body.classes", str(exc)) from None
    body = {"abelian": abelian, "group_size": group.to_json(), "classes": body_classes}
    return body, spec


def _translation(raw: dict):
    real = raw.get("real_factor", False)
    if not isinstance(real, bool):
        raise ValidationError("body.real_factor", "expected a boolean")
    if real:
        if "k_card" not in raw:
            raise ValidationError("body.k_card", "missing field")
        for key in ("rank", "coefficients"):
            if key in raw:
                raise ValidationError(f"body.{key}", "not allowed with real_factor")
        k = _cardinal(raw["k_card"], "body.k_card")
        return {"real_factor": True, "k_card": k.to_json()}, TranslationActionSpec(real_factor=True, k_card=k)
    for key in ("rank", "coefficients"):
        if key not in raw:
            raise ValidationError(f"body.{key}", "missing field")
    if "k_card" in raw:
        raise ValidationError("body.k_card", "only allowed with real_factor")
    k = _int(raw["rank"], "body.rank", 1)
    coeffs = [_int(v, f"body.coefficients[{i}]") for i, v in enumerate(_list(raw["coefficients"], "body.coefficients", k))]
    return {"rank": k, "coefficients": coeffs}, TranslationActionSpec(k, tuple(coeffs))


_BUILDERS = {
    "finite-action": _finite_action,
    "iterated-system": _iterated,
    "fort-spec": _fort_spec,
    "translation": _translation,
}


def validate(raw: Any) -> InstanceDocument:
    if not isinstance(raw, dict):
        raise ValidationError("$", "document must be an object")
    if raw.get("schema") != SCHEMA_VERSION:
        raise ValidationError("schema", f"expected schema {SCHEMA_VERSION}")
    kind = KIND_ALIASES.get(raw.get("kind"), raw.get("kind"))
    if kind not in KINDS:
        raise ValidationError("kind", f"expected one of {list(KINDS)}")
    required, optional = _FIELDS[kind]
    body_raw = {k: v for k, v in raw.items() if k not in _COMMON}
    unknown = sorted(set(body_raw) - required - optional)
    if unknown:
        raise ValidationError(f"body.{unknown[0]}", "unknown field")
    for key in sorted(required):
        if key not in body_raw:
            raise ValidationError(f"body.{key}", "missing field")
    name = raw.get("name")
    if name is not None and not isinstance(name, str):
        raise ValidationError("name", "expected a string")
    body, model = _BUILDERS[kind](body_raw)
    ideals = tuple(parse_ideal(v, f"ideals[{i}]") for i, v in enumerate(_list(raw.get("ideals", []), "ideals")))
    return InstanceDocument(kind, body, ideals, name, model)


def parse_text(text: str) -> InstanceDocument:
    try:
        raw = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(exc.lineno, exc.colno, exc.msg) from None
    return validate(raw)


def parse_instance(path) -> InstanceDocument:
    return parse_text(Path(path).read_text(encoding="utf-8"))


def fixtures_dir() -> Path:
    return Path(__file__).parent / "fixtures"


def fixture(name: str) -> Path:
    """Path of a bundled fixture, e.g. ``"e1.json"`` or ``"translations/a2.json"``."""
    path = fixtures_dir() / name
    if not path.exists():
        raise FileNotFoundError(name)
    return path

"""Scenario documents: parsing, validation and round-trip serialisation.

A scenario document is a JSON object::

    {
      "schema": 1,
      "desired": {"kappa": 2, "mu": 1.5, "m": 3},
      "interferers": [{"kappa": 1, "mu": 1, "m": 2}, ...]
                     or {"iid": {"kappa": 0, "mu": 1, "m": "inf"}, "L": 4},
      "sigma2": 0.0,
      "sweep": {"variable": "interferers.L", "values": [1, 2, 3]},
      "mc": {"N": 10000, "blocks": 1000000, "seed": 0, "workers": 1}
    }

``interferers`` may be omitted (noise only).  ``m`` accepts ``"inf"``.
The sweep variable is a dotted path to a scalar field that is present in
the document, e.g. ``sigma2``, ``desired.kappa``, ``interferers.iid.m``,
``interferers.L`` or ``interferers.1.mu``.
"""
from __future__ import annotations

import copy
import json
import math
from dataclasses import dataclass, field
from pathlib import Path

from .evm import EvmScenario
from .fading import InterfererProfile, ShadowedFadingParams
from .mcsim import McConfig
from .specfun import DomainError

SCHEMA = 1
_FADING_KEYS = ("kappa", "mu", "m")
_MC_KEYS = {"N": "block_length", "blocks": "num_blocks", "seed": "seed", "workers": "workers",
            "constellation": "constellation", "sampler": "sampler"}


class ScenarioError(ValueError):
    """The scenario document is malformed or violates a precondition."""


def _num(v, where):
    if isinstance(v, str) and v.strip().lower() in ("inf", "infinity"):
        return math.inf
    if isinstance(v, bool) or not isinstance(v, (int, float)):
        raise ScenarioError(f"{where}: expected a number or \"inf\", got {v!r}")
    return float(v)


def _encode_num(v):
    if v == math.inf:
        return "inf"
    return int(v) if float(v).is_integer() and abs(v) < 2 ** 53 else v


def _fading(d, where) -> ShadowedFadingParams:
    if not isinstance(d, dict):
        raise ScenarioError(f"{where}: expected an object with kappa, mu, m")
    extra = set(d) - set(_FADING_KEYS)
    if extra:
        raise ScenarioError(f"{where}: unknown keys {sorted(extra)}")
    for k in ("kappa", "mu"):
        if k not in d:
            raise ScenarioError(f"{where}: missing {k!r}")
    try:
        return ShadowedFadingParams(_num(d["kappa"], f"{where}.kappa"), _num(d["mu"], f"{where}.mu"),
                                    _num(d.get("m", "inf"), f"{where}.m"))
    except DomainError as exc:
        raise ScenarioError(f"{where}: {exc}") from None


def _fading_dict(p: ShadowedFadingParams) -> dict:
    return {"kappa": _encode_num(p.kappa), "mu": _encode_num(p.mu), "m": _encode_num(p.m)}


@dataclass
class ScenarioFile:
    desired: ShadowedFadingParams
    interferers: InterfererProfile | None = None
    iid_form: bool = False
    sigma2: float = 0.0
    sweep_variable: str | None = None
    sweep_values: list = field(default_factory=list)
    mc: dict = field(default_factory=dict)

    # ------------------------------------------------------------------
    @classmethod
    def from_dict(cls, doc: dict) -> "ScenarioFile":
        if not isinstance(doc, dict):
            raise ScenarioError("scenario document must be a JSON object")
        schema = doc.get("schema", SCHEMA)
        if schema != SCHEMA:
            raise ScenarioError(f"unsupported schema {schema!r} (expected {SCHEMA})")
        extra = set(doc) - {"schema", "desired", "interferers", "sigma2", "sweep", "mc"}
        if extra:
            raise ScenarioError(f"unknown top-level keys {sorted(extra)}")
        if "desired" not in doc:
            raise ScenarioError("missing 'desired'")
        desired = _fading(doc["desired"], "desired")
        prof, iid_form = cls._parse_interferers(doc.get("interferers"))
        sigma2 = _num(doc.get("sigma2", 0.0), "sigma2")
        if not (0.0 <= sigma2 < math.inf):
            raise ScenarioError(f"sigma2 must be finite and >= 0, got {sigma2}")
        out = cls(desired, prof, iid_form, sigma2)
        sweep = doc.get("sweep")
        if sweep is not None:
            if not isinstance(sweep, dict) or set(sweep) != {"variable", "values"}:
                raise ScenarioError("sweep must be {\"variable\": ..., \"values\": [...]}")
            values = sweep["values"]
            if not isinstance(values, list) or not values:
                raise ScenarioError("sweep.values must be a non-empty list")
            out.sweep_variable = str(sweep["variable"])
            out.sweep_values = [_num(v, "sweep.values") for v in values]
            base = out.to_dict(include_sweep=False)
            _get(base, out.sweep_variable)  # must name an existing scalar
            for v in out.sweep_values:
                out._with_value(v)  # validate every point up front
        mc = doc.get("mc", {})
        if not isinstance(mc, dict) or set(mc) - set(_MC_KEYS):
            raise ScenarioError(f"mc must be an object with keys from {sorted(_MC_KEYS)}")
        out.mc = dict(mc)
        out.mc_config()  # validate
        return out

    @staticmethod
    def _parse_interferers(d):
        if d is None:
            return None, False
        if isinstance(d, list):
            if not d:
                raise ScenarioError("interferers list is empty")
            return InterfererProfile(tuple(_fading(e, f"interferers.{i}")
                                           for i, e in enumerate(d))), False
        if isinstance(d, dict):
            if set(d) != {"iid", "L"}:
                raise ScenarioError("interferers must be a list or exactly {\"iid\": {...}, \"L\": n}")
            L = d["L"]
            if isinstance(L, bool) or not isinstance(L, (int, float)) or int(L) != L or L < 1:
                raise ScenarioError(f"interferers.L must be a positive integer, got {L!r}")
            return InterfererProfile.iid(_fading(d["iid"], "interferers.iid"), int(L)), True
        raise ScenarioError("interferers must be a list or an {iid, L} object")

    def to_dict(self, include_sweep: bool = True) -> dict:
        doc = {"schema": SCHEMA, "desired": _fading_dict(self.desired)}
        if self.interferers is not None:
            if self.iid_form:
                doc["interferers"] = {"iid": _fading_dict(self.interferers.entries[0]),
                                      "L": self.interferers.L}
            else:
                doc["interferers"] = [_fading_dict(e) for e in self.interferers]
        doc["sigma2"] = _encode_num(self.sigma2)
        if include_sweep and self.sweep_variable is not None:
            doc["sweep"] = {"variable": self.sweep_variable,
                            "values": [_encode_num(v) for v in self.sweep_values]}
        if self.mc:
            doc["mc"] = dict(self.mc)
        return doc

    # ------------------------------------------------------------------
    def scenario(self) -> EvmScenario:
        return EvmScenario(self.desired, self.interferers, self.sigma2)

    def _with_value(self, value) -> EvmScenario:
        doc = self.to_dict(include_sweep=False)
        _set(doc, self.sweep_variable, value)
        doc.pop("mc", None)
        return ScenarioFile.from_dict(doc).scenario()

    def points(self):
        """``[(sweep_value, EvmScenario)]``; one point with value None when there is no sweep."""
        if self.sweep_variable is None:
            return [(None, self.scenario())]
        return [(_encode_num(v), self._with_value(v)) for v in self.sweep_values]

    def mc_config(self, **overrides) -> McConfig:
        kw = {_MC_KEYS[k]: v for k, v in self.mc.items()}
        kw.update({k: v for k, v in overrides.items() if v is not None})
        try:
            return McConfig(**kw)
        except (TypeError, ValueError) as exc:
            raise ScenarioError(f"mc: {exc}") from None


def _split(path):
    return [int(p) if p.isdigit() else p for p in path.split(".")]


def _get(doc, path):
    cur = doc
    for key in _split(path):
        try:
            cur = cur[key]
        except (KeyError, IndexError, TypeError):
            raise ScenarioError(f"sweep variable {path!r} does not name a field of the document") \
                from None
    if isinstance(cur, (dict, list)):
        raise ScenarioError(f"sweep variable {path!r} is not a scalar field")
    return cur


def _set(doc, path, value):
    keys = _split(path)
    _get(doc, path)
    cur = doc
    for key in keys[:-1]:
        cur = cur[key]
    if keys[-1] == "L":
        if int(value) != value:
            raise ScenarioError(f"interferers.L sweep values must be integers, got {value}")
        value = int(value)
    cur[keys[-1]] = _encode_num(value)


def load(path) -> ScenarioFile:
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise ScenarioError(f"cannot read scenario file: {exc}") from None
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ScenarioError(f"scenario file is not valid JSON: {exc}") from None
    return ScenarioFile.from_dict(doc)


def dumps(sf: ScenarioFile) -> str:
    return json.dumps(sf.to_dict(), indent=2)


def dump(sf: ScenarioFile, path) -> None:
    Path(path).write_text(dumps(sf) + "\n", encoding="utf-8")


def scenario_file(scenario: EvmScenario, **kw) -> ScenarioFile:
    """Wrap an :class:`EvmScenario` in a document (i.i.d. profiles use the compact form)."""
    prof = scenario.interferers
    iid_form = prof is not None and prof.is_iid
    return ScenarioFile(scenario.desired, prof, iid_form, scenario.noise_variance,
                        **copy.deepcopy(kw))


__all__ = ["SCHEMA", "ScenarioError", "ScenarioFile", "dump", "dumps", "load", "scenario_file"]

"""
Scenario configuration files.

A scenario file is INI-shaped with TOML/JSON literal values::

    [scenario]
    kind = "frequency"
    snr_db = [-10, 0, 10]     # or sigma2 = [1.0]

    [model]
    n_sensors = 16

Values are decoded with ``json.loads``, the document is checked against a
Draft 7 JSON schema, and unknown keys are reported with the nearest valid key.
"""

import configparser
import copy
import difflib
import json
import logging
import math
from dataclasses import dataclass, field, replace
from pathlib import Path
from typing import Any, Dict, List, Optional

import jsonschema
import yaml

from ..numeric.quadrature import BAYES_TOLERANCES, DEFAULT_TOLERANCES, QuadTolerances
from ..utilities.error_handler import ConfigurationError

BUILTIN_PREFIX = "builtin:"
BUILTIN_DIR = Path(__file__).parent / "builtin"

KINDS = (
    "frequency", "doa3d-azimuth", "doa3d-elevation", "doa3d-joint",
    "nearfield-mismatch", "esprit-ula", "bayesian-ula", "custom",
)
OUTPUTS = ("prediction", "crlb", "mcrlb", "hcrb", "zzb", "bcrlb", "montecarlo")
BOUND_OUTPUTS = ("crlb", "mcrlb", "hcrb", "zzb", "bcrlb")

_DOA_MODEL = {"amplitude": 1.0, "azimuth_deg": 25.0, "elevation_deg": 60.0,
              "geometry_file": None}

MODEL_DEFAULTS: Dict[str, Dict[str, Any]] = {
    "frequency": {"n_sensors": 16, "amplitude": 1.0, "true_value": math.pi / 2},
    "doa3d-azimuth": dict(_DOA_MODEL),
    "doa3d-elevation": dict(_DOA_MODEL),
    "doa3d-joint": {**_DOA_MODEL, "estimate": "azimuth"},
    "nearfield-mismatch": {"n_sensors": 12, "amplitude": 1.0, "radius": 5.0 / 3.0,
                           "range": 5.0, "azimuth_deg": 0.0},
    "esprit-ula": {"n_sensors": 15, "amplitude": 1.0, "azimuth_deg": 35.0},
    "bayesian-ula": {"n_sensors": 15, "amplitude": 1.0, "prior_shape": 10.0},
    "custom": {"manifold": "identity", "n_sensors": 16, "amplitude": 1.0, "true_value": 0.0,
               "support": None, "geometry_file": None, "elevation_deg": 90.0},
}

KIND_OUTPUTS: Dict[str, Dict[str, tuple]] = {
    "frequency": {"default": ("prediction", "crlb", "hcrb", "montecarlo"),
                  "supported": ("prediction", "crlb", "hcrb", "montecarlo")},
    "doa3d-azimuth": {"default": ("prediction", "crlb", "hcrb", "montecarlo"),
                      "supported": ("prediction", "crlb", "hcrb", "montecarlo")},
    "doa3d-elevation": {"default": ("prediction", "crlb", "hcrb", "montecarlo"),
                        "supported": ("prediction", "crlb", "hcrb", "montecarlo")},
    "doa3d-joint": {"default": ("prediction", "crlb", "montecarlo"),
                    "supported": ("prediction", "crlb", "hcrb", "montecarlo")},
    "nearfield-mismatch": {"default": ("prediction", "crlb", "mcrlb", "hcrb", "montecarlo"),
                           "supported": ("prediction", "crlb", "mcrlb", "hcrb", "montecarlo")},
    "esprit-ula": {"default": ("prediction", "crlb", "montecarlo"),
                   "supported": ("prediction", "crlb", "montecarlo")},
    "bayesian-ula": {"default": ("prediction", "zzb", "bcrlb", "montecarlo"),
                     "supported": ("prediction", "zzb", "bcrlb", "montecarlo")},
    "custom": {"default": ("prediction", "crlb", "hcrb", "montecarlo"),
               "supported": ("prediction", "crlb", "hcrb", "montecarlo")},
}

SECTION_DEFAULTS: Dict[str, Dict[str, Any]] = {
    "prediction": {"abs_tol": None, "rel_tol": None, "max_subintervals": None,
                   "nuisance_form": "min", "mc_samples": 100000, "max_grid": 25},
    "nuisance": {"e_max": None, "n_log": 60, "lower_floor": 1e-7},
    "grid": {"ml_points": 3600, "omega_points": 8192, "sphere_elevations": 200,
             "sphere_density": 100.0, "prior_spacing": 0.01},
    "montecarlo": {"n_runs": 10000, "seed": None, "threads": 1},
}

_POSITIVE = {"type": "number", "exclusiveMinimum": 0}
_COUNT = {"type": "integer", "minimum": 1}

CONFIG_SCHEMA: Dict[str, Any] = {
    "$schema": "http://json-schema.org/draft-07/schema#",
    "type": "object",
    "additionalProperties": False,
    "required": ["scenario"],
    "properties": {
        "scenario": {
            "type": "object",
            "additionalProperties": False,
            "required": ["kind"],
            "properties": {
                "kind": {"enum": list(KINDS)},
                "snr_db": {"type": "array", "minItems": 1, "items": {"type": "number"}},
                "sigma2": {"type": "array", "minItems": 1, "items": _POSITIVE},
                "outputs": {"type": "array", "minItems": 1, "uniqueItems": True,
                            "items": {"enum": list(OUTPUTS)}},
            },
        },
        "model": {
            "type": "object",
            "additionalProperties": False,
            "properties": {
                "n_sensors": {"type": "integer", "minimum": 2},
                "amplitude": _POSITIVE,
                "true_value": {"type": "number"},
                "azimuth_deg": {"type": "number", "minimum": -180, "maximum": 180},
                "elevation_deg": {"type": "number", "minimum": 0, "maximum": 180},
                "radius": _POSITIVE,
                "range": _POSITIVE,
                "prior_shape": {"type": "number", "exclusiveMinimum": 2},
                "estimate": {"enum": ["azimuth", "elevation"]},
                "manifold": {"enum": ["identity", "frequency", "geometry"]},
                "geometry_file": {"type": ["string", "null"]},
                "support": {"type": ["array", "null"], "minItems": 2, "maxItems": 2,
                            "items": {"type": "number"}},
            },
        },
        "prediction": {
            "type": "object",
            "additionalProperties": False,
            "properties": {
                "abs_tol": _POSITIVE,
                "rel_tol": _POSITIVE,
                "max_subintervals": _COUNT,
                "nuisance_form": {"enum": ["min", "full"]},
                "mc_samples": {"type": "integer", "minimum": 2},
                "max_grid": _COUNT,
            },
        },
        "nuisance": {
            "type": "object",
            "additionalProperties": False,
            "properties": {
                "e_max": _POSITIVE,
                "n_log": _COUNT,
                "lower_floor": _POSITIVE,
            },
        },
        "grid": {
            "type": "object",
            "additionalProperties": False,
            "properties": {
                "ml_points": {"type": "integer", "minimum": 2},
                "omega_points": {"type": "integer", "minimum": 2},
                "sphere_elevations": {"type": "integer", "minimum": 2},
                "sphere_density": _POSITIVE,
                "prior_spacing": _POSITIVE,
            },
        },
        "montecarlo": {
            "type": "object",
            "additionalProperties": False,
            "properties": {
                "n_runs": {"type": "integer", "minimum": 2},
                "seed": {"type": ["integer", "null"], "minimum": 0,
                         "maximum": 18446744073709551615},
                "threads": _COUNT,
            },
        },
    },
}


def nearest_key(key: str, candidates) -> Optional[str]:
    """Closest valid key by edit similarity."""
    matches = difflib.get_close_matches(key, list(candidates), n=1, cutoff=0.0)
    return matches[0] if matches else None


@dataclass
class ScenarioConfig:
    """Fully resolved scenario configuration."""
    kind: str
    snr_db: List[float]
    outputs: List[str]
    model: Dict[str, Any]
    prediction: Dict[str, Any]
    nuisance: Dict[str, Any]
    grid: Dict[str, Any]
    montecarlo: Dict[str, Any]
    source: str = "<string>"
    base_dir: Path = field(default_factory=Path.cwd)

    def tolerances(self) -> QuadTolerances:
        return QuadTolerances(abs_tol=self.prediction["abs_tol"],
                              rel_tol=self.prediction["rel_tol"],
                              max_subintervals=self.prediction["max_subintervals"])

    def resolve_path(self, path: str) -> Path:
        candidate = Path(path)
        return candidate if candidate.is_absolute() else self.base_dir / candidate

    def bound_outputs(self) -> List[str]:
        return [name for name in self.outputs if name in BOUND_OUTPUTS]

    def with_overrides(self, seed: Optional[int] = None, runs: Optional[int] = None,
                       threads: Optional[int] = None, tol_abs: Optional[float] = None,
                       tol_rel: Optional[float] = None) -> "ScenarioConfig":
        """Copy with command-line overrides applied."""
        montecarlo = dict(self.montecarlo)
        prediction = dict(self.prediction)
        for key, value, minimum in (("seed", seed, 0), ("n_runs", runs, 2), ("threads", threads, 1)):
            if value is not None:
                if value < minimum:
                    raise ConfigurationError(f"--{key.replace('n_', '')} must be at least {minimum}",
                                             config_key=f"montecarlo.{key}")
                montecarlo[key] = int(value)
        for key, value in (("abs_tol", tol_abs), ("rel_tol", tol_rel)):
            if value is not None:
                if not value > 0:
                    raise ConfigurationError(f"{key} must be positive, got {value}",
                                             config_key=f"prediction.{key}")
                prediction[key] = float(value)
        return replace(self, montecarlo=montecarlo, prediction=prediction)

    def to_dict(self) -> Dict[str, Any]:
        return {
            "scenario": {"kind": self.kind, "snr_db": list(self.snr_db),
                         "outputs": list(self.outputs)},
            "model": dict(self.model),
            "prediction": dict(self.prediction),
            "nuisance": dict(self.nuisance),
            "grid": dict(self.grid),
            "montecarlo": dict(self.montecarlo),
        }

    def to_yaml(self) -> str:
        return yaml.safe_dump(self.to_dict(), sort_keys=False, default_flow_style=None)


class ConfigLoader:
    """Reads, validates and resolves scenario files."""

    def __init__(self, schema: Optional[Dict[str, Any]] = None):
        self.logger = logging.getLogger(self.__class__.__name__)
        self.schema = schema or CONFIG_SCHEMA
        self.validator = jsonschema.Draft7Validator(self.schema)

    @staticmethod
    def builtin_path(kind: str) -> Path:
        if kind not in KINDS:
            raise ConfigurationError(
                f"no built-in scenario {kind!r}", config_key="scenario.kind",
                suggestion=nearest_key(kind, KINDS))
        return BUILTIN_DIR / f"{kind}.ini"

    def load(self, source: str) -> ScenarioConfig:
        """
        Load a scenario from a file path or ``builtin:<kind>``.

        Raises:
            ConfigurationError: unreadable file or invalid content
        """
        if source.startswith(BUILTIN_PREFIX):
            path = self.builtin_path(source[len(BUILTIN_PREFIX):])
        else:
            path = Path(source)
        try:
            text = path.read_text(encoding="utf-8")
        except OSError as e:
            raise ConfigurationError(f"cannot read configuration {source}: {e}",
                                     original_error=e) from e
        return self.loads(text, source=str(source), base_dir=path.parent)

    def loads(self, text: str, source: str = "<string>",
              base_dir: Optional[Path] = None) -> ScenarioConfig:
        document = self.read_document(text)
        self.check_keys(document)
        self.validate_schema(document)
        config = self.resolve(document, source, base_dir or Path.cwd())
        self.logger.debug(f"resolved configuration from {source}: {config.to_dict()}")
        return config

    def read_document(self, text: str) -> Dict[str, Dict[str, Any]]:
        """Parse sections and decode every value as a JSON literal."""
        parser = configparser.ConfigParser(inline_comment_prefixes=("#",), interpolation=None,
                                           default_section="__defaults__")
        parser.optionxform = str
        try:
            parser.read_string(text)
        except configparser.Error as e:
            raise ConfigurationError(f"malformed configuration: {e}", original_error=e) from e
        document: Dict[str, Dict[str, Any]] = {}
        for section in parser.sections():
            values = {}
            for key, raw in parser.items(section):
                try:
                    values[key] = json.loads(raw)
                except json.JSONDecodeError as e:
                    raise ConfigurationError(
                        f"value of {section}.{key} is not a valid literal: {raw!r}",
                        config_key=f"{section}.{key}", original_error=e) from e
            document[section] = values
        return document

    def check_keys(self, document: Dict[str, Dict[str, Any]]) -> None:
        """Reject unknown sections and keys, naming the nearest valid one."""
        sections = self.schema["properties"]
        for section, values in document.items():
            if section not in sections:
                suggestion = nearest_key(section, sections)
                raise ConfigurationError(
                    f"unknown section [{section}]; did you mean [{suggestion}]?",
                    config_key=section, suggestion=suggestion)
            known = sections[section]["properties"]
            for key in values:
                if key not in known:
                    suggestion = nearest_key(key, known)
                    raise ConfigurationError(
                        f"unknown key {key!r} in [{section}]; did you mean {suggestion!r}?",
                        config_key=f"{section}.{key}", suggestion=suggestion)

    def validate_schema(self, document: Dict[str, Any]) -> None:
        errors = sorted(self.validator.iter_errors(document), key=lambda e: list(e.path))
        if errors:
            first = errors[0]
            where = ".".join(str(part) for part in first.path) or "<document>"
            raise ConfigurationError(f"invalid configuration at {where}: {first.message}",
                                     config_key=where)

    def resolve(self, document: Dict[str, Dict[str, Any]], source: str,
                base_dir: Path) -> ScenarioConfig:
        """Apply kind-specific checks and fill in defaults."""
        scenario = document["scenario"]
        kind = scenario["kind"]

        model_defaults = MODEL_DEFAULTS[kind]
        model_values = document.get("model", {})
        for key in model_values:
            if key not in model_defaults:
                raise ConfigurationError(
                    f"model key {key!r} is not used by kind {kind!r}; "
                    f"valid keys: {', '.join(model_defaults)}",
                    config_key=f"model.{key}", suggestion=nearest_key(key, model_defaults))
        model = {**copy.deepcopy(model_defaults), **model_values}

        has_snr, has_sigma2 = "snr_db" in scenario, "sigma2" in scenario
        if has_snr == has_sigma2:
            raise ConfigurationError("give exactly one of scenario.snr_db and scenario.sigma2",
                                     config_key="scenario.snr_db")
        if has_snr:
            snr_db = [float(v) for v in scenario["snr_db"]]
        else:
            power = float(model["amplitude"]) ** 2
            snr_db = [10.0 * math.log10(power / float(v)) for v in scenario["sigma2"]]
        snr_db = sorted(snr_db)

        outputs_spec = KIND_OUTPUTS[kind]
        outputs = list(scenario.get("outputs", outputs_spec["default"]))
        unsupported = [name for name in outputs if name not in outputs_spec["supported"]]
        if unsupported:
            raise ConfigurationError(
                f"kind {kind!r} cannot produce {', '.join(unsupported)}; "
                f"supported: {', '.join(outputs_spec['supported'])}",
                config_key="scenario.outputs")

        prediction = {**SECTION_DEFAULTS["prediction"], **document.get("prediction", {})}
        kind_tols = BAYES_TOLERANCES if kind == "bayesian-ula" else DEFAULT_TOLERANCES
        for key, default in (("abs_tol", kind_tols.abs_tol), ("rel_tol", kind_tols.rel_tol),
                             ("max_subintervals", kind_tols.max_subintervals)):
            if prediction[key] is None:
                prediction[key] = default

        nuisance = {**SECTION_DEFAULTS["nuisance"], **document.get("nuisance", {})}
        if nuisance["e_max"] is None and kind == "doa3d-joint":
            # the nuisance is whichever angle is not estimated
            nuisance["e_max"] = math.pi if model["estimate"] == "elevation" else math.pi / 2
        if nuisance["e_max"] is not None and not nuisance["lower_floor"] < nuisance["e_max"]:
            raise ConfigurationError("nuisance.lower_floor must be below nuisance.e_max",
                                     config_key="nuisance.lower_floor")

        if kind == "custom":
            self._check_custom(model)

        return ScenarioConfig(
            kind=kind,
            snr_db=snr_db,
            outputs=outputs,
            model=model,
            prediction=prediction,
            nuisance=nuisance,
            grid={**SECTION_DEFAULTS["grid"], **document.get("grid", {})},
            montecarlo={**SECTION_DEFAULTS["montecarlo"], **document.get("montecarlo", {})},
            source=source,
            base_dir=base_dir,
        )

    @staticmethod
    def _check_custom(model: Dict[str, Any]) -> None:
        if model["manifold"] == "geometry" and not model["geometry_file"]:
            raise ConfigurationError("custom geometry manifold needs model.geometry_file",
                                     config_key="model.geometry_file")
        support = model["support"]
        if support is not None:
            lo, hi = support
            if not lo < hi:
                raise ConfigurationError(f"model.support must satisfy lo < hi, got {support}",
                                         config_key="model.support")
            if not lo <= model["true_value"] <= hi:
                raise ConfigurationError("model.true_value lies outside model.support",
                                         config_key="model.true_value")


def load_config(source: str) -> ScenarioConfig:
    """Shortcut for ``ConfigLoader().load(source)``."""
    return ConfigLoader().load(source)

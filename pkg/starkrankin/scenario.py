"""
Scenario documents: the JSON schema, validation and construction of the
objects every command works on.
"""

import json
import logging
from fractions import Fraction

from jsonschema import ValidationError, validate
from jsonschema.validators import Draft7Validator

from starkrankin.elliptic import WeierstrassModel, rational_point
from starkrankin.exceptions import DomainError, ScenarioError
from starkrankin.factors import FactorScenario
from starkrankin.heckechar import RingClassCharacter
from starkrankin.padic import PadicNumber
from starkrankin.quadfield import ImagQuadField, is_fundamental_discriminant

logger = logging.getLogger(__name__)

RATIONAL_PATTERN = r"^-?[0-9]+(/[0-9]*[1-9][0-9]*)?$"


class Precision:
    """Working precisions of one run"""

    def __init__(self, padic_digits, q_truncation, complex_bits):
        self.padic_digits = padic_digits
        self.q_truncation = q_truncation
        self.complex_bits = complex_bits

    def to_json(self):
        return {
            "padic_digits": self.padic_digits,
            "q_truncation": self.q_truncation,
            "complex_bits": self.complex_bits,
        }


class Scenario:
    """A validated scenario document and the objects built from it"""

    def __init__(self, doc, factors, precision, seed, heegner_point=None,
                 iterated_integral=None, unit_log=None):
        self.doc = doc
        self.factors = factors
        self.precision = precision
        self.seed = seed
        self.heegner_point = heegner_point
        self.iterated_integral = iterated_integral
        self.unit_log = unit_log

    @property
    def E(self):
        return self.factors.E

    @property
    def field(self):
        return self.factors.field

    @property
    def psi(self):
        return self.factors.psi

    @property
    def p(self):
        return self.factors.p

    @property
    def N(self):
        return self.factors.N

    @property
    def N_E(self):
        return self.factors.N_E

    @property
    def label(self):
        return self.factors.label

    @staticmethod
    def json_schema():
        """JSON schema for a scenario document"""
        schema = {
            "type": "object",
            "required": ["curve", "conductor", "D_K", "p"]
        }
        props = schema["properties"] = {}
        props["label"] = {
            "type": "string",
            "minLength": 1,
            "maxLength": 64
        }
        props["curve"] = {
            "type": "array",
            "items": {"type": "integer"},
            "minItems": 5,
            "maxItems": 5
        }
        props["conductor"] = {
            "type": "integer",
            "minimum": 1
        }
        props["D_K"] = {
            "type": "integer",
            "minimum": 3
        }
        props["c"] = {
            "type": "integer",
            "minimum": 1
        }
        props["psi"] = {
            "type": "object",
            "properties": {
                "exponents": {"type": "array", "items": {"type": "integer"}},
                "generator_forms": {
                    "type": "array",
                    "items": {
                        "type": "array",
                        "items": {"type": "integer"},
                        "minItems": 3,
                        "maxItems": 3
                    }
                }
            },
            "additionalProperties": False
        }
        props["p"] = {
            "type": "integer",
            "minimum": 3
        }
        props["precision"] = {
            "type": "object",
            "properties": {
                "padic_digits": {"type": "integer", "minimum": 1},
                "q_truncation": {"type": "integer", "minimum": 1},
                "complex_bits": {"type": "integer", "minimum": 53}
            },
            "additionalProperties": False
        }
        props["inputs"] = {
            "type": "object",
            "properties": {
                "heegner_point": {
                    "type": "array",
                    "items": {"type": "string", "pattern": RATIONAL_PATTERN},
                    "minItems": 2,
                    "maxItems": 2
                },
                "iterated_integral": Scenario.padic_literal_schema(),
                "unit_log": Scenario.padic_literal_schema()
            },
            "additionalProperties": False
        }
        props["seed"] = {
            "type": "integer",
            "minimum": 0
        }
        props["pet_discrepancy"] = {
            "type": "string",
            "pattern": RATIONAL_PATTERN
        }
        props["zeta_residue"] = {
            "type": "integer",
            "minimum": 1
        }
        return schema

    @staticmethod
    def padic_literal_schema():
        """A rational string or {"val", "digits", "prec"} in base p"""
        return {
            "oneOf": [
                {"type": "string", "pattern": RATIONAL_PATTERN},
                {
                    "type": "object",
                    "required": ["digits", "prec"],
                    "properties": {
                        "p": {"type": "integer"},
                        "val": {"type": ["integer", "null"]},
                        "digits": {"type": "array", "items": {"type": "integer", "minimum": 0}},
                        "prec": {"type": "integer"}
                    },
                    "additionalProperties": False
                }
            ]
        }

    def to_json(self):
        doc = self.factors.to_json()
        doc.update(precision=self.precision.to_json(), seed=self.seed)
        if self.heegner_point is not None:
            doc["heegner_point"] = [str(self.heegner_point.x), str(self.heegner_point.y)]
        return doc

    def __repr__(self):
        return f"Scenario({self.label})"


def parse_padic(literal, p, prec):
    """
    Read a p-adic literal: a rational string, or the dictionary form
    produced by PadicNumber.to_dict.
    """
    if isinstance(literal, str):
        return PadicNumber.from_rational(Fraction(literal), p, prec)
    if literal.get("p", p) != p:
        raise ScenarioError(f"p-adic literal is in base {literal['p']}, the scenario has p = {p}")
    digits = literal["digits"]
    if any(d >= p for d in digits):
        raise ScenarioError(f"digits {digits} are not base {p} digits")
    val = literal.get("val")
    if val is None or not any(digits):
        return PadicNumber.zero(p, literal["prec"])
    unit = sum(d * p ** i for i, d in enumerate(digits))
    return PadicNumber(p, val, unit, literal["prec"])


def read_scenario_file(path):
    try:
        with open(path, encoding="utf-8") as handle:
            return json.load(handle)
    except OSError as e:
        raise ScenarioError(f"Unable to read scenario file {path} ({e.strerror})") from e
    except json.JSONDecodeError as e:
        raise ScenarioError(f"Scenario file {path} is not valid JSON: {e}") from e


def load_scenario(source, settings):
    """
    Validate a scenario and build it.

    Arguments:
        source: path of a JSON file or an already parsed document
        settings: Settings supplying the default precisions and seed
    Returns:
        Scenario
    """
    doc = source if isinstance(source, dict) else read_scenario_file(source)

    try:
        validate(doc, Scenario.json_schema(),
                 format_checker=Draft7Validator.FORMAT_CHECKER)
    except ValidationError as e:
        raise ScenarioError(description=str(e.message), path=list(e.absolute_path)) from e

    options = doc.get("precision", {})
    precision = Precision(
        options.get("padic_digits", settings["PADIC_DIGITS"]),
        options.get("q_truncation", settings["Q_TRUNCATION"]),
        options.get("complex_bits", settings["COMPLEX_BITS"]),
    )
    seed = doc.get("seed", settings["SEED"])

    if not is_fundamental_discriminant(-doc["D_K"]):
        raise ScenarioError(f"-{doc['D_K']} is not a fundamental discriminant")

    try:
        E = WeierstrassModel.from_list(doc["curve"], conductor=doc["conductor"])
        field = ImagQuadField(doc["D_K"])
        character = dict(doc.get("psi", {}), c=doc.get("c", 1))
        psi = RingClassCharacter.from_json(field, character)
        pet = doc.get("pet_discrepancy")
        factors = FactorScenario(
            E, field, psi, doc["p"],
            label=doc.get("label"),
            pet_discrepancy=Fraction(pet) if pet is not None else None,
            zeta_residue=doc.get("zeta_residue"),
        )
    except DomainError as e:
        raise ScenarioError(f"inconsistent scenario: {e}") from e

    inputs = doc.get("inputs", {})
    point = None
    if "heegner_point" in inputs:
        x, y = (Fraction(v) for v in inputs["heegner_point"])
        point = rational_point(x, y)
        if not E.contains(point):
            raise ScenarioError(f"({x}, {y}) is not on {E!r}")
    p, prec = doc["p"], precision.padic_digits
    integral = inputs.get("iterated_integral")
    unit_log = inputs.get("unit_log")

    scenario = Scenario(
        doc, factors, precision, seed,
        heegner_point=point,
        iterated_integral=parse_padic(integral, p, prec) if integral is not None else None,
        unit_log=parse_padic(unit_log, p, prec) if unit_log is not None else None,
    )
    logger.info(f"loaded {scenario!r}: N = {factors.N}, h_K = {factors.h_K}")
    return scenario

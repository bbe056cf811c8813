"""JSON model documents.

    {"premium": {"type": "constant", "p": 2.2},
     "sigma": 0.0,
     "jump": {"type": "compound_poisson", "intensity": 1.0,
              "claims": {"type": "gamma", "shape": 2.0, "rate": 1.0}}}

Premium types: ``constant`` (p) and ``affine`` (p, i).  Jump types:
``compound_poisson`` (intensity, claims), ``gamma_process`` (alpha, beta)
and ``inverse_gaussian`` (gamma).  Claim types: ``exponential`` (rate),
``gamma`` (shape, rate) and ``mixed_exponential`` (weight, rate1, rate2).
"""

import json
import math

from .errors import ConfigError
from .levy import CompoundPoisson, Exponential, Gamma, GammaProcess, InverseGaussian, MixedExponential
from .risk import AffinePremium, ConstantPremium, ConstantVolatility, RiskModel

_CLAIMS = {
    "exponential": (Exponential, ("rate",)),
    "gamma": (Gamma, ("shape", "rate")),
    "mixed_exponential": (MixedExponential, ("weight", "rate1", "rate2")),
}
_JUMPS = {
    "gamma_process": (GammaProcess, ("alpha", "beta")),
    "inverse_gaussian": (InverseGaussian, ("gamma",)),
}
_PREMIUMS = {
    "constant": (ConstantPremium, ("p",)),
    "affine": (AffinePremium, ("p", "i")),
}


def _number(doc, key, where):
    if key not in doc:
        raise ConfigError(f"{where}: missing field '{key}'")
    value = doc[key]
    if isinstance(value, bool) or not isinstance(value, (int, float)) or not math.isfinite(value):
        raise ConfigError(f"{where}: field '{key}' must be a finite number, got {value!r}")
    return float(value)


def _build(table, doc, where):
    if not isinstance(doc, dict):
        raise ConfigError(f"{where}: expected an object")
    kind = doc.get("type")
    if kind not in table:
        raise ConfigError(f"{where}: unknown type {kind!r}; expected one of {sorted(table)}")
    cls, fields = table[kind]
    unknown = set(doc) - set(fields) - {"type"}
    if unknown:
        raise ConfigError(f"{where}: unexpected fields {sorted(unknown)}")
    args = [_number(doc, f, where) for f in fields]
    try:
        return cls(*args)
    except ValueError as exc:
        raise ConfigError(f"{where}: {exc}") from exc


def _jump(doc):
    if isinstance(doc, dict) and doc.get("type") == "compound_poisson":
        unknown = set(doc) - {"type", "intensity", "claims"}
        if unknown:
            raise ConfigError(f"jump: unexpected fields {sorted(unknown)}")
        claims = _build(_CLAIMS, doc.get("claims"), "jump.claims")
        try:
            return CompoundPoisson(_number(doc, "intensity", "jump"), claims)
        except ValueError as exc:
            raise ConfigError(f"jump: {exc}") from exc
    return _build(_JUMPS, doc, "jump")


def model_from_dict(doc):
    """Validated ``RiskModel`` from a parsed document; ``ConfigError`` otherwise."""
    if not isinstance(doc, dict):
        raise ConfigError("model document must be a JSON object")
    unknown = set(doc) - {"premium", "sigma", "jump"}
    if unknown:
        raise ConfigError(f"unexpected top-level fields {sorted(unknown)}")
    premium = _build(_PREMIUMS, doc.get("premium"), "premium")
    sigma = _number(doc, "sigma", "model") if "sigma" in doc else 0.0
    try:
        volatility = ConstantVolatility(sigma)
    except ValueError as exc:
        raise ConfigError(f"sigma: {exc}") from exc
    if "jump" not in doc:
        raise ConfigError("model: missing field 'jump'")
    return RiskModel(premium, volatility, _jump(doc["jump"]))


def load_model(path):
    try:
        with open(path) as fh:
            doc = json.load(fh)
    except OSError as exc:
        raise ConfigError(f"cannot read model file {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise ConfigError(f"model file {path} is not valid JSON: {exc}") from exc
    return model_from_dict(doc)


def _claims_dict(claims):
    if isinstance(claims, Exponential):
        return {"type": "exponential", "rate": claims.rate}
    if isinstance(claims, Gamma):
        return {"type": "gamma", "shape": claims.shape, "rate": claims.rate}
    if isinstance(claims, MixedExponential):
        return {"type": "mixed_exponential", "weight": claims.weight, "rate1": claims.rate1, "rate2": claims.rate2}
    raise ConfigError(f"claims of type {type(claims).__name__} have no document form")


def model_to_dict(model):
    """Inverse of ``model_from_dict``."""
    prem = model.premium
    if isinstance(prem, AffinePremium):
        premium = {"type": "affine", "p": prem.p, "i": prem.i}
    else:
        premium = {"type": "constant", "p": prem.p}
    jumps = model.jumps
    if isinstance(jumps, CompoundPoisson):
        jump = {"type": "compound_poisson", "intensity": jumps.intensity, "claims": _claims_dict(jumps.claims)}
    elif isinstance(jumps, GammaProcess):
        jump = {"type": "gamma_process", "alpha": jumps.alpha, "beta": jumps.beta}
    elif isinstance(jumps, InverseGaussian):
        jump = {"type": "inverse_gaussian", "gamma": jumps.gamma}
    else:
        raise ConfigError(f"jump model {type(jumps).__name__} has no document form")
    return {"premium": premium, "sigma": model.sigma, "jump": jump}

"""Channel-spec, policy, code and polygon file formats."""
from __future__ import annotations

import json
from importlib import resources

import numpy as np

from .model import MacModel, ModelError, TeamPolicy, make_model, validate_model, validate_policy
from .region import Polygon, RatePair

FIELDS = ("states", "prior", "inputs_a", "inputs_b", "outputs", "quantizer_a", "quantizer_b", "kernel")
OPTIONAL = ("name", "observations_a", "observations_b")


class SpecError(ModelError):
    """Malformed channel-spec document."""


def _alphabet(doc: dict, key: str) -> tuple:
    value = doc[key]
    if isinstance(value, bool):
        raise SpecError(f"field '{key}': expected a size or a list of labels")
    if isinstance(value, int):
        if value < 1:
            raise SpecError(f"field '{key}': alphabet size must be >= 1, got {value}")
        return tuple(range(value))
    if isinstance(value, list) and value:
        if len(set(map(json.dumps, value))) != len(value):
            raise SpecError(f"field '{key}': duplicate labels")
        return tuple(value)
    raise SpecError(f"field '{key}': expected a positive size or a non-empty list of labels")


def parse_spec(document: str) -> MacModel:
    """Parse a JSON channel spec into a validated model."""
    try:
        doc = json.loads(document)
    except json.JSONDecodeError as exc:
        raise SpecError(f"line {exc.lineno}, column {exc.colno}: {exc.msg}") from None
    if not isinstance(doc, dict):
        raise SpecError("top level must be an object")
    missing = [k for k in FIELDS if k not in doc]
    if missing:
        raise SpecError(f"missing fields: {', '.join(missing)}")
    unknown = sorted(set(doc) - set(FIELDS) - set(OPTIONAL))
    if unknown:
        raise SpecError(f"unknown fields: {', '.join(unknown)}")

    states = _alphabet(doc, "states")
    inputs_a, inputs_b = _alphabet(doc, "inputs_a"), _alphabet(doc, "inputs_b")
    outputs = _alphabet(doc, "outputs")
    n_s = len(states)
    shape = (n_s, len(inputs_a), len(inputs_b), len(outputs))

    try:
        prior = np.array(doc["prior"], dtype=float)
    except (TypeError, ValueError):
        raise SpecError("field 'prior': expected a list of numbers") from None
    if prior.shape != (n_s,):
        raise SpecError(f"field 'prior': expected {n_s} entries, got shape {prior.shape}")
    for key in ("quantizer_a", "quantizer_b"):
        q = doc[key]
        if not isinstance(q, list) or len(q) != n_s:
            raise SpecError(f"field '{key}': expected a list of {n_s} observation labels")
        if any(isinstance(v, (list, dict)) for v in q):
            raise SpecError(f"field '{key}': observation labels must be scalars")
    try:
        kernel = np.array(doc["kernel"], dtype=float)
    except (TypeError, ValueError):
        raise SpecError("field 'kernel': expected nested numeric arrays") from None
    if kernel.shape != shape:
        raise SpecError(f"field 'kernel': expected shape (s, x_a, x_b, y) = {shape}, got {kernel.shape}")

    model = make_model(prior, doc["quantizer_a"], doc["quantizer_b"], kernel,
                       state_labels=states, input_a_labels=inputs_a, input_b_labels=inputs_b,
                       output_labels=outputs, obs_a_labels=doc.get("observations_a"),
                       obs_b_labels=doc.get("observations_b"))
    problems = validate_model(model)
    if problems:
        raise SpecError("; ".join(f"field '{p.kind.split('_')[0]}': {p}" for p in problems))
    return model


def dump_spec(model: MacModel, name: str | None = None) -> str:
    doc = {}
    if name:
        doc["name"] = name
    doc.update({
        "states": list(model.state_labels),
        "prior": model.prior.tolist(),
        "inputs_a": list(model.input_a_labels),
        "inputs_b": list(model.input_b_labels),
        "outputs": list(model.output_labels),
        "quantizer_a": [model.obs_a_labels[v] for v in model.quantizer_a],
        "quantizer_b": [model.obs_b_labels[v] for v in model.quantizer_b],
        "kernel": model.kernel.tolist(),
    })
    return json.dumps(doc, indent=2) + "\n"


def load_spec(path) -> MacModel:
    with open(path, encoding="utf-8") as fh:
        return parse_spec(fh.read())


def fixture_text(name: str) -> str:
    return resources.files("macregion.fixtures").joinpath(f"{name.lower()}.json").read_text()


def load_fixture(name: str) -> MacModel:
    """Bundled channels: ``adder`` and ``xorstate``."""
    return parse_spec(fixture_text(name))


def parse_policy(document: str, model: MacModel | None = None) -> TeamPolicy:
    """``{"pi_a": [[...] per v_a], "pi_b": [[...] per v_b]}``"""
    try:
        doc = json.loads(document)
        policy = TeamPolicy(np.array(doc["pi_a"], dtype=float), np.array(doc["pi_b"], dtype=float))
    except json.JSONDecodeError as exc:
        raise SpecError(f"policy file line {exc.lineno}: {exc.msg}") from None
    except (KeyError, TypeError, ValueError) as exc:
        raise SpecError(f"policy file: {exc}") from None
    problems = validate_policy(policy, model)
    if problems:
        raise SpecError("policy file: " + "; ".join(problems))
    return policy


def dump_policy(policy: TeamPolicy) -> str:
    return json.dumps({"pi_a": policy.pi_a.tolist(), "pi_b": policy.pi_b.tolist()}) + "\n"


def format_polygon(polygon: Polygon, version: str, seed: int) -> str:
    """Header line then one ``r_a r_b`` line per vertex, counterclockwise from the origin."""
    lines = [f"# macregion {version} seed={seed}"]
    lines += [f"{v.r_a!r} {v.r_b!r}" for v in polygon.vertices]
    return "\n".join(lines) + "\n"


def parse_polygon(text: str) -> Polygon:
    verts = []
    for line in text.splitlines():
        if line.startswith("#") or not line.strip():
            continue
        a, b = line.split()
        verts.append(RatePair(float(a), float(b)))
    return Polygon(tuple(verts))

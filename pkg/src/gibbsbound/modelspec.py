"""Model specification files (TOML) and the templates the CLI writes.

Grammar (schema 1):

    schema = 1
    kind = "ergm"            # or "ising"
    n = 16                   # vertices (ergm) or sites (ising)

    # ergm: one [[terms]] block per motif, the first must be the edge
    [[terms]]
    motif = "edge"           # name or "v=3; edges=0-1,0-2"
    beta = -1.6339

    # ising instead has:
    # beta = 0.5
    # graph = "complete"     # or "cycle"
    # neighborhoods = [[1, 2], [0, 2], [0, 1]]   # explicit alternative

Unknown keys are rejected so typos fail loudly.
"""

from __future__ import annotations

try:
    import tomllib as _toml
except ModuleNotFoundError:  # Python 3.10
    import tomli as _toml

from .graphs import parse_motif
from .models import ErgmModel, IsingModel

__all__ = ["load_model", "loads_model", "model_to_toml", "TEMPLATES",
           "template_text"]

_TOP_KEYS = {"schema", "kind", "n", "terms", "beta", "graph", "neighborhoods"}


def loads_model(text):
    """Parse a model from TOML text."""
    data = _toml.loads(text)
    unknown = set(data) - _TOP_KEYS
    if unknown:
        raise ValueError(f"unknown model-file keys: {sorted(unknown)}")
    schema = data.get("schema")
    if schema != 1:
        raise ValueError(f"unsupported schema {schema!r} (expected 1)")
    kind = data.get("kind")
    n = data.get("n")
    if not isinstance(n, int) or n < 1:
        raise ValueError("n must be a positive integer")
    if kind == "ergm":
        terms_raw = data.get("terms")
        if not terms_raw:
            raise ValueError("an ergm file needs at least one [[terms]] block")
        terms = []
        for k, block in enumerate(terms_raw):
            extra = set(block) - {"motif", "beta"}
            if extra:
                raise ValueError(f"unknown keys in terms[{k}]: {sorted(extra)}")
            terms.append((parse_motif(str(block["motif"])), float(block["beta"])))
        return ErgmModel(n, terms)
    if kind == "ising":
        beta = data.get("beta")
        if beta is None:
            raise ValueError("an ising file needs a beta value")
        if "neighborhoods" in data:
            return IsingModel(n, float(beta), data["neighborhoods"])
        graph = data.get("graph")
        if graph == "complete":
            return IsingModel.complete(n, float(beta))
        if graph == "cycle":
            return IsingModel.cycle(n, float(beta))
        raise ValueError("ising files need either neighborhoods or "
                         "graph = 'complete' | 'cycle'")
    raise ValueError(f"kind must be 'ergm' or 'ising', got {kind!r}")


def load_model(path):
    with open(path, "rb") as fh:
        data = fh.read()
    return loads_model(data.decode("utf-8"))


def _motif_field(motif):
    if motif.name in ("edge", "twostar", "triangle"):
        return motif.name
    return motif.to_text()


def model_to_toml(model):
    """Serialize a model so that loading the text reproduces it."""
    if isinstance(model, ErgmModel):
        lines = ["schema = 1", 'kind = "ergm"', f"n = {model.n}"]
        for motif, beta in model.terms:
            lines += ["", "[[terms]]", f'motif = "{_motif_field(motif)}"',
                      f"beta = {beta!r}"]
        return "\n".join(lines) + "\n"
    if isinstance(model, IsingModel):
        nbrs = ", ".join("[" + ", ".join(map(str, ns)) + "]"
                         for ns in model.neighborhoods)
        return (f"schema = 1\nkind = \"ising\"\nn = {model.n}\n"
                f"beta = {model.beta!r}\nneighborhoods = [{nbrs}]\n")
    raise TypeError(f"cannot serialize {type(model).__name__}")


TEMPLATES = {
    "ergm-edge": ErgmModel(10, [(parse_motif("edge"), 0.2)]),
    "ergm-twostar": ErgmModel(16, [(parse_motif("edge"), -1.6339),
                                   (parse_motif("twostar"), 0.0098)]),
    "ergm-triangle": ErgmModel(10, [(parse_motif("edge"), -0.8),
                                    (parse_motif("triangle"), 0.05)]),
    "ising-complete": IsingModel.complete(10, 0.5),
    "ising-cycle": IsingModel.cycle(12, 0.8),
}


def template_text(name):
    if name not in TEMPLATES:
        raise ValueError(f"unknown template {name!r}; "
                         f"choose from {sorted(TEMPLATES)}")
    return model_to_toml(TEMPLATES[name])

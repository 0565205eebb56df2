import pytest

from gibbsbound.graphs import EDGE, TRIANGLE, Motif
from gibbsbound.models import ErgmModel, IsingModel
from gibbsbound.modelspec import (
    TEMPLATES,
    load_model,
    loads_model,
    model_to_toml,
    template_text,
)

ERGM_TEXT = """\
schema = 1
kind = "ergm"
n = 16

[[terms]]
motif = "edge"
beta = -1.6339

[[terms]]
motif = "twostar"
beta = 0.0098
"""

ISING_TEXT = """\
schema = 1
kind = "ising"
n = 3
beta = 0.5
neighborhoods = [[1, 2], [0, 2], [0, 1]]
"""


class TestParsing:
    def test_ergm(self):
        model = loads_model(ERGM_TEXT)
        assert isinstance(model, ErgmModel)
        assert model.n == 16
        assert model.betas == (-1.6339, 0.0098)
        assert model.motifs[1].v == 3 and model.motifs[1].e == 2

    def test_ising_explicit_neighborhoods(self):
        model = loads_model(ISING_TEXT)
        assert isinstance(model, IsingModel)
        assert model.r == 2

    def test_ising_named_graphs(self):
        model = loads_model('schema = 1\nkind = "ising"\nn = 5\nbeta = 1.0\n'
                            'graph = "complete"\n')
        assert model.r == 4
        model = loads_model('schema = 1\nkind = "ising"\nn = 5\nbeta = 1.0\n'
                            'graph = "cycle"\n')
        assert model.r == 2

    def test_custom_motif_text(self):
        text = ('schema = 1\nkind = "ergm"\nn = 6\n\n[[terms]]\n'
                'motif = "edge"\nbeta = 0.1\n\n[[terms]]\n'
                'motif = "v=4; edges=0-1,1-2,2-3"\nbeta = 0.2\n')
        model = loads_model(text)
        assert model.motifs[1].v == 4

    @pytest.mark.parametrize("bad", [
        'schema = 2\nkind = "ergm"\nn = 4\n',
        'schema = 1\nkind = "potts"\nn = 4\n',
        'schema = 1\nkind = "ergm"\nn = 4\nbogus = 1\n',
        'schema = 1\nkind = "ergm"\nn = 0\n',
        'schema = 1\nkind = "ising"\nn = 4\n',          # missing beta
        'schema = 1\nkind = "ising"\nn = 4\nbeta = 1\n',  # missing graph
    ])
    def test_rejects_bad_files(self, bad):
        with pytest.raises(ValueError):
            loads_model(bad)


class TestRoundTrip:
    @pytest.mark.parametrize("name", sorted(TEMPLATES))
    def test_templates_round_trip(self, name):
        text = template_text(name)
        model = loads_model(text)
        assert model == TEMPLATES[name]
        assert loads_model(model_to_toml(model)) == model

    def test_file_round_trip(self, tmp_path):
        model = ErgmModel(7, [(EDGE, -0.4), (TRIANGLE, 0.12)])
        path = tmp_path / "m.toml"
        path.write_text(model_to_toml(model), encoding="utf-8")
        assert load_model(path) == model

    def test_custom_motif_round_trip(self):
        motif = Motif(4, ((0, 1), (1, 2), (2, 3)))
        model = ErgmModel(9, [(EDGE, 0.3), (motif, -0.2)])
        again = loads_model(model_to_toml(model))
        assert again.motifs[1].edges == motif.edges
        assert again == model

    def test_ising_round_trip(self):
        model = IsingModel.cycle(8, 1.25)
        assert loads_model(model_to_toml(model)) == model

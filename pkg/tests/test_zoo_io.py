from pathlib import Path

import pytest
import yaml

from foliate import zoo
from foliate.errors import ModelValidationError
from foliate.io import ParseError, dump_model, load_model, model_from_dict, model_to_dict, parse_element
from foliate.lichnerowicz import betti, twisted_betti
from foliate.signature import basic_signature

MODELS = Path(__file__).resolve().parent.parent / "data" / "models"


@pytest.mark.parametrize("name", zoo.NAMES)
def test_expected_table_recomputed(name):
    e = zoo.builtin(name)
    b = e.model.basic
    assert betti(b) == e.expected["basic_betti"]
    assert twisted_betti(b) == e.expected["twisted_betti"]
    assert (not any(e.model.mean_curvature.kappa_b_coords)) == e.expected["taut"]
    if e.model.oriented and b.q % 2 == 0:
        assert basic_signature(b).sigma == e.expected["sigma"]
    else:
        assert e.expected["sigma"] is None


def test_unknown_name_lists_registry():
    with pytest.raises(KeyError) as exc:
        zoo.builtin("klein_bottle")
    assert "carriere_sol3" in str(exc.value)


@pytest.mark.parametrize("name", zoo.NAMES)
def test_round_trip(name):
    m = zoo.builtin(name).model
    text = dump_model(m)
    m2 = model_from_dict(yaml.safe_load(text))
    assert m2.dims == m.dims
    assert betti(m2.basic) == betti(m.basic)
    assert twisted_betti(m2.basic) == twisted_betti(m.basic)
    assert dump_model(m2) == text


@pytest.mark.parametrize("name", zoo.NAMES)
def test_shipped_model_files_match_registry(name):
    path = MODELS / f"{name}.yaml"
    assert path.read_text() == dump_model(zoo.builtin(name).model)
    assert load_model(path).dims == zoo.builtin(name).model.dims


def _doc(name):
    return model_to_dict(zoo.builtin(name).model)


def test_parse_errors():
    d = _doc("carriere_sol3")
    with pytest.raises(ParseError):
        model_from_dict({**d, "colour": "red"})
    with pytest.raises(ParseError):
        model_from_dict({**d, "kind": "manifold"})
    with pytest.raises(ParseError):
        model_from_dict({**d, "metric": [[0.5, 0, 0], [0, 1, 0], [0, 0, 1]]})
    with pytest.raises(ParseError):
        model_from_dict({**d, "structure_constants": [[1, 2, 3]]})
    c = _doc("cp2_cdga")
    with pytest.raises(ParseError):
        model_from_dict({**c, "mul": [["x", "y", "1 * x2"]]})


def test_validation_errors_from_files():
    d = _doc("carriere_sol3")
    with pytest.raises(ModelValidationError):
        model_from_dict({**d, "leaf": [3]})
    with pytest.raises(ModelValidationError):
        model_from_dict({**d, "metric": [["1", "2", "0"], ["2", "1", "0"], ["0", "0", "1"]]})


def test_parse_element():
    m = zoo.builtin("carriere_sol3").model
    assert parse_element(m, 1, "e{3}") == (0, 0, 1)
    with pytest.raises(ParseError):
        parse_element(m, 2, "e{3}")
    c = zoo.builtin("unit_function_cdga").model
    assert parse_element(c, 1, "e - 1/2 * u") == (-0.5, 1, 0)
    with pytest.raises(ParseError):
        parse_element(c, 1, "f")

import json

import numpy as np
import pytest

from qgs.cli import RunConfig, main, run
from qgs.corpus import corpus_graphs, random_graph
from qgs.graph import InvalidGraphError
from qgs.io import emit_graph, emit_report, graph_to_dict, parse_graph

MINIMAL = {"vertices": [{"id": "a"}, {"id": "b", "alpha": 2.0}],
           "edges": [{"id": "e", "tail": "a", "head": "b", "length": 1.5}]}


def write(tmp_path, doc, name="g.json"):
    p = tmp_path / name
    p.write_text(doc if isinstance(doc, str) else json.dumps(doc))
    return str(p)


def test_minimal_document():
    g = parse_graph(json.dumps(MINIMAL).encode())
    assert len(g.edges) == 1 and g.alpha_of("b") == 2.0


@pytest.mark.parametrize("mutate,code", [
    (lambda d: d["edges"].append(dict(d["edges"][0], tail="b", head="a")), "DuplicateId"),
    (lambda d: d["edges"][0].pop("length"), "MissingField"),
    (lambda d: d["edges"][0].update(length=0), "NonPositiveLength"),
    (lambda d: d["edges"][0].update(length="1"), "BadNumber"),
    (lambda d: d["vertices"].append({"id": "a"}), "DuplicateId"),
])
def test_schema_errors(mutate, code):
    doc = json.loads(json.dumps(MINIMAL))
    mutate(doc)
    with pytest.raises(InvalidGraphError) as info:
        parse_graph(json.dumps(doc))
    assert code in [d.code for d in info.value.diagnostics]


def test_malformed_json():
    with pytest.raises(InvalidGraphError) as info:
        parse_graph(b"{not json")
    assert info.value.diagnostics[0].code == "MalformedJSON"


def test_round_trip_50_vertices():
    g = random_graph(np.random.default_rng(50), n_vertices=50)
    doc = json.loads(emit_graph(g))
    rng = np.random.default_rng(0)
    rng.shuffle(doc["edges"])
    rng.shuffle(doc["vertices"])
    assert graph_to_dict(parse_graph(json.dumps(doc))) == graph_to_dict(g)
    assert parse_graph(emit_graph(g)) == parse_graph(emit_graph(parse_graph(emit_graph(g))))


def test_emit_report_csv_and_json():
    rows = [{"a": 1, "b": np.float64(0.5)}, {"a": 2, "b": 1.0}]
    assert emit_report(rows, "csv") == b"a,b\n1,0.5\n2,1.0\n"
    assert json.loads(emit_report({"x": np.arange(2), "y": float("inf")})) == {"x": [0, 1], "y": "inf"}
    with pytest.raises(ValueError):
        emit_report(rows, "xml")


def test_corpus_is_deterministic():
    a, b = corpus_graphs(5, 7), corpus_graphs(5, 7)
    assert a == b and a != corpus_graphs(5, 8)
    assert all(3 <= g.n <= 10 for g in corpus_graphs(40, 1))


def test_validate_loop_exit_code(tmp_path, capsys):
    doc = {"vertices": [{"id": "u"}, {"id": "v"}],
           "edges": [{"id": "l", "tail": "u", "head": "u", "length": 1},
                     {"id": "e", "tail": "u", "head": "v", "length": 1}]}
    assert main(["validate", "--input", write(tmp_path, doc)]) == 1
    out = json.loads(capsys.readouterr().out)
    assert out["valid"] is False and any("LoopAt" in d for d in out["diagnostics"])


def test_correspond_edge(tmp_path):
    doc = {"vertices": [{"id": "u", "alpha": -1}, {"id": "v", "alpha": -1}],
           "edges": [{"id": "e", "tail": "u", "head": "v", "length": 1}]}
    code, rep = run(RunConfig("correspond", input=write(tmp_path, doc)))
    assert code == 0 and rep["agree"] and rep["kappa_minus_quantum"] == 1


def test_input_errors(tmp_path, capsys):
    assert main(["nonsense"]) == 1
    assert main(["spectrum", "--input", write(tmp_path, "{oops")]) == 1
    assert main(["spectrum"]) == 1
    assert main(["criteria", "--family", "nope"]) == 1
    assert main(["spectrum", "--family", "ladder", "--tol", "bogus=1"]) == 1
    capsys.readouterr()


def test_output_file_and_determinism(tmp_path):
    out1, out2 = tmp_path / "a.json", tmp_path / "b.json"
    for out in (out1, out2):
        assert main(["corpus", "--n", "8", "--seed", "3", "--out", str(out)]) == 0
    a, b = json.loads(out1.read_text()), json.loads(out2.read_text())
    for d in (a, b):
        d.pop("runtime_seconds")
    assert a == b and a["instances"] == 8 and "tolerances" in a


@pytest.mark.parametrize("argv", [
    ["assemble", "--family", "ladder", "--depth", "3", "--format", "csv"],
    ["spectrum", "--family", "example_tree", "--depth", "2", "--method", "both", "--lam", "10"],
    ["metrics", "--family", "delta_line", "--depth", "4", "--rule", "m_sum"],
    ["criteria", "--family", "delta_line_geometric", "--depth", "6"],
    ["heat", "--family", "lattice2", "--depth", "8"],
    ["generate", "--family", "binary_tree", "--depth", "3"],
    ["clr", "--family", "lattice2", "--depth", "3", "--lambdas", "1,2"],
])
def test_commands_succeed(argv, capsys):
    assert main(argv) == 0
    assert capsys.readouterr().out


def test_cheeger_command(tmp_path, capsys):
    doc = {"vertices": [{"id": str(i)} for i in (1, 2, 3)],
           "edges": [{"id": "a", "tail": "1", "head": "2", "length": 1},
                     {"id": "b", "tail": "2", "head": "3", "length": 1}]}
    assert main(["cheeger", "--input", write(tmp_path, doc), "--domain", "1,2"]) == 0
    rep = json.loads(capsys.readouterr().out)
    assert rep["holds"] and rep["constant"] == pytest.approx(1 / 3)

import json
import os
from pathlib import Path

import pytest

import unirank

DATA = Path(os.environ.get("UNIRANK_DATA_DIR", Path(__file__).resolve().parents[2] / "data"))
MINI = DATA / "mini"


@pytest.fixture(scope="module")
def corpora():
    train, warnings = unirank.ingest(
        MINI / "tables", MINI / "questions.train.tsv", "train", DATA / "inference_types.tsv"
    )
    assert warnings == []
    dev, _ = unirank.ingest(
        MINI / "tables", MINI / "questions.dev.tsv", "dev", DATA / "inference_types.tsv"
    )
    return train, dev


def test_text():
    assert unirank.tokenize("Friction is a kind of Force") == [
        "friction", "is", "a", "kind", "of", "force",
    ]
    assert unirank.terms("friction is a kind of force") == ["friction", "kind", "force"]
    h = "What is an example of a force producing heat? two sticks getting warm when rubbed together"
    assert unirank.content_overlap_count(h, "friction is a kind of force") == 1
    assert unirank.overlap_bucket(3) == "1+"


def test_metrics():
    ranked = ["a", "b", "c", "d"]
    assert unirank.average_precision(ranked, {"a", "c"}) == pytest.approx((1 + 2 / 3) / 2)
    assert unirank.precision_at_k(ranked, {"a", "c"}, 2) == pytest.approx(0.5)
    assert unirank.mean_average_precision([1.0, 0.5]) == pytest.approx(0.75)
    with pytest.raises(ValueError):
        unirank.average_precision(ranked, set())


def test_corpus_roundtrip(corpora, tmp_path):
    train, _ = corpora
    assert len(train.facts) == 24
    assert train.split == "train"
    q = train.questions[0]
    assert q.hypothesis() == "Which force produces energy as heat? friction"
    path = tmp_path / "train.json"
    train.save(path)
    assert unirank.load_corpus(path).to_json() == train.to_json()


def test_rank_and_evaluate(corpora):
    train, dev = corpora
    ranker = unirank.Ranker(train)
    assert ranker.fact_count == 24
    assert ranker.pair_count == 8
    h = dev.questions[0].hypothesis()
    full = ranker.rank(h)
    assert len(full) == 24
    assert sorted(uid for uid, *_ in full) == sorted(f.uid for f in train.facts)
    top = ranker.rank(h, top=3)
    assert [r[0] for r in top] == [r[0] for r in full[:3]]

    rs_only = ranker.rank(h, unirank.RankerConfig(lambda1=1.0))
    joint_pos = [r[0] for r in full].index("c01")
    rs_pos = [r[0] for r in rs_only].index("c01")
    assert joint_pos < rs_pos

    report = ranker.evaluate(dev, unirank.RankerConfig())
    assert report["models"][0]["name"] == "RS BM25 + US BM25"
    assert 0.0 < report["models"][0]["report"]["overall_map"] <= 1.0
    json.dumps(report)


def test_bad_config():
    with pytest.raises(ValueError):
        unirank.RankerConfig(lambda1=2.0)

import pytest

from rmove.errors import DanglingReference, MalformedRecord, MixedModes
from rmove.frontend import export_facts, ingest_facts, parse_source
from rmove.frontend.corpus import Corpus
from rmove.paths import PathContext, mine_paths
from rmove.config import Config

FACTS = """\
{"kind":"class","id":"p::A","project":"p"}
{"kind":"class","id":"p::B","project":"p"}
{"kind":"method","id":"p::A::f()","class":"p::A","name":"f"}
{"kind":"method","id":"p::A::g(int)","class":"p::A","name":"g"}
{"kind":"method","id":"p::B::h()","class":"p::B","name":"h"}
{"kind":"call","src":"p::A::f()","dst":"p::A::g(int)"}
{"kind":"call","src":"p::A::f()","dst":"p::B::h()"}
{"kind":"call","src":"p::A::g(int)","dst":"p::B::h()"}
"""


def test_counts_preserved():
    corpus = ingest_facts(FACTS)
    assert len(corpus.classes) == 2
    assert len(corpus.methods) == 3
    assert len(corpus.raw_calls) == 3
    assert corpus.project == "p"


def test_param_types_recovered_from_signature():
    corpus = ingest_facts(FACTS)
    assert corpus.record_of("p::A::g(int)").param_types == ("int",)
    assert corpus.record_of("p::A::f()").param_types == ()
    assert not corpus.record_of("p::A::f()").body_present


def test_dangling_call_rejected():
    facts = (
        '{"kind":"class","id":"p::A","project":"p"}\n'
        '{"kind":"method","id":"p::A::f()","class":"p::A","name":"f"}\n'
        '{"kind":"call","src":"p::A::f()","dst":"p::A::nope()"}\n'
    )
    with pytest.raises(DanglingReference):
        ingest_facts(facts)


def test_duplicate_method_rejected():
    facts = (
        '{"kind":"class","id":"p::A","project":"p"}\n'
        '{"kind":"method","id":"p::A::f()","class":"p::A","name":"f"}\n'
        '{"kind":"method","id":"p::A::f()","class":"p::A","name":"f"}\n'
    )
    with pytest.raises(MalformedRecord):
        ingest_facts(facts)


def test_unknown_kind_rejected():
    with pytest.raises(MalformedRecord) as excinfo:
        ingest_facts('{"kind":"mystery","id":"x"}\n')
    assert excinfo.value.line_no == 1


def test_invalid_json_rejected():
    with pytest.raises(MalformedRecord):
        ingest_facts("not json\n")


def test_path_context_records_ingested():
    facts = FACTS + (
        '{"kind":"path_context","method":"p::A::f()","start":"a",'
        '"nodes":["BinaryExpression↑","ConditionalExpression↓"],"end":"b"}\n'
    )
    corpus = ingest_facts(facts)
    (ctx,) = corpus.imported_contexts["p::A::f()"]
    assert ctx == PathContext("a", ("BinaryExpression↑", "ConditionalExpression↓"), "b")


def test_path_context_needs_direction_marks():
    facts = FACTS + (
        '{"kind":"path_context","method":"p::A::f()","start":"a",'
        '"nodes":["BinaryExpression"],"end":"b"}\n'
    )
    with pytest.raises(MalformedRecord):
        ingest_facts(facts)


def test_mixed_modes_rejected():
    corpus = parse_source([("a.src", "class A { int f() { return 1; } }")])
    (method_id,) = corpus.method_ids()
    ctx = PathContext("a", ("Block↓",), "b")
    with pytest.raises(MixedModes):
        Corpus(
            project=corpus.project,
            classes=corpus.classes,
            methods=corpus.methods,
            raw_calls=corpus.raw_calls,
            imported_contexts={method_id: (ctx,)},
        )


def test_export_ingest_round_trip_is_byte_stable():
    text = export_facts(ingest_facts(FACTS))
    again = export_facts(ingest_facts(text))
    assert text == again


def test_parsed_corpus_round_trips_through_facts():
    source = """
    class A {
        int f(int x) { return g(x) > 0 ? x : -1; }
        int g(int y) { return y + 1; }
    }
    """
    corpus = parse_source([("a.src", source)], project="p")
    pathsets = mine_paths(corpus, Config())
    text = export_facts(corpus, pathsets)
    recovered = ingest_facts(text)
    assert recovered.method_ids() == corpus.method_ids()
    assert recovered.raw_calls == corpus.raw_calls
    for method_id, pathset in pathsets.items():
        assert recovered.imported_contexts.get(method_id, ()) == pathset.contexts
    # and the re-export is byte-identical
    assert export_facts(recovered) == text


def test_empty_stream_gives_empty_corpus():
    corpus = ingest_facts("")
    assert corpus.classes == []
    assert corpus.methods == {}
    assert export_facts(corpus) == ""

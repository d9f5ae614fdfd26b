#!/usr/bin/env python3
"""
Tests for the graph, 3SAT and QSAT input formats.
"""
import pytest

from armkit.errors import CodingError, EncodingError, NiceFormatError
from armkit.programs.encoders import (
    check_coding,
    decode_graph,
    decode_reachable,
    encode_3sat,
    encode_graph,
    encode_qsat,
    field_width,
    graph_tape,
    parse_3sat,
    parse_graph,
    parse_qsat,
    untape,
)
from armkit.programs.instances import CnfFormula, GraphInstance, QbfInstance

EDGE = GraphInstance.build(2, [(1, 2)], [1])


@pytest.mark.parametrize("n,width", [(1, 1), (2, 2), (3, 2), (4, 3), (7, 3), (8, 4)])
def test_field_width(n, width):
    assert field_width(n) == width


# ---------- graphs ----------

def test_encode_graph_caret_form():
    assert encode_graph(EDGE) == "|^0^1|0010|10|0000|"


def test_encode_graph_unticked():
    assert encode_graph(EDGE, ticked=False) == "|01|0010|10|0000|"


def test_encode_graph_membership_form():
    text = encode_graph(EDGE, membership=True)
    assert text == "|01|0010|10|0000|10"
    assert decode_graph(text) == EDGE


def test_decode_graph_reads_back():
    g = GraphInstance.build(3, [(1, 2), (2, 3), (3, 1)], [2])
    assert decode_graph(encode_graph(g)) == g


def test_tape_form_keeps_ticks():
    tape = graph_tape(encode_graph(EDGE))
    assert tape.startswith("|") and tape.endswith("|")
    assert decode_reachable(tape) == {1}
    assert untape(tape) == encode_graph(EDGE)


def test_vertex_out_of_range():
    with pytest.raises(EncodingError):
        GraphInstance.build(2, [(1, 3)], [1])


def test_partly_ticked_vertex_field():
    with pytest.raises(EncodingError, match="partly ticked"):
        parse_graph("|^01|0010|10|0000|")


def test_bad_edge_entry():
    with pytest.raises(EncodingError):
        decode_graph("|01|0011|10|0000|")


def test_wrong_field_width():
    with pytest.raises(EncodingError):
        parse_graph("|001|000|")


# ---------- 3SAT ----------

def test_encode_3sat_example():
    f = CnfFormula(k=3, clauses=((1, -2, -3),))
    assert encode_3sat(f) == "01+|10-|11-"


def test_encode_3sat_single_variable():
    assert encode_3sat(CnfFormula(k=1, clauses=((1, 1, 1),))) == "1+|1+|1+"


def test_parse_3sat_reads_back():
    f = CnfFormula(k=2, clauses=((1, 2, -1), (-2, -2, 1)))
    assert parse_3sat(encode_3sat(f)) == f


def test_3sat_unused_variable():
    with pytest.raises(NiceFormatError):
        encode_3sat(CnfFormula(k=3, clauses=((1, 1, 2),)))


def test_3sat_name_width_must_match():
    with pytest.raises(NiceFormatError):
        parse_3sat("01+|01+|01+")


def test_3sat_short_clause():
    with pytest.raises(EncodingError):
        parse_3sat("1+|1+")


# ---------- QSAT ----------

def test_encode_qsat_example():
    q = QbfInstance(
        quantifiers=("E", "A", "E"),
        clauses=(((0, True), (1, True), (2, True)), ((1, False), (2, False))),
    )
    assert encode_qsat(q) == "E10 A01 E00 [+00_,+01_,+10_;-01_,-10_]"
    assert parse_qsat(encode_qsat(q)) == q


def test_encode_qsat_single_variable():
    q = QbfInstance(quantifiers=("E",), clauses=(((0, True),),))
    assert encode_qsat(q) == "E0 [+0_]"


def test_clause_implying_another():
    q = QbfInstance(quantifiers=("E", "E"), clauses=(((0, True),), ((0, True), (1, False))))
    with pytest.raises(CodingError, match="implies"):
        check_coding(q)


def test_unused_quantified_variable():
    q = QbfInstance(quantifiers=("E", "A"), clauses=(((0, True),),))
    with pytest.raises(CodingError, match="never occur"):
        check_coding(q)


def test_prefix_must_count_down():
    with pytest.raises(CodingError):
        parse_qsat("E00 A01 [+00_,+01_]")

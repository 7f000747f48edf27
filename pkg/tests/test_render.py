import json

import pytest
from rich.console import Console

from lagrangian_variety.render import emit, show, to_csv, to_markdown

ROWS = [{"w": "e", "rank": 2, "openLeaf": True}, {"w": "s1", "rank": 0, "openLeaf": False}]


def test_json_is_sorted_and_newline_terminated():
    text = emit(ROWS, "json")

    assert text.endswith("\n")
    assert json.loads(text) == ROWS
    assert text.index('"openLeaf"') < text.index('"rank"')


def test_json_prefers_payload():
    payload = {"type": "A1", "rows": ROWS}

    assert json.loads(emit(ROWS, "json", payload=payload)) == payload


def test_csv():
    assert to_csv(ROWS) == "w,rank,openLeaf\ne,2,true\ns1,0,false\n"


def test_csv_columns_and_lists():
    rows = [{"boundary": ["({},{},-)", "x"], "dim": None}]

    assert to_csv(rows, ["dim", "boundary"]) == 'dim,boundary\n,"({},{},-) x"\n'


def test_markdown_escapes_pipes():
    text = to_markdown([{"d": "a|b"}])

    assert text.splitlines() == ["| d |", "|---|", "| a\\|b |"]


def test_unknown_format():
    with pytest.raises(ValueError):
        emit(ROWS, "yaml")


def test_show_writes_verbatim_off_terminal(capsys):
    show("| w |\n", "md", Console(force_terminal=False))

    assert capsys.readouterr().out == "| w |\n"

"""Parsing and re-serialization of workspace definition files."""

from pathlib import Path

import pytest

from homconf.workspace import (
    DuplicateName,
    UnresolvedReference,
    WorkspaceRankMismatch,
    WorkspaceSyntaxError,
    parse_workspace,
    serialize_workspace,
)

FIXTURE = Path(__file__).parent / "fixtures" / "vir.ws"


def test_fixture_parses():
    ws = parse_workspace(FIXTURE.read_text())
    assert set(ws.algebras) == {"vir"}
    assert set(ws.modules) == {"M", "M2"}
    assert set(ws.maps) == {"T1", "D1", "X2", "N"}
    assert set(ws.cochains) == {"c1", "c2", "b1", "b2"}
    assert set(ws.deformations) == {"S", "SD"}
    assert ws.deformation_contexts["S"] == ("M", "vir")


def test_round_trip():
    ws = parse_workspace(FIXTURE.read_text())
    text = serialize_workspace(ws)
    again = serialize_workspace(parse_workspace(text))
    assert text == again


def test_unresolved_algebra():
    with pytest.raises(UnresolvedReference) as err:
        parse_workspace("module M over vir2\nrank 1")
    assert "vir2" in str(err.value)


def test_wrong_bracket_length():
    with pytest.raises(WorkspaceRankMismatch) as err:
        parse_workspace("algebra a\nrank 1\nbracket 1 1 : d | l")
    assert err.value.line_no == 3


def test_duplicate_name():
    with pytest.raises(DuplicateName):
        parse_workspace("algebra a\nrank 1\nalgebra a\nrank 1")


def test_syntax_error_carries_line():
    with pytest.raises(WorkspaceSyntaxError) as err:
        parse_workspace("# comment\nbogus line")
    assert err.value.line_no == 2


def test_index_out_of_range():
    with pytest.raises(WorkspaceRankMismatch):
        parse_workspace("algebra a\nrank 1\nbracket 1 2 : d")


def test_map_shape_checked():
    text = "algebra a\nrank 2\nmap f : a -> a\nmatrix d"
    with pytest.raises(WorkspaceRankMismatch):
        parse_workspace(text)


def test_cochain_variable_scope():
    text = ("algebra a\nrank 1\n"
            "cochain c degree 1 : a -> a\nvalue 1 : l1")
    with pytest.raises(WorkspaceSyntaxError):
        parse_workspace(text)


def test_deformation_needs_shared_context():
    base = ("algebra a\nrank 1\nmodule M over a\nrank 1\n"
            "map t : M -> a\nmatrix 1\nmap u : a -> a\nmatrix 1\n")
    with pytest.raises(WorkspaceRankMismatch):
        parse_workspace(base + "deformation s : t + u")

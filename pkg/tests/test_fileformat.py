from __future__ import annotations

from fractions import Fraction
from pathlib import Path

import pytest

from tritopo import fileformat
from tritopo.corpus import generate
from tritopo.errors import FormatError

CORPUS = sorted((Path(__file__).parent.parent / "corpus").glob("*.cx"))


def test_corpus_present():
    assert len(CORPUS) >= 15


@pytest.mark.parametrize("path", CORPUS, ids=lambda p: p.stem)
def test_corpus_round_trip(path):
    text = path.read_text()
    assert fileformat.serialize(fileformat.parse(text)) == fileformat.canonicalize(text) == text


def test_shuffled_input_canonicalizes():
    text = """# hand written
TRITOPO 1
DIMENSION 2
VERTICES
2 1 0
SIMPLICES 1
1 2
0 2
0 1
SIMPLICES 2
2 0 1
LABELS
rim: 1 0; 2 1; 0 2
END
"""
    cf = fileformat.parse(text)
    assert cf.complex.f_vector == (3, 3, 1)
    out = fileformat.canonicalize(text)
    assert "0 1 2" in out and out.index("0 1\n") < out.index("0 2\n")
    assert fileformat.canonicalize(out) == out


def test_labels_and_strata_survive():
    cf = fileformat.parse((Path(__file__).parent.parent / "corpus" / "join-triangles-s3.cx").read_text())
    K = generate("join-triangles-s3").complex
    assert cf.complex == K and cf.complex.labels == K.labels
    st = generate("overhang-stack").stratification
    back = fileformat.parse(fileformat.serialize(fileformat.ComplexFile(st.union, st))).stratification
    assert [(s.base, s.lower, s.upper) for s in back.strata] == [(s.base, s.lower, s.upper) for s in st.strata]


def test_handlespec():
    cf = fileformat.parse((Path(__file__).parent.parent / "corpus" / "s3-join-4crit.cx").read_text())
    assert cf.handle_indices == (0, 1, 2, 3)


def _err(text: str) -> str:
    with pytest.raises(FormatError) as exc:
        fileformat.parse(text)
    return str(exc.value)


def test_missing_face_names_simplex():
    msg = _err("TRITOPO 1\nDIMENSION 2\nVERTICES\n0 1 2\nSIMPLICES 1\n0 1\n0 2\nSIMPLICES 2\n0 1 2\nEND\n")
    assert "(1, 2)" in msg and "(0, 1, 2)" in msg and "line" in msg


def test_unknown_section_named():
    assert "FOO" in _err("TRITOPO 1\nDIMENSION 0\nVERTICES\n0\nFOO\nEND\n")


def test_bad_integer_position():
    msg = _err("TRITOPO 1\nDIMENSION 0\nVERTICES\n0 x\nEND\n")
    assert msg.startswith("line 4, column 3")


def test_bad_header():
    assert "TRITOPO" in _err("HELLO\n")


def test_off_export_round_trip(tmp_path):
    coords = {0: (0, 0, 0), 1: (1, 0, 0), 2: (0, 1, 0), 3: (0, 0, 1)}
    tris = [(0, 2, 1), (0, 1, 3), (1, 2, 3), (0, 3, 2)]
    p = tmp_path / "m.off"
    fileformat.write_off(p, coords, tris)
    pts, faces = fileformat.read_off(p.read_text())
    assert len(pts) == 4 and faces == tris
    assert p.read_text() == fileformat.off_text(coords, tris)


def test_exact_coordinates_round_trip():
    coords = {3: (Fraction(1, 3), Fraction(-2), Fraction(5, 7)), 0: (Fraction(0), Fraction(1), Fraction(2))}
    assert fileformat.parse_coords(fileformat.coords_text(coords)) == coords
    with pytest.raises(FormatError):
        fileformat.parse_coords("COORDS 1\n0 1/0 1 1\n")

import pytest
from hypothesis import given, strategies as st

from tonalis.errors import MalformedChord
from tonalis.pitch import (
    ALL_CHORDS,
    Chord,
    Key,
    KEY_ORDER,
    Quality,
    canonical_spelling,
    parse_chord,
    parse_key,
    transpose_chord,
)


@pytest.mark.parametrize(
    "token, root, quality",
    [
        ("Dm", 2, Quality.MINOR),
        ("Bb7", 10, Quality.DOMINANT7),
        ("F#o", 6, Quality.DIMINISHED),
        ("F#dim", 6, Quality.DIMINISHED),
        ("F#°", 6, Quality.DIMINISHED),
        ("Cb", 11, Quality.MAJOR),
        ("E", 4, Quality.MAJOR),
    ],
)
def test_parse_chord(token, root, quality):
    c = parse_chord(token)
    assert (c.root, c.quality) == (root, quality)
    assert c.spelling == token


@pytest.mark.parametrize("token", ["Hx", "", "C##", "Dbb", "Cm7", "Cmaj7", "c", "C#m7", "Caug", "m"])
def test_parse_chord_rejects(token):
    with pytest.raises(MalformedChord):
        parse_chord(token)


def test_enharmonic_equality():
    assert parse_chord("C#") == parse_chord("Db")
    assert parse_chord("A#o") == parse_chord("Bbo")
    assert hash(parse_chord("G#")) == hash(parse_chord("Ab"))


def test_transpose_examples():
    assert transpose_chord(parse_chord("C"), 7) == parse_chord("G")
    up = transpose_chord(parse_chord("Bo"), 1)
    assert up.root == 0 and up.quality is Quality.DIMINISHED
    assert transpose_chord(parse_chord("G7"), -5) == parse_chord("D7")


def test_transpose_matches_pitch_class_arithmetic():
    # oracle: semitone offsets of the twelve letter+accidental names
    names = ["C", "C#", "D", "D#", "E", "F", "F#", "G", "G#", "A", "A#", "B"]
    for chord in ALL_CHORDS:
        for n in range(-24, 25):
            expected_name = names[(chord.root + n) % 12]
            assert transpose_chord(chord, n) == parse_chord(expected_name + chord.quality.suffix)


def test_round_trip_all_48():
    assert len(ALL_CHORDS) == 48
    for chord in ALL_CHORDS:
        assert parse_chord(canonical_spelling(chord.root, chord.quality)) == chord


def test_canonical_spellings_follow_table_labels():
    assert [k.name for k in KEY_ORDER] == ["C", "G", "D", "A", "E", "B", "F#", "C#", "Ab", "Eb", "Bb", "F"]
    assert Chord(1, Quality.MAJOR).spelling == "Db"
    assert Chord(1, Quality.DIMINISHED).spelling == "C#o"
    assert Chord(3, Quality.DIMINISHED).spelling == "D#o"
    assert Chord(10, Quality.DOMINANT7).spelling == "Bb7"


def test_key_parsing():
    assert parse_key("F#") == Key(6)
    assert parse_key("Gb") == Key(6)
    assert Key(14) == Key(2)


chord_st = st.builds(Chord, st.integers(0, 11), st.sampled_from(list(Quality)))


@given(chord_st, st.integers(-100, 100), st.integers(-100, 100))
def test_transpose_composes(c, n, m):
    assert transpose_chord(transpose_chord(c, n), m) == transpose_chord(c, n + m)
    assert transpose_chord(c, 12) == c


def test_spelling_ignored_by_equality():
    a = Chord(0, Quality.MAJOR, "B#")
    assert a == Chord(0, Quality.MAJOR) and a.spelling == "B#"

import pytest

from tonalis.pitch import parse_chord

TABLE2 = "C F C Dm G7 C G7 C"
TABLE3 = "C F C Dm G7 C G7 C C C Fm Eo Fm Eo Fm"
BACH = "C Dm G C Am D G C"
MOZART = "G D G D G C F#o G D G C#o D A D A D Em E A D A D A D B Em A"

# Found by searching random chord strings with the detector (W=6) until the
# dominant runs came out as 10 / 2 / 10 windows.
TONICIZATION_BB_F_BB = "F Gm Gm F Cm Cm F7 F F F7 Cm Gm Bb Dm C7 F Bb Bb F7 Eb F Cm Bb F F Gm F"
PASSING_AB_DB_BB = (
    "Eb Fm Eb Ab Ab Ab Db Fm Eb Ab Db Ab Eb Bbm Db Db Gm F7 Bb F F7 Bb F7 Gm Bb Gm F"
)

MOZART_G_NUMERALS = "I V I V I IV VII I V I"
MOZART_D_NUMERALS = "IV VII I V I V I II V^V V I V I V I V^II II V"

FIG5_TREE = (
    "(piece (TR (CTR (t (dI I))) (TR (CTR (DR (CDR (SR (CSR (s (sp (dII II))))) (d (dV V)))) "
    "(t (dI I))) (TR (CTR (t (tp (dVI VI)))) (TR (CTR (DR (CDR (d (dV V^V V)))) (t (dI I))))))))"
)


def chords(text):
    return [parse_chord(t) for t in text.split()]


@pytest.fixture
def mozart():
    return chords(MOZART)


@pytest.fixture
def table3():
    return chords(TABLE3)


ACCEPTANCE_LINES = []


def record_criterion(number, title, ok, detail=""):
    line = f"[{'PASS' if ok else 'FAIL'}] criterion {number}: {title}"
    if detail:
        line += f" ({detail})"
    ACCEPTANCE_LINES.append(line)
    print(line)
    return ok


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)

import itertools
import random

import pytest
from hypothesis import given, settings, strategies as st

from tonalis.errors import EmptyInput, NoParse
from tonalis.grammar import (
    Grammar,
    ParseTree,
    Production,
    build_grammar,
    count_trees,
    default_grammar,
    descending_fifths_productions,
    is_well_formed,
    parse,
    to_dot,
    tree_from_bracketed,
    viable_prefix_length,
    yield_of,
)
from tonalis.numeral import FLAT_TWO, degree, parse_numeral, sec_dom, sec_lt

from conftest import FIG5_TREE, MOZART_D_NUMERALS, MOZART_G_NUMERALS

NONTERMINALS = {
    "piece", "TR", "CTR", "DR", "CDR", "SR", "CSR", "t", "s", "d", "tp", "dp", "sp", "tcp",
    "dI", "dII", "dIII", "dIV", "dV", "dVI", "dVII",
}
PLAIN = [degree(d) for d in range(1, 8)] + [FLAT_TWO]


def T(text):
    return [parse_numeral(x) for x in text.split()]


def language_up_to(grammar, max_len):
    """Every terminal string of length <= max_len, by leftmost derivation.

    No rule is empty, so a sentential form never shrinks and forms longer
    than max_len can be dropped.
    """
    sentences = set()
    seen = set()
    frontier = [(grammar.start,)]
    while frontier:
        form = frontier.pop()
        if form in seen:
            continue
        seen.add(form)
        idx = next((i for i, s in enumerate(form) if isinstance(s, str)), None)
        if idx is None:
            sentences.add(form)
            continue
        for prod in grammar.by_lhs[form[idx]]:
            new = form[:idx] + prod.rhs + form[idx + 1 :]
            if len(new) <= max_len:
                frontier.append(new)
    return sentences


@pytest.fixture(scope="module")
def small_language():
    return language_up_to(default_grammar(), 4)


def test_nonterminal_inventory():
    g = default_grammar()
    assert g.nonterminals == NONTERMINALS
    for prod in g:
        assert 1 <= len(prod.rhs) <= 3


def test_documented_corrections():
    prods = set(build_grammar())
    assert Production("DR", ("CDR", "DR")) in prods
    assert Production("t", ("dI",)) in prods
    assert Production("dIII", (sec_lt(5), degree(3))) in prods
    assert Production("sp", (FLAT_TWO,)) in prods
    assert Production("dII", (sec_dom(4), sec_dom(2), degree(2))) in prods
    assert Production("dIV", (sec_dom(5), sec_dom(4), degree(4))) in prods
    for prod in descending_fifths_productions():
        assert prod not in prods
    assert not any(p.lhs == "dI" and p.rhs == ("dV",) for p in prods)


def test_fig5_tree():
    result = parse(T("I II V I VI V^V V I"))
    assert result.trees_found == 1
    assert result.canonical.to_bracketed() == FIG5_TREE


def test_single_tonic():
    result = parse(T("I"))
    assert result.trees_found == 1
    assert result.canonical.to_bracketed() == "(piece (TR (CTR (t (dI I)))))"


def test_lone_dominant_is_rejected(small_language):
    length_one = {s for s in small_language if len(s) == 1}
    assert (degree(5),) not in length_one
    with pytest.raises(NoParse) as info:
        parse(T("V"))
    assert info.value.prefix_length == 1


def test_empty_input():
    with pytest.raises(EmptyInput):
        parse([])


def test_no_parse_prefix():
    # "I IV I" has no tonic-region reading; "I IV" still extends (I IV VII I)
    with pytest.raises(NoParse) as info:
        parse(T("I IV I II V I V I I"))
    assert info.value.prefix_length == 2


def test_small_yield_oracle(small_language):
    grammar = default_grammar()
    for n in range(1, 5):
        for combo in itertools.product(PLAIN, repeat=n):
            expected = combo in small_language
            assert (count_trees(list(combo), grammar) > 0) == expected, combo


def test_oracle_counts_match_on_secondary_sequences(small_language):
    grammar = default_grammar()
    for sentence in small_language:
        assert count_trees(list(sentence), grammar) > 0


def test_mozart_segments_parse_and_report_ambiguity():
    # Both segments contain "I V I", which t -> dI dV dI covers as one
    # tonic and CTR -> DR t covers as a cadence, so they are not unique.
    g = parse(T(MOZART_G_NUMERALS))
    d = parse(T(MOZART_D_NUMERALS))
    assert (g.trees_found, d.trees_found) == (6, 9)
    assert g.ambiguous and d.ambiguous


def test_figure9_g_tree_is_a_derivation():
    drawn = tree_from_bracketed(
        "(piece (TR (CTR (t (dI I))) (TR (CTR (DR (CDR (d (dV V)))) (t (dI I)))"
        " (TR (CTR (DR (CDR (d (dV V)))) (t (dI I)))"
        " (TR (CTR (DR (CDR (SR (CSR (s (dIV IV)))) (d (dp (dVII VII))))) (t (dI I)))"
        " (TR (CTR (DR (CDR (d (dV V)))) (t (dI I)))))))))"
    )
    assert is_well_formed(drawn)
    assert yield_of(drawn) == T(MOZART_G_NUMERALS)


def test_descending_fifths_make_grammar_ambiguous():
    variant = Grammar(build_grammar() + descending_fifths_productions())
    seq = T("IV VII III VI II V I")
    assert count_trees(seq, variant) >= 2
    assert count_trees(seq) == 0


def test_unit_cycles_rejected():
    with pytest.raises(ValueError):
        Grammar([Production("piece", ("a",)), Production("a", ("piece",))])


def test_count_bound():
    seq = T("I V I V I V I V I V I V I V I")
    result = parse(seq, bound=4)
    assert result.trees_found == 4 and result.saturated
    assert result.count_label() == ">=4"
    assert result.exact_count == count_trees(seq)


def test_bound_from_env(monkeypatch):
    monkeypatch.setenv("TONALIS_PARSE_BOUND", "2")
    assert parse(T(MOZART_G_NUMERALS)).trees_found == 2


def test_yield_of_leaf():
    assert yield_of(ParseTree(degree(1))) == [degree(1)]


def test_bracketed_round_trip():
    tree = tree_from_bracketed(FIG5_TREE)
    assert tree.to_bracketed() == FIG5_TREE
    assert yield_of(tree) == T("I II V I VI V^V V I")


def test_dot_output():
    dot = to_dot(parse(T("I II V I VI V^V V I")).canonical)
    assert dot.startswith('digraph "tree"')
    assert '[label="V^V"]' in dot
    assert dot.count("->") == sum(1 for _ in tree_from_bracketed(FIG5_TREE).walk()) - 1


def _random_sentence(rng, grammar, sym, depth=0):
    if not isinstance(sym, str):
        return [sym]
    options = grammar.by_lhs[sym]
    if depth > 8:
        # prefer the shortest-yield alternatives to terminate
        options = [p for p in options if p.rhs != ("CTR", "TR") and p.rhs != ("CDR", "DR") and p.rhs != ("CSR", "SR")]
    prod = rng.choice(options)
    out = []
    for s in prod.rhs:
        out.extend(_random_sentence(rng, grammar, s, depth + 1))
    return out


@settings(max_examples=200, deadline=None)
@given(st.integers(0, 2**32 - 1))
def test_round_trip_and_well_formed(seed):
    grammar = default_grammar()
    sentence = _random_sentence(random.Random(seed), grammar, grammar.start)
    result = parse(sentence)
    assert yield_of(result.canonical) == sentence
    assert is_well_formed(result.canonical)
    assert parse(sentence).canonical == result.canonical


@settings(max_examples=200, deadline=None)
@given(st.lists(st.sampled_from(PLAIN + [sec_dom(5), sec_lt(2)]), min_size=1, max_size=10))
def test_viable_prefix_consistent(seq):
    k = viable_prefix_length(seq)
    if count_trees(seq):
        assert k == len(seq)
    else:
        assert k <= len(seq)

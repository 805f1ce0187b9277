"""Context-free grammar of tonal harmony and a chart parser for it.

Nonterminals are plain strings, terminals are :class:`~tonalis.numeral.Numeral`
values. Parsing runs a memoized span chart (any CFG without empty rules or
unit cycles) that counts every derivation exactly, then reads a canonical
tree off the chart. An Earley recognizer provides the viable-prefix
diagnostic when the input is rejected.
"""

from __future__ import annotations

import os
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable, Sequence, Union

from .errors import EmptyInput, NoParse
from .numeral import FLAT_TWO, Numeral, degree, parse_numeral, sec_dom, sec_lt

Symbol = Union[str, Numeral]

START = "piece"
DEFAULT_PARSE_BOUND = 64


@dataclass(frozen=True)
class Production:
    lhs: str
    rhs: tuple[Symbol, ...]

    def __str__(self):
        return f"{self.lhs} -> {' '.join(str(s) for s in self.rhs)}"


def _p(lhs: str, *rhs: Symbol) -> Production:
    return Production(lhs, tuple(rhs))


I, II, III, IV, V, VI, VII = (degree(d) for d in range(1, 8))


def build_grammar() -> list[Production]:
    """The shipping grammar, in listed order (earlier = preferred)."""
    return [
        _p("piece", "TR"),
        _p("TR", "CTR"),
        _p("TR", "CTR", "TR"),
        _p("TR", "CTR", "DR"),
        _p("CTR", "DR", "t"),
        _p("CTR", "t"),
        _p("DR", "CDR"),
        _p("DR", "CDR", "DR"),
        _p("CDR", "SR", "d"),
        _p("CDR", "d"),
        _p("SR", "CSR"),
        _p("SR", "CSR", "SR"),
        _p("CSR", "s"),
        _p("t", "tp"),
        _p("t", "tcp", "dI"),
        _p("t", "dI", "dV", "dI"),
        _p("t", "dI"),
        _p("s", "sp"),
        _p("s", "dIV"),
        _p("d", "dp"),
        _p("d", "dV"),
        _p("tp", "dVI"),
        _p("dp", "dVII"),
        _p("sp", "dII"),
        _p("sp", FLAT_TWO),
        _p("tcp", "dIII"),
        # local functors: secondary-dominant resolutions, then the plain degree
        _p("dI", sec_dom(3), I),
        _p("dI", sec_dom(5), I),
        _p("dII", sec_dom(2), II),
        _p("dII", sec_lt(2), II),
        _p("dII", sec_dom(4), sec_dom(2), II),
        _p("dIII", sec_dom(3), III),
        _p("dIII", sec_dom(5), III),
        _p("dIII", sec_lt(3), III),
        _p("dIII", sec_lt(5), III),
        _p("dIV", sec_dom(4), IV),
        _p("dIV", sec_dom(6), IV),
        _p("dIV", sec_lt(4), IV),
        _p("dIV", sec_lt(6), IV),
        _p("dIV", sec_dom(5), sec_dom(4), IV),
        _p("dV", sec_dom(5), V),
        _p("dV", sec_dom(2), V),
        _p("dV", sec_lt(5), V),
        _p("dV", sec_lt(2), V),
        _p("dVI", sec_dom(6), VI),
        _p("dVI", sec_lt(6), VI),
        _p("dVII", sec_dom(7), VII),
        _p("dVII", sec_lt(7), VII),
        _p("dI", I),
        _p("dII", II),
        _p("dIII", III),
        _p("dIV", IV),
        _p("dV", V),
        _p("dVI", VI),
        _p("dVII", VII),
    ]


def descending_fifths_productions() -> list[Production]:
    """Each local functor preceded by the functor a fifth above it.

    Deliberately not part of :func:`build_grammar`: these rules make the
    grammar ambiguous. Kept for experiments only.
    """
    fifth_above = {1: 5, 2: 6, 3: 7, 4: 1, 5: 2, 6: 3, 7: 4}
    roman = ("I", "II", "III", "IV", "V", "VI", "VII")
    return [
        _p(f"d{roman[d - 1]}", f"d{roman[src - 1]}", degree(d))
        for d, src in fifth_above.items()
    ]


class Grammar:
    """An indexed, immutable production list."""

    def __init__(self, productions: Iterable[Production], start: str = START):
        self.productions: tuple[Production, ...] = tuple(productions)
        self.start = start
        by_lhs: dict[str, list[Production]] = {}
        for prod in self.productions:
            if not prod.rhs:
                raise ValueError(f"empty production for {prod.lhs}")
            by_lhs.setdefault(prod.lhs, []).append(prod)
        self.by_lhs = {k: tuple(v) for k, v in by_lhs.items()}
        self.rank = {prod: i for i, prod in enumerate(self.productions)}
        self._check_unit_cycles()

    @property
    def nonterminals(self) -> frozenset[str]:
        return frozenset(self.by_lhs)

    def is_nonterminal(self, sym: Symbol) -> bool:
        return isinstance(sym, str)

    def _check_unit_cycles(self):
        units: dict[str, set[str]] = {}
        for prod in self.productions:
            if len(prod.rhs) == 1 and isinstance(prod.rhs[0], str):
                units.setdefault(prod.lhs, set()).add(prod.rhs[0])
        state: dict[str, int] = {}

        def visit(sym):
            state[sym] = 1
            for nxt in units.get(sym, ()):
                if state.get(nxt) == 1:
                    raise ValueError(f"unit-production cycle through {nxt}")
                if nxt not in state:
                    visit(nxt)
            state[sym] = 2

        for sym in list(units):
            if sym not in state:
                visit(sym)

    def __iter__(self):
        return iter(self.productions)

    def __len__(self):
        return len(self.productions)


@lru_cache(maxsize=1)
def default_grammar() -> Grammar:
    return Grammar(build_grammar())


@dataclass(frozen=True)
class ParseTree:
    node: Symbol
    children: tuple["ParseTree", ...] = ()

    @property
    def is_leaf(self) -> bool:
        return not self.children

    def to_bracketed(self) -> str:
        if self.is_leaf:
            return str(self.node)
        return f"({self.node} {' '.join(c.to_bracketed() for c in self.children)})"

    def __str__(self):
        return self.to_bracketed()

    def walk(self):
        yield self
        for child in self.children:
            yield from child.walk()


def yield_of(tree: ParseTree) -> list[Numeral]:
    return [t.node for t in tree.walk() if t.is_leaf]


def tree_from_bracketed(text: str) -> ParseTree:
    """Inverse of :meth:`ParseTree.to_bracketed`."""
    tokens = text.replace("(", " ( ").replace(")", " ) ").split()
    pos = 0

    def read() -> ParseTree:
        nonlocal pos
        tok = tokens[pos]
        pos += 1
        if tok != "(":
            return ParseTree(parse_numeral(tok))
        label = tokens[pos]
        pos += 1
        children = []
        while tokens[pos] != ")":
            children.append(read())
        pos += 1
        return ParseTree(label, tuple(children))

    tree = read()
    if pos != len(tokens):
        raise ValueError("trailing tokens after tree")
    return tree


def is_well_formed(tree: ParseTree, grammar: Grammar | None = None) -> bool:
    """True when every internal node expands by a production of ``grammar``."""
    grammar = grammar or default_grammar()
    prods = set(grammar.productions)
    for node in tree.walk():
        if node.is_leaf:
            if isinstance(node.node, str):
                return False
            continue
        prod = Production(node.node, tuple(c.node for c in node.children))
        if prod not in prods:
            return False
    return True


@dataclass(frozen=True)
class ParseResult:
    trees_found: int
    canonical: ParseTree | None
    bound: int = DEFAULT_PARSE_BOUND
    exact_count: int = 0

    @property
    def saturated(self) -> bool:
        """True when the count hit the bound (report as ">= bound")."""
        return self.exact_count >= self.bound

    @property
    def ambiguous(self) -> bool:
        return self.trees_found > 1

    def count_label(self) -> str:
        return f">={self.bound}" if self.saturated else str(self.trees_found)


def parse_bound_from_env() -> int:
    raw = os.environ.get("TONALIS_PARSE_BOUND")
    if not raw:
        return DEFAULT_PARSE_BOUND
    bound = int(raw)
    if bound < 1:
        raise ValueError("TONALIS_PARSE_BOUND must be positive")
    return bound


class _Chart:
    """Derivation counts for every (symbol, span) and rhs suffix."""

    def __init__(self, grammar: Grammar, tokens: Sequence[Numeral]):
        self.grammar = grammar
        self.tokens = tuple(tokens)
        self._sym: dict = {}
        self._seq: dict = {}

    def count(self, sym: Symbol, i: int, j: int) -> int:
        if not isinstance(sym, str):
            return 1 if j == i + 1 and self.tokens[i] == sym else 0
        key = (sym, i, j)
        cached = self._sym.get(key)
        if cached is None:
            cached = sum(self.count_rhs(p.rhs, 0, i, j) for p in self.grammar.by_lhs.get(sym, ()))
            self._sym[key] = cached
        return cached

    def count_rhs(self, rhs: tuple, pos: int, i: int, j: int) -> int:
        remaining = len(rhs) - pos
        if remaining == 1:
            return self.count(rhs[pos], i, j)
        if j - i < remaining:
            return 0
        key = (rhs, pos, i, j)
        cached = self._seq.get(key)
        if cached is None:
            cached = 0
            for k in range(i + 1, j - remaining + 2):
                left = self.count(rhs[pos], i, k)
                if left:
                    cached += left * self.count_rhs(rhs, pos + 1, k, j)
            self._seq[key] = cached
        return cached

    def best(self, sym: Symbol, i: int, j: int) -> ParseTree:
        """Canonical tree: first-listed production, then longest first child."""
        if not isinstance(sym, str):
            return ParseTree(sym)
        for prod in self.grammar.by_lhs[sym]:
            if self.count_rhs(prod.rhs, 0, i, j):
                return ParseTree(sym, tuple(self._best_rhs(prod.rhs, 0, i, j)))
        raise AssertionError(f"no derivation of {sym} over {i}:{j}")

    def _best_rhs(self, rhs: tuple, pos: int, i: int, j: int) -> list[ParseTree]:
        if pos == len(rhs) - 1:
            return [self.best(rhs[pos], i, j)]
        remaining = len(rhs) - pos
        for k in range(j - remaining + 1, i, -1):
            if self.count(rhs[pos], i, k) and self.count_rhs(rhs, pos + 1, k, j):
                return [self.best(rhs[pos], i, k)] + self._best_rhs(rhs, pos + 1, k, j)
        raise AssertionError("inconsistent chart")


def count_trees(terminals: Sequence[Numeral], grammar: Grammar | None = None) -> int:
    """Exact number of distinct parse trees (0 when rejected)."""
    grammar = grammar or default_grammar()
    if not terminals:
        return 0
    return _Chart(grammar, terminals).count(grammar.start, 0, len(terminals))


def viable_prefix_length(terminals: Sequence[Numeral], grammar: Grammar | None = None) -> int:
    """Longest k such that ``terminals[:k]`` starts some sentence (Earley)."""
    grammar = grammar or default_grammar()
    tokens = list(terminals)
    # item: (production, dot, origin)
    start_items = {(p, 0, 0) for p in grammar.by_lhs[grammar.start]}
    sets = [set() for _ in range(len(tokens) + 1)]
    sets[0] = _closure(grammar, start_items, sets, 0)
    furthest = 0
    for k, tok in enumerate(tokens):
        scanned = {
            (p, dot + 1, origin)
            for p, dot, origin in sets[k]
            if dot < len(p.rhs) and p.rhs[dot] == tok
        }
        if not scanned:
            break
        sets[k + 1] = _closure(grammar, scanned, sets, k + 1)
        furthest = k + 1
    return furthest


def _closure(grammar: Grammar, seed, sets, k):
    items = set(seed)
    agenda = list(seed)
    while agenda:
        prod, dot, origin = agenda.pop()
        if dot < len(prod.rhs):
            nxt = prod.rhs[dot]
            if isinstance(nxt, str):
                for p in grammar.by_lhs.get(nxt, ()):
                    item = (p, 0, k)
                    if item not in items:
                        items.add(item)
                        agenda.append(item)
        else:
            # no empty rules, so origin < k and sets[origin] is complete
            for p2, d2, o2 in list(sets[origin] if origin != k else items):
                if d2 < len(p2.rhs) and p2.rhs[d2] == prod.lhs:
                    item = (p2, d2 + 1, o2)
                    if item not in items:
                        items.add(item)
                        agenda.append(item)
    return items


def parse(
    terminals: Sequence[Numeral],
    grammar: Grammar | None = None,
    bound: int | None = None,
) -> ParseResult:
    """Parse a numeral sequence from the start symbol.

    Raises :class:`EmptyInput` for an empty sequence and :class:`NoParse`
    (with the viable-prefix length) when the sequence is not in the language.
    """
    grammar = grammar or default_grammar()
    bound = parse_bound_from_env() if bound is None else bound
    if not terminals:
        raise EmptyInput()
    chart = _Chart(grammar, terminals)
    n = len(terminals)
    total = chart.count(grammar.start, 0, n)
    if total == 0:
        raise NoParse(viable_prefix_length(terminals, grammar), n)
    return ParseResult(
        trees_found=min(total, bound),
        canonical=chart.best(grammar.start, 0, n),
        bound=bound,
        exact_count=total,
    )


def to_dot(tree: ParseTree, name: str = "tree", leaf_labels: Sequence[str] | None = None) -> str:
    """Graphviz digraph, one node per tree node.

    ``leaf_labels`` optionally overrides the label of each leaf, in yield
    order (used to annotate chord indices).
    """
    lines = [f'digraph "{name}" {{', "  node [shape=plaintext];"]
    counter = 0
    leaf_no = 0

    def emit(node: ParseTree) -> str:
        nonlocal counter, leaf_no
        ident = f"n{counter}"
        counter += 1
        label = str(node.node)
        if node.is_leaf and leaf_labels is not None:
            label = leaf_labels[leaf_no]
            leaf_no += 1
        lines.append(f'  {ident} [label="{label}"];')
        for child in node.children:
            lines.append(f"  {ident} -> {emit(child)};")
        return ident

    emit(tree)
    lines.append("}")
    return "\n".join(lines) + "\n"

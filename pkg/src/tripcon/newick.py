"""Parsing and serialization for the Newick subset used by this package.

Grammar
-------
    tree    := subtree ';'
    subtree := label | '(' subtree ',' subtree ')' [':' number]
    label   := run of [A-Za-z0-9_.|-] | single-quoted string ('' escapes ')

Branch lengths and bracketed comments ``[...]`` are accepted and dropped.
Internal node labels are rejected.  Whitespace is insignificant outside
quotes.  The parser and serializer are iterative, so arbitrarily deep
(caterpillar) trees are fine.
"""

from .errors import (
    DuplicateLabelError,
    EmptyTreeError,
    NewickSyntaxError,
    NonBinaryError,
    TaxonMismatchError,
)
from .tree import TaxonSet, Tree

_BARE_LABEL_CHARS = frozenset(
    "ABCDEFGHIJKLMNOPQRSTUVWXYZabcdefghijklmnopqrstuvwxyz0123456789_.|-"
)


class _Scanner:
    def __init__(self, text):
        self.text = text
        self.pos = 0
        self.n = len(text)

    def error(self, message, pos=None):
        raise NewickSyntaxError(message, self.pos if pos is None else pos)

    def skip_filler(self):
        """Skip whitespace and bracketed comments."""
        text, n = self.text, self.n
        i = self.pos
        while i < n:
            c = text[i]
            if c.isspace():
                i += 1
            elif c == "[":
                end = text.find("]", i + 1)
                if end < 0:
                    self.pos = i
                    self.error("unterminated comment")
                i = end + 1
            else:
                break
        self.pos = i

    def peek(self):
        return self.text[self.pos] if self.pos < self.n else ""

    def take_label(self):
        text, n = self.text, self.n
        i = self.pos
        if i < n and text[i] == "'":
            parts = []
            i += 1
            while True:
                if i >= n:
                    self.error("unterminated quoted label", self.pos)
                c = text[i]
                if c == "'":
                    if i + 1 < n and text[i + 1] == "'":
                        parts.append("'")
                        i += 2
                        continue
                    i += 1
                    break
                parts.append(c)
                i += 1
            self.pos = i
            label = "".join(parts)
            if not label:
                self.error("empty quoted label", self.pos)
            return label
        j = i
        while j < n and text[j] in _BARE_LABEL_CHARS:
            j += 1
        if j == i:
            self.error(f"expected a label, found {text[i]!r}" if i < n else
                       "expected a label, found end of input")
        self.pos = j
        return text[i:j]

    def skip_branch_length(self):
        """Consume an optional ':number' suffix."""
        self.skip_filler()
        if self.peek() != ":":
            return
        self.pos += 1
        self.skip_filler()
        start = self.pos
        j = start
        text, n = self.text, self.n
        while j < n and (text[j].isdigit() or text[j] in "+-.eE"):
            j += 1
        if j == start:
            self.error("expected a branch length after ':'")
        try:
            float(text[start:j])
        except ValueError:
            self.error(f"invalid branch length {text[start:j]!r}", start)
        self.pos = j


def parse_newick(text, taxa=None):
    """Parse one Newick statement into ``(Tree, TaxonSet)``.

    With ``taxa`` given (the interner from a previously parsed tree), the
    new tree must use exactly the same label set; any unknown or missing
    label raises TaxonMismatchError.  Duplicate labels raise
    DuplicateLabelError; more (or fewer) than two children raise
    NonBinaryError; structural problems raise NewickSyntaxError with the
    offending position.
    """
    sc = _Scanner(text)
    sc.skip_filler()
    if sc.pos >= sc.n or sc.peek() == ";":
        raise EmptyTreeError("no tree in input")

    left, right, taxon, labels = [], [], [], []

    def new_node():
        left.append(-1)
        right.append(-1)
        taxon.append(-1)
        return len(left) - 1

    done = []  # ids of finished subtrees
    # Work items: "subtree" parses one subtree at the cursor;
    # ("close", pos) reduces the two newest subtrees into one node.
    work = ["subtree"]
    while work:
        item = work.pop()
        if item == "subtree":
            sc.skip_filler()
            c = sc.peek()
            if c == "(":
                open_pos = sc.pos
                sc.pos += 1
                work.append(("close", open_pos))
                work.append("comma")
                work.append("subtree")
            elif c == ")" or c == ",":
                sc.error(f"expected a subtree, found {c!r}")
            elif c == "":
                sc.error("unexpected end of input")
            else:
                label_pos = sc.pos
                label = sc.take_label()
                v = new_node()
                taxon[v] = len(labels)
                labels.append((label, label_pos))
                done.append(v)
                sc.skip_branch_length()
        elif item == "comma":
            sc.skip_filler()
            if sc.peek() != ",":
                sc.error("expected ',' (every internal node has two children)")
            sc.pos += 1
            work.append("subtree")
        else:  # ("close", open_pos)
            sc.skip_filler()
            c = sc.peek()
            if c == ",":
                raise NonBinaryError(
                    f"more than two children in the group opened at "
                    f"position {item[1]}"
                )
            if c != ")":
                sc.error("expected ')'")
            sc.pos += 1
            sc.skip_filler()
            c = sc.peek()
            if c and (c in _BARE_LABEL_CHARS or c == "'"):
                sc.error("internal node labels are not supported")
            sc.skip_branch_length()
            rid = done.pop()
            lid = done.pop()
            v = new_node()
            left[v] = lid
            right[v] = rid
            done.append(v)

    sc.skip_filler()
    if sc.peek() != ";":
        sc.error("expected ';' at the end of the tree")
    sc.pos += 1
    sc.skip_filler()
    if sc.pos < sc.n:
        sc.error("trailing characters after ';'")

    root = done[0]
    seen = {}
    for label, pos in labels:
        if label in seen:
            raise DuplicateLabelError(
                f"duplicate leaf label {label!r} (positions {seen[label]} and {pos})"
            )
        seen[label] = pos

    if taxa is None:
        taxa = TaxonSet(label for label, _ in labels)
        return Tree._from_structure(left, right, taxon, root, taxa), taxa

    index = taxa.index
    if len(labels) != len(taxa):
        raise TaxonMismatchError(
            f"tree has {len(labels)} taxa, expected {len(taxa)}"
        )
    for v in range(len(taxon)):
        if taxon[v] >= 0:
            label, pos = labels[taxon[v]]
            if label not in index:
                raise TaxonMismatchError(
                    f"label {label!r} (position {pos}) not in the shared taxon set"
                )
            taxon[v] = index[label]
    return Tree._from_structure(left, right, taxon, root, taxa), taxa


def _format_label(name):
    if name and all(c in _BARE_LABEL_CHARS for c in name):
        return name
    return "'" + name.replace("'", "''") + "'"


def serialize_newick(t, taxa=None):
    """Serialize ``t`` back to Newick, children in stored order.

    Round-trip contract: ``parse_newick(serialize_newick(t))`` is
    label-isomorphic to ``t``.
    """
    taxa = taxa if taxa is not None else t.taxa
    out = []
    stack = [("n", t.root)]
    while stack:
        kind, x = stack.pop()
        if kind == "t":
            out.append(x)
            continue
        v = x
        if t.left[v] < 0:
            out.append(_format_label(taxa.name_of(t.taxon[v])))
        else:
            stack.append(("t", ")"))
            stack.append(("n", t.right[v]))
            stack.append(("t", ","))
            stack.append(("n", t.left[v]))
            out.append("(")
    out.append(";")
    return "".join(out)

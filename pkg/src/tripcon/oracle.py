"""Ground truth: triple resolution, the conflict test, and the cubic
brute-force enumerator used to verify the fast algorithm.

None of this shares code with the output-sensitive enumerator beyond the
tree arenas and the LCA index, so it stays an independent check.  In a
binary tree every triple {a, b, c} has exactly one "bias pair": the pair
whose LCA is strictly below the LCA of all three (the other two pairwise
LCAs coincide with it).  A triple is a conflict of (P, Q) when its bias
pair differs between the trees.
"""

import enum
from itertools import combinations
from typing import NamedTuple

from .errors import NonDistinctTaxaError, TaxonMismatchError
from .lca import build_lca_index

# Above this taxa count the brute force switches from the O(n^2) pairwise
# LCA-depth table to per-triple queries (slower, but no quadratic memory).
_PAIR_TABLE_LIMIT = 1024


class ResolutionKind(enum.IntEnum):
    """Which pair of the ascending triple (a < b < c) is the bias pair."""

    AB_C = 0
    AC_B = 1
    BC_A = 2


class Resolution(NamedTuple):
    kind: ResolutionKind
    a: int
    b: int
    c: int


class ConflictTriple(NamedTuple):
    """Canonical conflict: taxon ids with a < b < c."""

    a: int
    b: int
    c: int


def resolve_triple(t, idx, a, b, c):
    """Resolution of taxa {a, b, c} in ``t`` via two-or-three LCA queries."""
    if a == b or a == c or b == c:
        raise NonDistinctTaxaError(f"taxa must be distinct, got {(a, b, c)}")
    a, b, c = sorted((a, b, c))
    leaf = t.leaf_of_taxon
    la, lb, lc = leaf[a], leaf[b], leaf[c]
    ab = idx.lca(la, lb)
    ac = idx.lca(la, lc)
    if ab == ac:
        kind = ResolutionKind.BC_A
    else:
        bc = idx.lca(lb, lc)
        kind = ResolutionKind.AC_B if ab == bc else ResolutionKind.AB_C
    if __debug__:
        top = idx.lca(ab, lc)
        lcas = (ab, ac, idx.lca(lb, lc))
        assert sum(1 for x in lcas if x == top) == 2, "triple LCA structure broken"
        assert lcas[kind] != top
    return Resolution(kind, a, b, c)


def is_conflict(p, q, idx_p, idx_q, a, b, c):
    """True iff the triple resolves differently in the two trees."""
    return resolve_triple(p, idx_p, a, b, c).kind != resolve_triple(q, idx_q, a, b, c).kind


def triple_resolutions(t, idx=None):
    """Bias codes for every ascending triple, in lexicographic order.

    The returned list has one :class:`ResolutionKind` value (as an int) per
    element of ``itertools.combinations(sorted(taxa), 3)``.  This is the
    tree's complete "triplet signature"; two trees conflict exactly on the
    positions where their signatures differ.
    """
    if idx is None:
        idx = build_lca_index(t)
    taxa = sorted(t.leaf_of_taxon)
    n = len(taxa)
    out = []
    if n < 3:
        return out
    leaf = t.leaf_of_taxon
    depth = t.depth
    qlca = idx.lca

    if n <= _PAIR_TABLE_LIMIT:
        leaves = [leaf[x] for x in taxa]
        pd = [0] * (n * n)
        for i in range(n):
            li = leaves[i]
            row = i * n
            for j in range(i + 1, n):
                pd[row + j] = depth[qlca(li, leaves[j])]
        for i in range(n - 2):
            row_i = i * n
            for j in range(i + 1, n - 1):
                d_ij = pd[row_i + j]
                row_j = j * n
                for k in range(j + 1, n):
                    d_ik = pd[row_i + k]
                    d_jk = pd[row_j + k]
                    # exactly one pairwise LCA is strictly deepest
                    if d_ij > d_ik:
                        out.append(0)
                    elif d_ik > d_jk:
                        out.append(1)
                    elif d_jk > d_ij:
                        out.append(2)
                    else:  # d_ij == d_ik == d_jk cannot happen in a binary tree
                        raise AssertionError("unresolved triple in a binary tree")
        return out

    for ta, tb, tc in combinations(taxa, 3):
        d_ab = depth[qlca(leaf[ta], leaf[tb])]
        d_ac = depth[qlca(leaf[ta], leaf[tc])]
        d_bc = depth[qlca(leaf[tb], leaf[tc])]
        out.append(0 if d_ab > d_ac else (1 if d_ac > d_bc else 2))
    return out


def enumerate_bruteforce(p, q):
    """All conflicts of (P, Q) as a set of canonical triples, in Theta(n^3)."""
    if p.taxa != q.taxa or p.leaf_of_taxon.keys() != q.leaf_of_taxon.keys():
        raise TaxonMismatchError("trees do not carry the same leaf taxa")
    sig_p = triple_resolutions(p)
    sig_q = triple_resolutions(q)
    taxa = sorted(p.leaf_of_taxon)
    out = set()
    pos = 0
    for trip in combinations(taxa, 3):
        if sig_p[pos] != sig_q[pos]:
            out.add(ConflictTriple(*trip))
        pos += 1
    return out

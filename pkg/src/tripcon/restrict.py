"""Subtree of a tree induced by an ordered leaf subset, in O(|Z|).

The construction is the classic stack sweep: the internal nodes of the
result are exactly the LCAs of consecutive members of Z, and comparing
their depths in the original tree (all comparisons happen between nodes
on one root-to-leaf path, where depths are strictly increasing) settles
every attachment.  Child order follows Z, so the result's leaf post-order
is Z itself.
"""

from .errors import EmptySubsetError, UnorderedInputError
from .tree import Tree


class RestrictedTree:
    """An induced subtree plus the map from its nodes back to the host tree.

    ``tree`` is a standalone :class:`Tree` on the leaf subset (leaves keep
    their original taxon ids); ``origin_map[v]`` is the host-tree node that
    new node ``v`` contracts to (the leaf itself, or the LCA the internal
    node came from).
    """

    __slots__ = ("tree", "origin_map")

    def __init__(self, tree, origin_map):
        self.tree = tree
        self.origin_map = origin_map


def induced_subtree(t, idx, z):
    """Restrict ``t`` to the leaves ``z`` (node ids in t's post-order).

    Requires ``idx`` to be an LCA index for ``t``.  Raises EmptySubsetError
    for empty ``z`` and UnorderedInputError if ``z`` is not strictly
    increasing in post-order or contains a non-leaf.
    """
    k = len(z)
    if k == 0:
        raise EmptySubsetError("cannot restrict to zero leaves")
    post = t.post
    tleft = t.left
    prev = -1
    for v in z:
        if tleft[v] >= 0:
            raise UnorderedInputError(f"node {v} is not a leaf")
        if post[v] <= prev:
            raise UnorderedInputError("leaves are not in strict post-order")
        prev = post[v]

    ttaxon = t.taxon
    if k == 1:
        v = z[0]
        tree = Tree._from_structure([-1], [-1], [ttaxon[v]], 0, t.taxa,
                                    full=len(t.taxa) == 1)
        return RestrictedTree(tree, [v])

    tdepth = t.depth
    nn = 2 * k - 1
    left = [-1] * nn
    right = [-1] * nn
    taxon = [-1] * nn
    origin = [0] * nn
    odepth = [0] * nn
    nid = 0

    def new_node(orig):
        nonlocal nid
        v = nid
        nid += 1
        origin[v] = orig
        odepth[v] = tdepth[orig]
        return v

    leaf0 = new_node(z[0])
    taxon[leaf0] = ttaxon[z[0]]
    stack = [leaf0]
    for i in range(1, k):
        bnd = idx.lca(z[i - 1], z[i])
        bd = tdepth[bnd]
        top = stack.pop()
        while stack and odepth[stack[-1]] > bd:
            nxt = stack.pop()
            right[nxt] = top
            top = nxt
        inner = new_node(bnd)
        left[inner] = top
        stack.append(inner)
        leaf = new_node(z[i])
        taxon[leaf] = ttaxon[z[i]]
        stack.append(leaf)

    top = stack.pop()
    while stack:
        nxt = stack.pop()
        right[nxt] = top
        top = nxt

    tree = Tree._from_structure(left, right, taxon, top, t.taxa,
                                full=k == len(t.taxa))
    return RestrictedTree(tree, origin)

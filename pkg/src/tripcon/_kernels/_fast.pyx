# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Compiled enumeration kernel.

Twin of ``tripcon._kernels.pure``: same recursion, same emission order,
same work-counter arithmetic (the cross-backend tests pin all three).
Everything lives in flat int arrays; per-tree structures are rebuilt here
rather than imported from the Python modules so the hot path never leaves
C.  See ``tripcon.enumeration`` for the algorithm and counter contract.
"""

from cpython cimport array
import array as _pyarray

cdef array.array _ITPL = _pyarray.array('i', [])
cdef array.array _BTPL = _pyarray.array('b', [])


cdef array.array _ints(Py_ssize_t n):
    return array.clone(_ITPL, n, False)


cdef array.array _zints(Py_ssize_t n):
    return array.clone(_ITPL, n, True)


# ====================================================================== #
# Per-tree structure: arena + post-order data + Euler tour + +-1 RMQ     #
# ====================================================================== #

cdef class _Side:
    cdef array.array a_left, a_right, a_taxon
    cdef array.array a_post, a_lc, a_lb, a_depth, a_popo, a_leaves
    cdef array.array a_tour, a_tdep, a_fo
    cdef array.array a_bminpos, a_bminval, a_pat, a_lg, a_st, a_tbl, a_tflag
    cdef int* left
    cdef int* right
    cdef int* taxon
    cdef int* post
    cdef int* lc
    cdef int* lb
    cdef int* depth
    cdef int* popo
    cdef int* leaves
    cdef int* tour
    cdef int* tdep
    cdef int* fo
    cdef int* bminpos
    cdef int* bminval
    cdef int* pat
    cdef int* lg
    cdef int* st
    cdef int* tbl
    cdef signed char* tflag
    cdef int m, root, nl, tlen, b, nb


cdef _Side _side_alloc(int m):
    cdef _Side s = _Side.__new__(_Side)
    s.m = m
    s.a_left = _ints(m)
    s.a_right = _ints(m)
    s.a_taxon = _ints(m)
    s.left = s.a_left.data.as_ints
    s.right = s.a_right.data.as_ints
    s.taxon = s.a_taxon.data.as_ints
    return s


cdef int _side_finish(_Side s) except -1:
    """Derive post-order data, the Euler tour, and the RMQ structures."""
    cdef int m = s.m
    cdef int nl = (m + 1) // 2
    cdef array.array a_stk
    cdef int* stk
    cdef int sp, npost, nleaf, x, v, lcn, rcn, tlen, tpos, ph

    s.nl = nl
    s.a_post = _ints(m)
    s.a_lc = _ints(m)
    s.a_lb = _ints(m)
    s.a_depth = _ints(m)
    s.a_popo = _ints(m)
    s.a_leaves = _ints(nl)
    s.post = s.a_post.data.as_ints
    s.lc = s.a_lc.data.as_ints
    s.lb = s.a_lb.data.as_ints
    s.depth = s.a_depth.data.as_ints
    s.popo = s.a_popo.data.as_ints
    s.leaves = s.a_leaves.data.as_ints

    a_stk = _ints(2 * m + 4)
    stk = a_stk.data.as_ints
    sp = 0
    npost = 0
    nleaf = 0

    s.depth[s.root] = 0
    stk[sp] = s.root << 1
    sp += 1
    while sp:
        sp -= 1
        x = stk[sp]
        v = x >> 1
        if x & 1:
            lcn = s.left[v]
            rcn = s.right[v]
            s.lc[v] = s.lc[lcn] + s.lc[rcn]
            s.post[v] = npost
            s.popo[npost] = v
            npost += 1
            continue
        s.lb[v] = nleaf
        lcn = s.left[v]
        if lcn < 0:
            s.lc[v] = 1
            s.post[v] = npost
            s.popo[npost] = v
            npost += 1
            s.leaves[nleaf] = v
            nleaf += 1
        else:
            rcn = s.right[v]
            s.depth[lcn] = s.depth[v] + 1
            s.depth[rcn] = s.depth[v] + 1
            stk[sp] = (v << 1) | 1
            stk[sp + 1] = rcn << 1
            stk[sp + 2] = lcn << 1
            sp += 3

    # Euler tour: internal nodes appear 3x, leaves once; length 2m - 1.
    tlen = 2 * m - 1
    s.tlen = tlen
    s.a_tour = _ints(tlen)
    s.a_tdep = _ints(tlen)
    s.a_fo = _ints(m)
    s.tour = s.a_tour.data.as_ints
    s.tdep = s.a_tdep.data.as_ints
    s.fo = s.a_fo.data.as_ints

    tpos = 0
    stk[0] = s.root << 2
    sp = 1
    while sp:
        sp -= 1
        x = stk[sp]
        v = x >> 2
        ph = x & 3
        if ph == 0:
            s.fo[v] = tpos
        s.tour[tpos] = v
        s.tdep[tpos] = s.depth[v]
        tpos += 1
        if s.left[v] >= 0:
            if ph == 0:
                stk[sp] = (v << 2) | 1
                stk[sp + 1] = s.left[v] << 2
                sp += 2
            elif ph == 1:
                stk[sp] = (v << 2) | 2
                stk[sp + 1] = s.right[v] << 2
                sp += 2

    _rmq_build(s)
    return 0


cdef int _rmq_build(_Side s) except -1:
    cdef int n = s.tlen
    cdef int bl = 0
    cdef int t = n
    cdef int b, nb, npat, j, start, end, best, bv, p, i
    cdef int levels, k, half, width, a, c
    cdef int* d

    while t:
        bl += 1
        t >>= 1
    b = (bl - 1) // 2
    if b < 1:
        b = 1
    nb = (n + b - 1) // b
    s.b = b
    s.nb = nb

    s.a_bminpos = _ints(nb)
    s.a_bminval = _ints(nb)
    s.a_pat = _ints(nb)
    s.bminpos = s.a_bminpos.data.as_ints
    s.bminval = s.a_bminval.data.as_ints
    s.pat = s.a_pat.data.as_ints

    npat = 1 << (b - 1)
    s.a_tbl = _ints((<Py_ssize_t> npat) * b * b)
    s.a_tflag = array.clone(_BTPL, npat, True)
    s.tbl = s.a_tbl.data.as_ints
    s.tflag = s.a_tflag.data.as_schars

    d = s.tdep
    for j in range(nb):
        start = j * b
        end = start + b
        if end > n:
            end = n
        best = start
        bv = d[start]
        p = 0
        for i in range(start + 1, end):
            if d[i] < bv:
                best = i
                bv = d[i]
            if d[i] > d[i - 1]:
                p |= 1 << (i - start - 1)
        s.bminpos[j] = best
        s.bminval[j] = bv
        s.pat[j] = p
        if not s.tflag[p]:
            _build_pattern_table(s, p, b)
            s.tflag[p] = 1

    s.a_lg = _zints(nb + 1)
    s.lg = s.a_lg.data.as_ints
    for i in range(2, nb + 1):
        s.lg[i] = s.lg[i >> 1] + 1

    levels = s.lg[nb] + 1
    s.a_st = _ints((<Py_ssize_t> levels) * nb)
    s.st = s.a_st.data.as_ints
    for j in range(nb):
        s.st[j] = j
    for k in range(1, levels):
        half = 1 << (k - 1)
        width = nb - (1 << k) + 1
        for i in range(width):
            a = s.st[(k - 1) * nb + i]
            c = s.st[(k - 1) * nb + i + half]
            s.st[k * nb + i] = a if s.bminval[a] <= s.bminval[c] else c
        for i in range(width if width > 0 else 0, nb):
            s.st[k * nb + i] = s.st[(k - 1) * nb + i]
    return 0


cdef void _build_pattern_table(_Side s, int p, int b) noexcept:
    cdef int val[64]
    cdef int i, j, best, bv
    cdef int* row
    val[0] = 0
    for i in range(1, b):
        val[i] = val[i - 1] + (1 if p & (1 << (i - 1)) else -1)
    row = s.tbl + (<Py_ssize_t> p) * b * b
    for i in range(b):
        best = i
        bv = val[i]
        for j in range(i, b):
            if val[j] < bv:
                best = j
                bv = val[j]
            row[i * b + j] = best


cdef inline int _inblock(_Side s, int blk, int oi, int oj) noexcept:
    cdef int b = s.b
    return blk * b + s.tbl[(<Py_ssize_t> s.pat[blk]) * b * b + oi * b + oj]


cdef inline int _rmq(_Side s, int l, int r) noexcept:
    cdef int b = s.b
    cdef int bl = l / b
    cdef int br = r / b
    cdef int p1, p2, best, lo, hi, k, a, c, jb, pm
    if bl == br:
        return _inblock(s, bl, l - bl * b, r - bl * b)
    p1 = _inblock(s, bl, l - bl * b, b - 1)
    p2 = _inblock(s, br, 0, r - br * b)
    best = p1 if s.tdep[p1] <= s.tdep[p2] else p2
    lo = bl + 1
    hi = br - 1
    if lo <= hi:
        k = s.lg[hi - lo + 1]
        a = s.st[k * s.nb + lo]
        c = s.st[k * s.nb + hi - (1 << k) + 1]
        jb = a if s.bminval[a] <= s.bminval[c] else c
        pm = s.bminpos[jb]
        if s.tdep[pm] < s.tdep[best]:
            best = pm
    return best


cdef inline int _lca(_Side s, int u, int v) noexcept:
    cdef int lo = s.fo[u]
    cdef int hi = s.fo[v]
    if lo > hi:
        lo, hi = hi, lo
    return s.tour[_rmq(s, lo, hi)]


cdef inline bint _is_below(_Side s, int anc, int node) noexcept:
    cdef int hi = s.post[anc]
    return hi - (2 * s.lc[anc] - 1) < s.post[node] <= hi


cdef _Side _side_from_leaflist(_Side parent, int* z, int k):
    """Induced subtree over k >= 2 post-ordered leaves (stack sweep)."""
    cdef _Side s = _side_alloc(2 * k - 1)
    cdef array.array a_odep = _ints(2 * k - 1)
    cdef array.array a_stk = _ints(2 * k + 2)
    cdef int* odep = a_odep.data.as_ints
    cdef int* stk = a_stk.data.as_ints
    cdef int sp, nid, i, bnd, bd, top, nxt, inner, leaf

    s.left[0] = -1
    s.right[0] = -1
    s.taxon[0] = parent.taxon[z[0]]
    odep[0] = parent.depth[z[0]]
    nid = 1
    stk[0] = 0
    sp = 1
    for i in range(1, k):
        bnd = _lca(parent, z[i - 1], z[i])
        bd = parent.depth[bnd]
        sp -= 1
        top = stk[sp]
        while sp and odep[stk[sp - 1]] > bd:
            sp -= 1
            nxt = stk[sp]
            s.right[nxt] = top
            top = nxt
        inner = nid
        nid += 1
        odep[inner] = bd
        s.left[inner] = top
        s.right[inner] = -1
        s.taxon[inner] = -1
        stk[sp] = inner
        sp += 1
        leaf = nid
        nid += 1
        s.left[leaf] = -1
        s.right[leaf] = -1
        s.taxon[leaf] = parent.taxon[z[i]]
        odep[leaf] = parent.depth[z[i]]
        stk[sp] = leaf
        sp += 1
    sp -= 1
    top = stk[sp]
    while sp:
        sp -= 1
        nxt = stk[sp]
        s.right[nxt] = top
        top = nxt
    s.root = top
    _side_finish(s)
    return s


cdef _Side _side_from_lists(list left, list right, list taxon, int root):
    cdef array.array al = _pyarray.array('i', left)
    cdef array.array ar = _pyarray.array('i', right)
    cdef array.array at = _pyarray.array('i', taxon)
    cdef _Side s = _Side.__new__(_Side)
    s.m = <int> len(al)
    s.a_left = al
    s.a_right = ar
    s.a_taxon = at
    s.left = al.data.as_ints
    s.right = ar.data.as_ints
    s.taxon = at.data.as_ints
    s.root = root
    _side_finish(s)
    return s


# ====================================================================== #
# Owned tree pair (a recursion context)                                  #
# ====================================================================== #

cdef class _Ctx:
    cdef _Side p
    cdef _Side q
    cdef array.array a_m
    cdef int* m


cdef _Ctx _ctx_make(_Side p, _Side q, int* qleaf_scratch):
    """Bundle a tree pair with its leaf-set-equivalence map."""
    cdef _Ctx c = _Ctx.__new__(_Ctx)
    cdef int i, v
    c.p = p
    c.q = q
    c.a_m = _ints(p.m)
    c.m = c.a_m.data.as_ints
    for i in range(p.m):
        v = p.popo[i]
        if p.left[v] < 0:
            c.m[v] = qleaf_scratch[p.taxon[v]]
        else:
            c.m[v] = _lca(q, c.m[p.left[v]], c.m[p.right[v]])
    return c


cdef void _write_scratch(_Side s, int* scratch) noexcept:
    cdef int r
    for r in range(s.nl):
        scratch[s.taxon[s.leaves[r]]] = s.leaves[r]


# ====================================================================== #
# The run                                                                #
# ====================================================================== #

cdef class _Run:
    cdef bint store
    cdef long long work
    cdef long long frames
    cdef long long violations
    cdef long long emitted
    # output triples (flat) and per-frame d_r, logically sized
    cdef array.array a_tri, a_dr
    cdef int* tri
    cdef Py_ssize_t tri_len, tri_cap
    cdef int* dr
    cdef Py_ssize_t dr_len, dr_cap
    # frame stack (ci, rp, rq per frame)
    cdef array.array a_fs
    cdef int* fs
    cdef Py_ssize_t fs_len, fs_cap
    # universe-sized taxon -> current leaf scratch
    cdef array.array a_pleaf, a_qleaf
    cdef int* pleaf
    cdef int* qleaf
    # partition buffers (8 of size u) and their fills
    cdef array.array a_part
    cdef int* part
    cdef int pn[8]
    # LSC scratch
    cdef array.array a_zlca, a_ztax, a_zpost, a_par, a_plo, a_phi, a_podep, a_pstk
    cdef int* zlca
    cdef int* ztax
    cdef int* zpost
    cdef int* par
    cdef int* plo
    cdef int* phi
    cdef int* podep
    cdef int* pstk
    cdef list ctxs

    def __cinit__(self, int universe, bint store):
        cdef Py_ssize_t u = universe if universe > 0 else 1
        self.store = store
        self.work = 0
        self.frames = 0
        self.violations = 0
        self.emitted = 0
        self.tri_cap = 1024
        self.a_tri = _ints(self.tri_cap)
        self.tri = self.a_tri.data.as_ints
        self.tri_len = 0
        self.dr_cap = 1024
        self.a_dr = _ints(self.dr_cap)
        self.dr = self.a_dr.data.as_ints
        self.dr_len = 0
        self.fs_cap = 3 * 64
        self.a_fs = _ints(self.fs_cap)
        self.fs = self.a_fs.data.as_ints
        self.fs_len = 0
        self.a_pleaf = _ints(u)
        self.a_qleaf = _ints(u)
        self.pleaf = self.a_pleaf.data.as_ints
        self.qleaf = self.a_qleaf.data.as_ints
        self.a_part = _ints(8 * u)
        self.part = self.a_part.data.as_ints
        self.a_zlca = _ints(u + 2)
        self.a_ztax = _ints(u + 2)
        self.a_zpost = _ints(u + 2)
        self.a_par = _ints(2 * u + 4)
        self.a_plo = _ints(2 * u + 4)
        self.a_phi = _ints(2 * u + 4)
        self.a_podep = _ints(2 * u + 4)
        self.a_pstk = _ints(2 * u + 6)
        self.zlca = self.a_zlca.data.as_ints
        self.ztax = self.a_ztax.data.as_ints
        self.zpost = self.a_zpost.data.as_ints
        self.par = self.a_par.data.as_ints
        self.plo = self.a_plo.data.as_ints
        self.phi = self.a_phi.data.as_ints
        self.podep = self.a_podep.data.as_ints
        self.pstk = self.a_pstk.data.as_ints
        self.ctxs = []

    cdef int _push_frame(self, int ci, int rp, int rq) except -1:
        if self.fs_len + 3 > self.fs_cap:
            self.fs_cap *= 2
            array.resize(self.a_fs, self.fs_cap)
            self.fs = self.a_fs.data.as_ints
        self.fs[self.fs_len] = ci
        self.fs[self.fs_len + 1] = rp
        self.fs[self.fs_len + 2] = rq
        self.fs_len += 3
        return 0

    cdef int _push_dr(self, int v) except -1:
        if self.dr_len == self.dr_cap:
            self.dr_cap *= 2
            array.resize(self.a_dr, self.dr_cap)
            self.dr = self.a_dr.data.as_ints
        self.dr[self.dr_len] = v
        self.dr_len += 1
        return 0

    cdef int _emit(self, int a, int b, int c) except -1:
        """Append the canonical (ascending) form of taxa {a, b, c}."""
        cdef int t
        if a > b:
            t = a
            a = b
            b = t
        if b > c:
            t = b
            b = c
            c = t
            if a > b:
                t = a
                a = b
                b = t
        self.emitted += 1
        if not self.store:
            return 0
        if self.tri_len + 3 > self.tri_cap:
            self.tri_cap *= 2
            array.resize(self.a_tri, self.tri_cap)
            self.tri = self.a_tri.data.as_ints
        self.tri[self.tri_len] = a
        self.tri[self.tri_len + 1] = b
        self.tri[self.tri_len + 2] = c
        self.tri_len += 3
        return 0

    # ------------------------------------------------------------------ #
    # ListSubtreeConflicts: triples abc with a, b in Z, c a candidate,   #
    # and lca(a, b) = lca(a, b, c).  O(1) skip test per candidate; each  #
    # survivor repays its O(|Z|) restriction with >= |Z|-1 emissions.    #
    # ------------------------------------------------------------------ #
    cdef int _lsc(self, _Side t, int* z, int k, int* cand, int nc) except -1:
        cdef int i, l, rz, rd, hi, lo
        cdef int pos, ci, c, cp, ctax, kk, nid, sp
        cdef int j, bnd, bd, top, nxt, inner, leaf, c_node, cur_orig
        cdef int y, pr, ylo, yhi, slo, shi, ia, ib, ta, tb, rootn

        if k < 2 or nc == 0:
            return 0
        rz = z[0]
        rd = t.depth[rz]
        for i in range(1, k):
            l = _lca(t, z[i - 1], z[i])
            self.zlca[i - 1] = l
            if t.depth[l] < rd:
                rz = l
                rd = t.depth[l]
        for i in range(k):
            self.ztax[i] = t.taxon[z[i]]
            self.zpost[i] = t.post[z[i]]
        self.work += k

        hi = t.post[rz]
        lo = hi - (2 * t.lc[rz] - 1)

        pos = 0
        for ci in range(nc):
            c = cand[ci]
            cp = t.post[c]
            while pos < k and self.zpost[pos] < cp:
                pos += 1
            self.work += 1
            if not (lo < cp <= hi):
                continue

            # Build T' = T|_(Z + {c}); merged element j is z[j] for
            # j < pos, c at pos, z[j-1] after.
            self.work += k + 1
            ctax = t.taxon[c]
            kk = k + 1
            c_node = 0 if pos == 0 else -1
            self.par[0] = -1
            self.plo[0] = 0
            self.phi[0] = 1
            self.podep[0] = t.depth[c] if pos == 0 else t.depth[z[0]]
            nid = 1
            self.pstk[0] = 0
            sp = 1
            for j in range(1, kk):
                if j == pos:
                    bnd = _lca(t, z[j - 1], c)
                    cur_orig = c
                elif j == pos + 1:
                    bnd = _lca(t, c, z[j - 1])
                    cur_orig = z[j - 1]
                elif j < pos:
                    bnd = self.zlca[j - 1]
                    cur_orig = z[j]
                else:
                    bnd = self.zlca[j - 2]
                    cur_orig = z[j - 1]
                bd = t.depth[bnd]
                sp -= 1
                top = self.pstk[sp]
                while sp and self.podep[self.pstk[sp - 1]] > bd:
                    sp -= 1
                    nxt = self.pstk[sp]
                    self.par[top] = nxt
                    self.phi[nxt] = self.phi[top]
                    top = nxt
                inner = nid
                nid += 1
                self.podep[inner] = bd
                self.plo[inner] = self.plo[top]
                self.par[top] = inner
                self.pstk[sp] = inner
                sp += 1
                leaf = nid
                nid += 1
                self.podep[leaf] = t.depth[cur_orig]
                self.plo[leaf] = j
                self.phi[leaf] = j + 1
                if j == pos:
                    c_node = leaf
                self.pstk[sp] = leaf
                sp += 1
            sp -= 1
            top = self.pstk[sp]
            while sp:
                sp -= 1
                nxt = self.pstk[sp]
                self.par[top] = nxt
                self.phi[nxt] = self.phi[top]
                top = nxt
            self.par[top] = -1
            rootn = top

            # Walk from c's parent to the root; emit (below y) x (sibling).
            y = self.par[c_node]
            while y != rootn:
                self.work += 1
                pr = self.par[y]
                ylo = self.plo[y]
                yhi = self.phi[y]
                if self.plo[pr] < ylo:
                    slo = self.plo[pr]
                    shi = ylo
                else:
                    slo = yhi
                    shi = self.phi[pr]
                if not self.store:
                    self.emitted += <long long> (yhi - ylo - 1) * (shi - slo)
                    y = pr
                    continue
                for ia in range(ylo, yhi):
                    if ia == pos:
                        continue
                    ta = self.ztax[ia] if ia < pos else self.ztax[ia - 1]
                    for ib in range(slo, shi):
                        tb = self.ztax[ib] if ib < pos else self.ztax[ib - 1]
                        self._emit(ta, tb, ctax)
                y = pr
        return 0


def run_enumeration(list p_left, list p_right, list p_taxon, int p_root,
                    list q_left, list q_right, list q_taxon, int q_root,
                    int universe, bint store=True):
    """Enumerate conflicts; same contract and output as the pure kernel.

    With ``store`` false, triples are only counted, never materialized.
    Returns ``(flat_triples, emitted, frames_opened, nodes_touched,
    budget_violations, per_frame_dr)``.
    """
    cdef _Run run = _Run(universe, store)
    cdef _Side P0 = _side_from_lists(p_left, p_right, p_taxon, p_root)
    cdef _Side Q0 = _side_from_lists(q_left, q_right, q_taxon, q_root)
    cdef _Ctx top, ctx, child
    cdef _Side P, Q, cp_side, cq_side
    cdef int ci, rp, rq, up, vp, uq, vq, tswap
    cdef int base, end, r, leaf, nz, i, pi, x_p, x_q, other_p
    cdef int ai, bi, cri, ta2, tb2
    cdef long long before, d_r
    cdef int u = universe if universe > 0 else 1
    cdef int* bufs[8]
    # children staged per frame: ctx index and the two roots
    cdef int child_ci[4]
    cdef int child_rp[4]
    cdef int child_rq[4]
    cdef int spec_z[4]
    cdef int spec_zq[4]
    cdef int nchild

    for i in range(8):
        bufs[i] = run.part + i * u

    _write_scratch(P0, run.pleaf)
    _write_scratch(Q0, run.qleaf)
    top = _ctx_make(P0, Q0, run.qleaf)
    run.work += P0.m + Q0.m
    run.work += P0.tlen + Q0.tlen
    run.work += P0.m
    run.ctxs.append(top)
    run._push_frame(0, P0.root, Q0.root)

    # child order: com(u) pair, com(v) pair, unc(u_p,u_q) = unc(v_q,v_p),
    # unc(v_p,v_q) = unc(u_q,u_p); buffer layout per pair is
    # [com_p, unc_p, com_q, unc_q].
    spec_z[0] = 0
    spec_zq[0] = 2
    spec_z[1] = 4
    spec_zq[1] = 6
    spec_z[2] = 1
    spec_zq[2] = 7
    spec_z[3] = 5
    spec_zq[3] = 3

    while run.fs_len:
        run.fs_len -= 3
        ci = run.fs[run.fs_len]
        rp = run.fs[run.fs_len + 1]
        rq = run.fs[run.fs_len + 2]
        ctx = <_Ctx> run.ctxs[ci]
        P = ctx.p
        Q = ctx.q
        run.frames += 1
        run.work += 1
        if P.lc[rp] <= 1:
            run._push_dr(0)
            continue

        up = P.left[rp]
        vp = P.right[rp]
        uq = Q.left[rq]
        vq = Q.right[rq]
        if ctx.m[up] == vq and P.lc[up] == Q.lc[vq]:
            tswap = uq
            uq = vq
            vq = tswap
        if ctx.m[up] == uq and P.lc[up] == Q.lc[uq]:
            run._push_dr(0)
            run._push_frame(ci, vp, vq)
            run._push_frame(ci, up, uq)
            continue

        # ---- partition both pairs ------------------------------------
        for pi in range(2):
            x_p = up if pi == 0 else vp
            x_q = uq if pi == 0 else vq
            run.pn[4 * pi] = 0
            run.pn[4 * pi + 1] = 0
            run.pn[4 * pi + 2] = 0
            run.pn[4 * pi + 3] = 0
            base = P.lb[x_p]
            end = base + P.lc[x_p]
            for r in range(base, end):
                leaf = P.leaves[r]
                if _is_below(Q, x_q, run.qleaf[P.taxon[leaf]]):
                    bufs[4 * pi][run.pn[4 * pi]] = leaf
                    run.pn[4 * pi] += 1
                else:
                    bufs[4 * pi + 1][run.pn[4 * pi + 1]] = leaf
                    run.pn[4 * pi + 1] += 1
            base = Q.lb[x_q]
            end = base + Q.lc[x_q]
            for r in range(base, end):
                leaf = Q.leaves[r]
                if _is_below(P, x_p, run.pleaf[Q.taxon[leaf]]):
                    bufs[4 * pi + 2][run.pn[4 * pi + 2]] = leaf
                    run.pn[4 * pi + 2] += 1
                else:
                    bufs[4 * pi + 3][run.pn[4 * pi + 3]] = leaf
                    run.pn[4 * pi + 3] += 1
        run.work += 2 * P.lc[rp]

        # ---- conflicts touching the current roots ----------------------
        before = run.emitted
        for pi in range(2):
            other_p = vp if pi == 0 else up
            if run.pn[4 * pi] and run.pn[4 * pi + 1] and not run.store:
                run.emitted += (<long long> run.pn[4 * pi]) * run.pn[4 * pi + 1] * P.lc[other_p]
            elif run.pn[4 * pi] and run.pn[4 * pi + 1]:
                base = P.lb[other_p]
                end = base + P.lc[other_p]
                for ai in range(run.pn[4 * pi]):
                    ta2 = P.taxon[bufs[4 * pi][ai]]
                    for bi in range(run.pn[4 * pi + 1]):
                        tb2 = P.taxon[bufs[4 * pi + 1][bi]]
                        for cri in range(base, end):
                            run._emit(ta2, tb2, P.taxon[P.leaves[cri]])
            run._lsc(P, bufs[4 * pi], run.pn[4 * pi],
                     bufs[4 * pi + 1], run.pn[4 * pi + 1])
            run._lsc(P, bufs[4 * pi + 1], run.pn[4 * pi + 1],
                     bufs[4 * pi], run.pn[4 * pi])
            run._lsc(Q, bufs[4 * pi + 2], run.pn[4 * pi + 2],
                     bufs[4 * pi + 3], run.pn[4 * pi + 3])
            run._lsc(Q, bufs[4 * pi + 3], run.pn[4 * pi + 3],
                     bufs[4 * pi + 2], run.pn[4 * pi + 2])
        d_r = run.emitted - before
        run.work += d_r
        run._push_dr(<int> d_r)
        if P.lc[rp] > d_r + 2:
            run.violations += 1

        # ---- children ---------------------------------------------------
        nchild = 0
        for i in range(4):
            nz = run.pn[spec_z[i]]
            if nz < 3:
                continue
            cp_side = _side_from_leaflist(P, bufs[spec_z[i]], nz)
            cq_side = _side_from_leaflist(Q, bufs[spec_zq[i]], nz)
            _write_scratch(cp_side, run.pleaf)
            _write_scratch(cq_side, run.qleaf)
            child = _ctx_make(cp_side, cq_side, run.qleaf)
            run.work += 2 * nz
            run.work += cp_side.m + cq_side.m
            run.work += cp_side.tlen + cq_side.tlen
            run.work += cp_side.m
            run.ctxs.append(child)
            child_ci[nchild] = <int> len(run.ctxs) - 1
            child_rp[nchild] = cp_side.root
            child_rq[nchild] = cq_side.root
            nchild += 1
        for i in range(nchild - 1, -1, -1):
            run._push_frame(child_ci[i], child_rp[i], child_rq[i])

    array.resize(run.a_tri, run.tri_len)
    array.resize(run.a_dr, run.dr_len)
    return (run.a_tri, run.emitted, run.frames, run.work, run.violations,
            run.a_dr)

"""Hot kernels over CSR graph arrays, written once and optionally numba-jitted.

Every function here is compiled with ``@jit`` (numba ``njit`` when the numba
backend is active, identity otherwise), so the same source is the reference
implementation for both backends.  Constraints that keep the two backends
bit-identical:

- hash arithmetic lives in a 61-bit domain with split multiplication, so no
  int64 operation ever overflows (numba emits overflow-assuming LLVM flags
  on int64 multiplies, which makes wrapped products undefined);
- values pulled out of numpy arrays go through ``int()`` before hash math;
- node/edge ids are int32 and node ids must stay below 2**30.

CSR layout: ``indptr`` (int64, n+1), ``nbr``/``eid`` (int32, 2m) sorted by
(neighbor, edge id) ascending within each node slice -- the package-wide
deterministic traversal order.
"""

import numpy as np

from ._jit import jit

M61 = (1 << 61) - 1
_SEED2 = 0x3C6EF372FE94F82A & M61
_MUL1 = 0x1851F42D4C957F2D & M61
_MUL2 = 0x0545F4914F6CDD1D & M61


@jit
def _mulmod61(a, b):
    # (a * b) mod 2**61 without overflowing int64: split a and b into
    # 30/31-bit halves; the 2**62 cross term vanishes mod 2**61
    ah = a >> 31
    al = a & 0x7FFFFFFF
    bh = b >> 31
    bl = b & 0x7FFFFFFF
    mid = (ah * bl + al * bh) & 0x3FFFFFFF
    return (al * bl + (mid << 31)) & M61


@jit
def _mix61(x):
    x = x & M61
    x ^= x >> 29
    x = _mulmod61(x, _MUL1)
    x ^= x >> 27
    x = _mulmod61(x, _MUL2)
    x ^= x >> 31
    return x & M61


@jit
def _edge_enc(a, b):
    # injective for node ids < 2**30; stays inside the 61-bit hash domain
    if a < b:
        return (a << 30) | b
    return (b << 30) | a


@jit
def _finalize_hash(he1, he2, length):
    h1 = _mix61(he1 ^ _mix61(length))
    h2 = _mix61(he2 + _mix61(length ^ _SEED2))
    return h1, h2


@jit
def cycle_hash(seq, length):
    """Rotation/reflection-invariant 2x63-bit hash of a closed vertex walk.

    Hashes the multiset of consecutive unordered vertex pairs (the cycle's
    edge set, which determines a simple cycle uniquely) plus the length.
    The per-edge terms are summed mod 2**63, so path hashes compose by
    modular addition/subtraction -- the enumerate driver exploits this to
    hash fundamental cycles in O(1) from root-prefix hashes.
    """
    he1 = 0
    he2 = 0
    prev = int(seq[length - 1])
    for i in range(length):
        cur = int(seq[i])
        enc = _edge_enc(prev, cur)
        he1 = (he1 + _mix61(enc)) & M61
        he2 = (he2 + _mix61(enc ^ _SEED2)) & M61
        prev = cur
    return _finalize_hash(he1, he2, length)


@jit
def least_rotation_start(s, length, fbuf):
    """Booth's algorithm: index of the lexicographically least rotation."""
    for i in range(2 * length):
        fbuf[i] = -1
    k = 0
    for j in range(1, 2 * length):
        sj = s[j % length]
        i = fbuf[j - k - 1]
        while i != -1 and sj != s[(k + i + 1) % length]:
            if sj < s[(k + i + 1) % length]:
                k = j - i - 1
            i = fbuf[i]
        if sj != s[(k + i + 1) % length]:
            if sj < s[k % length]:
                k = j
            fbuf[j - k] = -1
        else:
            fbuf[j - k] = i + 1
    return k


@jit
def canonical_into(src, length, dst, dstoff, revbuf, fbuf):
    """Write the canonical (rotation+reflection minimal) form of a cycle.

    ``src[0:length]`` is any orientation of the cycle; the winner of the two
    Booth-minimal rotations (forward vs reversed) lands in
    ``dst[dstoff:dstoff+length]``.
    """
    kf = least_rotation_start(src, length, fbuf)
    for i in range(length):
        revbuf[i] = src[length - 1 - i]
    kr = least_rotation_start(revbuf, length, fbuf)
    forward_wins = True
    for i in range(length):
        a = src[(kf + i) % length]
        b = revbuf[(kr + i) % length]
        if a < b:
            break
        if a > b:
            forward_wins = False
            break
    if forward_wins:
        for i in range(length):
            dst[dstoff + i] = src[(kf + i) % length]
    else:
        for i in range(length):
            dst[dstoff + i] = revbuf[(kr + i) % length]


@jit
def bfs_tree(indptr, nbr, eid, root, stamp, sv, parent_node, parent_edge, depth, order, ph1, ph2):
    """Breadth-first spanning tree of root's component; returns node count.

    ``order[0:count]`` is the discovery order; depth equals hop distance.
    ``ph1``/``ph2`` receive the root-to-node path hashes (summed edge mixes).
    """
    stamp[root] = sv
    parent_node[root] = -1
    parent_edge[root] = -1
    depth[root] = 0
    ph1[root] = 0
    ph2[root] = 0
    order[0] = root
    head = 0
    tail = 1
    while head < tail:
        u = order[head]
        head += 1
        du = depth[u]
        iu = int(u)
        for p in range(indptr[u], indptr[u + 1]):
            w = nbr[p]
            if stamp[w] != sv:
                stamp[w] = sv
                parent_node[w] = u
                parent_edge[w] = eid[p]
                depth[w] = du + 1
                enc = _edge_enc(iu, int(w))
                ph1[w] = (int(ph1[u]) + _mix61(enc)) & M61
                ph2[w] = (int(ph2[u]) + _mix61(enc ^ _SEED2)) & M61
                order[tail] = w
                tail += 1
    return tail


@jit
def dfs_tree(indptr, nbr, eid, root, stamp, sv, parent_node, parent_edge, depth, order, stack, ptrs, ph1, ph2):
    """Depth-first (preorder, ascending-neighbor) spanning tree; returns count."""
    stamp[root] = sv
    parent_node[root] = -1
    parent_edge[root] = -1
    depth[root] = 0
    ph1[root] = 0
    ph2[root] = 0
    order[0] = root
    stack[0] = root
    ptrs[0] = indptr[root]
    cnt = 1
    sp = 1
    while sp > 0:
        u = stack[sp - 1]
        p = ptrs[sp - 1]
        pend = indptr[u + 1]
        advanced = False
        while p < pend:
            w = nbr[p]
            if stamp[w] != sv:
                ptrs[sp - 1] = p + 1
                stamp[w] = sv
                parent_node[w] = u
                parent_edge[w] = eid[p]
                depth[w] = depth[u] + 1
                enc = _edge_enc(int(u), int(w))
                ph1[w] = (int(ph1[u]) + _mix61(enc)) & M61
                ph2[w] = (int(ph2[u]) + _mix61(enc ^ _SEED2)) & M61
                order[cnt] = w
                cnt += 1
                stack[sp] = w
                ptrs[sp] = indptr[w]
                sp += 1
                advanced = True
                break
            p += 1
        if not advanced:
            sp -= 1
    return cnt


@jit
def component_labels(indptr, nbr, n):
    """Connected-component labels, numbered by ascending smallest member."""
    labels = np.full(n, -1, np.int32)
    queue = np.empty(max(n, 1), np.int32)
    c = 0
    for s in range(n):
        if labels[s] != -1:
            continue
        labels[s] = c
        queue[0] = s
        head = 0
        tail = 1
        while head < tail:
            u = queue[head]
            head += 1
            for p in range(indptr[u], indptr[u + 1]):
                w = nbr[p]
                if labels[w] == -1:
                    labels[w] = c
                    queue[tail] = w
                    tail += 1
        c += 1
    return labels, c


@jit
def two_core_mask(indptr, nbr, n):
    """Keep-mask of the 2-core: iteratively peel degree < 2 nodes."""
    deg = np.empty(n, np.int64)
    for v in range(n):
        deg[v] = indptr[v + 1] - indptr[v]
    alive = np.ones(n, np.bool_)
    work = np.empty(max(n, 1), np.int32)
    sp = 0
    for v in range(n):
        if deg[v] < 2:
            alive[v] = False
            work[sp] = v
            sp += 1
    while sp > 0:
        sp -= 1
        v = work[sp]
        for p in range(indptr[v], indptr[v + 1]):
            w = nbr[p]
            if alive[w]:
                deg[w] -= 1
                if deg[w] < 2:
                    alive[w] = False
                    work[sp] = w
                    sp += 1
    return alive


@jit
def _grow_i32(arr, need):
    cap = arr.shape[0]
    if need <= cap:
        return arr
    newcap = cap + (cap >> 1) + 16
    if newcap < need:
        newcap = need
    out = np.empty(newcap, np.int32)
    out[:cap] = arr
    return out


@jit
def _grow_i64(arr, need):
    cap = arr.shape[0]
    if need <= cap:
        return arr
    newcap = cap + (cap >> 1) + 16
    if newcap < need:
        newcap = need
    out = np.empty(newcap, np.int64)
    out[:cap] = arr
    return out


@jit
def enumerate_driver(indptr, nbr, eid, edge_u, edge_v,
                     comp_label, comp_edges, comp_edge_ptr,
                     roots, use_dfs, retain_limit):
    """Fundamental-cycle union over the given roots, deduplicated.

    For each root: build its spanning tree, then close one cycle per
    component edge missing from the tree (the tree / induced-subgraph edge
    difference).  Distinct cycles are keyed by the invariant ``cycle_hash``;
    vertex sequences are materialized (canonical form) only for cycles
    shorter than ``retain_limit`` (< 0 keeps everything).

    Returns columnar results in discovery order:
    (count, lengths, h1, h2, vert_offsets, first_root, closing_edge,
     verts, witness_slot, witness_root)
    """
    n = indptr.shape[0] - 1
    stamp = np.zeros(n, np.int32)
    sv = 0
    parent_node = np.empty(n, np.int32)
    parent_edge = np.empty(n, np.int32)
    depth = np.empty(n, np.int32)
    ph1 = np.empty(n, np.int64)
    ph2 = np.empty(n, np.int64)
    order = np.empty(max(n, 1), np.int32)
    stack = np.empty(max(n, 1), np.int32)
    ptrs = np.empty(max(n, 1), np.int64)
    upath = np.empty(n + 2, np.int32)
    vpath = np.empty(n + 2, np.int32)
    cycbuf = np.empty(n + 2, np.int32)
    revbuf = np.empty(n + 2, np.int32)
    fbuf = np.empty(2 * n + 4, np.int32)

    cap = 1024
    lengths = np.empty(cap, np.int32)
    h1s = np.empty(cap, np.int64)
    h2s = np.empty(cap, np.int64)
    offs = np.empty(cap, np.int64)
    firstroot = np.empty(cap, np.int32)
    closeedge = np.empty(cap, np.int32)
    nslots = 0
    verts = np.empty(4096, np.int32)
    vlen = 0
    wslot = np.empty(4096, np.int32)
    wroot = np.empty(4096, np.int32)
    wlen = 0

    tcap = 1 << 12
    tmask = tcap - 1
    tslot = np.full(tcap, -1, np.int64)

    for ri in range(roots.shape[0]):
        r = roots[ri]
        sv += 1
        if use_dfs:
            dfs_tree(indptr, nbr, eid, r, stamp, sv, parent_node, parent_edge, depth, order, stack, ptrs, ph1, ph2)
        else:
            bfs_tree(indptr, nbr, eid, r, stamp, sv, parent_node, parent_edge, depth, order, ph1, ph2)
        lbl = comp_label[r]
        for k in range(comp_edge_ptr[lbl], comp_edge_ptr[lbl + 1]):
            e = comp_edges[k]
            u = edge_u[e]
            v = edge_v[e]
            if parent_edge[u] == e or parent_edge[v] == e:
                continue
            # hash the cycle (tree path u..lca..v plus this edge) in O(1)
            # per emission: path hashes compose by modular subtraction
            if use_dfs:
                # undirected DFS has no cross edges, so the endpoints are
                # ancestor/descendant and the lca is the shallower one
                if depth[u] <= depth[v]:
                    a = u
                else:
                    a = v
                da = int(depth[a])
            else:
                a = u
                b = v
                da = int(depth[a])
                db = int(depth[b])
                while da > db:
                    a = parent_node[a]
                    da -= 1
                while db > da:
                    b = parent_node[b]
                    db -= 1
                while a != b:
                    a = parent_node[a]
                    b = parent_node[b]
                    da -= 1
            L = int(depth[u]) + int(depth[v]) - 2 * da + 1
            enc = _edge_enc(int(u), int(v))
            he1 = (int(ph1[u]) + int(ph1[v]) - 2 * int(ph1[a]) + _mix61(enc)) & M61
            he2 = (int(ph2[u]) + int(ph2[v]) - 2 * int(ph2[a]) + _mix61(enc ^ _SEED2)) & M61
            h1, h2 = _finalize_hash(he1, he2, L)

            idx = h1 & tmask
            slot = -1
            while True:
                s = tslot[idx]
                if s == -1:
                    break
                if h1s[s] == h1 and h2s[s] == h2 and lengths[s] == L:
                    slot = s
                    break
                idx = (idx + 1) & tmask
            if slot == -1:
                slot = nslots
                if slot >= lengths.shape[0]:
                    lengths = _grow_i32(lengths, slot + 1)
                    h1s = _grow_i64(h1s, slot + 1)
                    h2s = _grow_i64(h2s, slot + 1)
                    offs = _grow_i64(offs, slot + 1)
                    firstroot = _grow_i32(firstroot, slot + 1)
                    closeedge = _grow_i32(closeedge, slot + 1)
                lengths[slot] = L
                h1s[slot] = h1
                h2s[slot] = h2
                firstroot[slot] = r
                closeedge[slot] = e
                if retain_limit < 0 or L < retain_limit:
                    # first sighting of a retained cycle: materialize the
                    # walk and store its canonical orientation
                    a = u
                    b = v
                    ul = 0
                    vl = 0
                    da = depth[a]
                    db = depth[b]
                    while da > db:
                        upath[ul] = a
                        ul += 1
                        a = parent_node[a]
                        da -= 1
                    while db > da:
                        vpath[vl] = b
                        vl += 1
                        b = parent_node[b]
                        db -= 1
                    while a != b:
                        upath[ul] = a
                        ul += 1
                        vpath[vl] = b
                        vl += 1
                        a = parent_node[a]
                        b = parent_node[b]
                    upath[ul] = a
                    ul += 1
                    for i in range(ul):
                        cycbuf[i] = upath[i]
                    for i in range(vl):
                        cycbuf[ul + i] = vpath[vl - 1 - i]
                    verts = _grow_i32(verts, vlen + L)
                    canonical_into(cycbuf, L, verts, vlen, revbuf, fbuf)
                    offs[slot] = vlen
                    vlen += L
                else:
                    offs[slot] = -1
                nslots += 1
                tslot[idx] = slot
                if nslots * 3 > tcap * 2:
                    ncap = tcap * 2
                    nmask = ncap - 1
                    ntab = np.full(ncap, -1, np.int64)
                    for s in range(nslots):
                        j = h1s[s] & nmask
                        while ntab[j] != -1:
                            j = (j + 1) & nmask
                        ntab[j] = s
                    tslot = ntab
                    tcap = ncap
                    tmask = nmask
            if wlen >= wslot.shape[0]:
                wslot = _grow_i32(wslot, wlen + 1)
                wroot = _grow_i32(wroot, wlen + 1)
            wslot[wlen] = slot
            wroot[wlen] = r
            wlen += 1

    return (nslots, lengths[:nslots], h1s[:nslots], h2s[:nslots], offs[:nslots],
            firstroot[:nslots], closeedge[:nslots], verts[:vlen],
            wslot[:wlen], wroot[:wlen])


@jit
def group_stats(indptr, nbr, eid, edge_dates, nodes_concat, group_ptr, n):
    """Per node-group induced stats in one adjacency pass.

    Returns (internal_edges, repeat_pairs, external_endpoints, date_min,
    date_max) per group; dates use -1 for "missing" and groups with no dated
    internal edge report dmax = -1.
    """
    k = group_ptr.shape[0] - 1
    m_int = np.zeros(k, np.int64)
    repeats = np.zeros(k, np.int64)
    ext = np.zeros(k, np.int64)
    dmin = np.full(k, np.int64(1) << 60, np.int64)
    dmax = np.full(k, -1, np.int64)
    stamp = np.full(n, -1, np.int64)
    for g in range(k):
        for i in range(group_ptr[g], group_ptr[g + 1]):
            stamp[nodes_concat[i]] = g
        for i in range(group_ptr[g], group_ptr[g + 1]):
            u = nodes_concat[i]
            prevw = -1
            for p in range(indptr[u], indptr[u + 1]):
                w = nbr[p]
                if stamp[w] == g:
                    if w > u:
                        m_int[g] += 1
                        if w == prevw:
                            repeats[g] += 1
                        prevw = w
                        d = edge_dates[eid[p]]
                        if d >= 0:
                            if d < dmin[g]:
                                dmin[g] = d
                            if d > dmax[g]:
                                dmax[g] = d
                else:
                    ext[g] += 1
    return m_int, repeats, ext, dmin, dmax

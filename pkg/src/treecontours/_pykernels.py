"""Pure-Python hot loops.  ``_kernels.pyx`` mirrors these signatures."""
import sys


def count_boundaries(offsets, kids, open_end, root, n_max, force_root=False):
    """Count root-containing subtrees by boundary size, up to ``n_max``.

    The tree is in CSR form: the children of ``v`` are
    ``kids[offsets[v]:offsets[v + 1]]``.  Open-end vertices may only be
    boundary vertices.  With ``force_root`` every child of the root is
    forced into the subtree, which counts the contours that avoid all
    root edges.
    """
    counts = [0] * (n_max + 1)
    if open_end[root]:
        return counts
    stack = []
    if force_root:
        for i in range(offsets[root], offsets[root + 1]):
            c = kids[i]
            if open_end[c]:
                return counts
            stack.extend(kids[offsets[c]:offsets[c + 1]])
    else:
        stack.extend(kids[offsets[root]:offsets[root + 1]])

    def rec(fsize, boundary):
        if boundary + fsize > n_max:
            return
        if fsize == 0:
            counts[boundary] += 1
            return
        top = fsize - 1
        v = stack[top]
        rec(top, boundary + 1)
        if not open_end[v]:
            lo, hi = offsets[v], offsets[v + 1]
            need = top + hi - lo
            if len(stack) < need:
                stack.extend([0] * (need - len(stack)))
            stack[top:need] = kids[lo:hi]
            rec(need, boundary)
        # either branch may have written over slot ``top``
        stack[top] = v

    limit = sys.getrecursionlimit()
    sys.setrecursionlimit(max(limit, 2 * len(open_end) + 1000))
    try:
        rec(len(stack), 0)
    finally:
        sys.setrecursionlimit(limit)
    return counts


def conv_coeff(a, b, n, lo=0):
    """Sum of ``a[k] * b[n - k]`` for ``lo <= k <= n`` within both lengths."""
    start = max(lo, n - len(b) + 1)
    stop = min(n, len(a) - 1)
    total = 0
    for k in range(start, stop + 1):
        total += a[k] * b[n - k]
    return total


def convolve(a, b, order):
    """Truncated product of two coefficient lists, length ``order + 1``."""
    out = [0] * (order + 1)
    nb = len(b)
    for i, x in enumerate(a[:order + 1]):
        if not x:
            continue
        for j in range(min(nb, order + 1 - i)):
            out[i + j] += x * b[j]
    return out

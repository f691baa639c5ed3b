"""Pure-Python enumeration of non-crossing segment matchings on a circle.

Reference implementation of the compiled kernel in ``_matchings.pyx``; both
must return identical results.
"""


def enumerate_regular_matchings(n, leaf_ok):
    """Walk every non-crossing perfect matching of ``n`` cyclic segments.

    Segment ``i`` runs from grid point ``i`` to ``i + 1``. Matching two
    neighbouring segments folds the boundary at their shared point, which then
    becomes a leaf of the weld tree; a matching is kept only if every such
    point has ``leaf_ok`` set.

    Returns ``(total, kept)`` with ``total`` the number of matchings visited and
    ``kept`` a list of mate tuples.
    """
    n = int(n)
    ok = [bool(x) for x in leaf_ok]
    if len(ok) != n:
        raise ValueError("leaf_ok must have one entry per grid point")
    if n == 0 or n % 2:
        return 0, []
    mate = [-1] * n
    stack = []
    kept = []
    total = 0

    def rec(i, bad):
        nonlocal total
        if i == n:
            total += 1
            if bad == 0 and not (mate[0] == n - 1 and not ok[0]):
                kept.append(tuple(mate))
            return
        if len(stack) + 1 <= n - i - 1:
            stack.append(i)
            rec(i + 1, bad)
            stack.pop()
        if stack:
            j = stack.pop()
            mate[i] = j
            mate[j] = i
            rec(i + 1, bad + (j == i - 1 and not ok[i]))
            mate[i] = mate[j] = -1
            stack.append(j)

    rec(0, 0)
    return total, kept

# cython: language_level=3, boundscheck=False, wraparound=False
"""Compiled enumeration of non-crossing segment matchings (see _matchings_py)."""

from libc.stdlib cimport malloc, free


cdef struct State:
    int n
    int *mate
    int *stack
    int top
    char *ok
    long long total


cdef int _rec(State *st, int i, int bad, list kept) except -1:
    cdef int j, k
    if i == st.n:
        st.total += 1
        if bad == 0 and not (st.mate[0] == st.n - 1 and not st.ok[0]):
            kept.append(tuple([st.mate[k] for k in range(st.n)]))
        return 0
    if st.top + 1 <= st.n - i - 1:
        st.stack[st.top] = i
        st.top += 1
        _rec(st, i + 1, bad, kept)
        st.top -= 1
    if st.top > 0:
        st.top -= 1
        j = st.stack[st.top]
        st.mate[i] = j
        st.mate[j] = i
        _rec(st, i + 1, bad + (1 if (j == i - 1 and not st.ok[i]) else 0), kept)
        st.mate[i] = -1
        st.mate[j] = -1
        st.stack[st.top] = j
        st.top += 1
    return 0


def enumerate_regular_matchings(n, leaf_ok):
    cdef State st
    cdef int i
    cdef list kept = []
    n = int(n)
    flags = [bool(x) for x in leaf_ok]
    if len(flags) != n:
        raise ValueError("leaf_ok must have one entry per grid point")
    if n == 0 or n % 2:
        return 0, []
    st.n = n
    st.top = 0
    st.total = 0
    st.mate = <int *> malloc(n * sizeof(int))
    st.stack = <int *> malloc(n * sizeof(int))
    st.ok = <char *> malloc(n * sizeof(char))
    if st.mate == NULL or st.stack == NULL or st.ok == NULL:
        free(st.mate); free(st.stack); free(st.ok)
        raise MemoryError()
    try:
        for i in range(n):
            st.mate[i] = -1
            st.ok[i] = 1 if flags[i] else 0
        _rec(&st, 0, 0, kept)
    finally:
        free(st.mate)
        free(st.stack)
        free(st.ok)
    return st.total, kept

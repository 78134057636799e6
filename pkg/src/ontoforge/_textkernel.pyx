# cython: language_level=3, boundscheck=False, wraparound=False
"""Compiled text kernel. Behavioural twin of ontoforge._textkernel_py.

Token sets are interned to sorted int-id arrays so the O(n^2) pair loop runs
as C merges instead of Python set algebra. Results must match the pure-Python
module bit for bit; tests parametrize over both backends.
"""

import string

from cpython cimport array
import array

_PUNCT_STRIP = string.punctuation + string.whitespace


def normalize_label(text):
    """Trim, collapse whitespace runs, lowercase, strip surrounding ASCII punctuation."""
    collapsed = " ".join(text.split())
    return collapsed.lower().strip(_PUNCT_STRIP)


def token_set(label):
    """Whitespace tokens of an already-normalized label, as a frozenset."""
    return frozenset(label.split())


def jaccard(tokens_a, tokens_b):
    """Jaccard coefficient of two token sets. Two empty sets count as identical."""
    if not tokens_a and not tokens_b:
        return 1.0
    cdef Py_ssize_t union_n = len(tokens_a | tokens_b)
    if union_n == 0:
        return 1.0
    return <double>len(tokens_a & tokens_b) / <double>union_n


def similarity(a, b):
    """Jaccard similarity of the normalized token sets of two raw labels."""
    return jaccard(token_set(normalize_label(a)), token_set(normalize_label(b)))


cdef double _jaccard_span(long long[::1] ids, Py_ssize_t s0, Py_ssize_t e0,
                          Py_ssize_t s1, Py_ssize_t e1) nogil:
    cdef Py_ssize_t la = e0 - s0
    cdef Py_ssize_t lb = e1 - s1
    if la == 0 and lb == 0:
        return 1.0
    cdef Py_ssize_t i = s0, j = s1, inter = 0
    while i < e0 and j < e1:
        if ids[i] == ids[j]:
            inter += 1
            i += 1
            j += 1
        elif ids[i] < ids[j]:
            i += 1
        else:
            j += 1
    cdef Py_ssize_t union_n = la + lb - inter
    if union_n == 0:
        return 1.0
    return <double>inter / <double>union_n


def pair_links(relation_keys, subjects, objects, double threshold):
    """All-pairs near-duplicate links among parallel triple field lists.

    Same contract as the pure-Python kernel: indices i < j linked when
    relation keys are equal and both field similarities reach threshold,
    returned in ascending order.
    """
    cdef Py_ssize_t n = len(relation_keys)
    vocab = {}
    flat = []
    cdef Py_ssize_t i, cursor = 0

    # Layout: subj span of triple i at [off[2i], off[2i+1]), obj span at
    # [off[2i+1], off[2i+2]).
    off_list = [0]
    for i in range(n):
        for label in (subjects[i], objects[i]):
            for tok in sorted(set(label.split())):
                ident = vocab.get(tok)
                if ident is None:
                    ident = len(vocab)
                    vocab[tok] = ident
                flat.append(ident)
            # ids were appended in token-sorted order; re-sort by id value
            span = sorted(flat[cursor:])
            flat[cursor:] = span
            cursor = len(flat)
            off_list.append(cursor)

    cdef array.array ids_arr = array.array("q", flat)
    cdef array.array off_arr = array.array("q", off_list)
    cdef long long[::1] ids = ids_arr
    cdef long long[::1] off = off_arr

    groups = {}
    for i in range(n):
        groups.setdefault(relation_keys[i], []).append(i)

    links = []
    cdef Py_ssize_t a, b, gi, gj
    cdef double sim
    for members in groups.values():
        for a in range(len(members)):
            gi = members[a]
            for b in range(a + 1, len(members)):
                gj = members[b]
                sim = _jaccard_span(ids, off[2 * gi], off[2 * gi + 1],
                                    off[2 * gj], off[2 * gj + 1])
                if sim < threshold:
                    continue
                sim = _jaccard_span(ids, off[2 * gi + 1], off[2 * gi + 2],
                                    off[2 * gj + 1], off[2 * gj + 2])
                if sim < threshold:
                    continue
                links.append((gi, gj))
    links.sort()
    return links

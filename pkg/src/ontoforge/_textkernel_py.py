"""Pure-Python text kernel: label normalization, token Jaccard, pair linking.

This is the fallback used when the compiled extension (ontoforge._textkernel)
is unavailable. Both implementations must produce identical results; the
compiled one only changes speed. See ontoforge.kernels for selection.
"""

import string

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
    union = len(tokens_a | tokens_b)
    if union == 0:
        return 1.0
    return len(tokens_a & tokens_b) / union


def similarity(a, b):
    """Jaccard similarity of the normalized token sets of two raw labels."""
    return jaccard(token_set(normalize_label(a)), token_set(normalize_label(b)))


def pair_links(relation_keys, subjects, objects, threshold):
    """All-pairs near-duplicate links among parallel triple field lists.

    relation_keys/subjects/objects are pre-normalized strings, one triple per
    index. Indices i < j are linked when the relation keys are equal and both
    subject and object Jaccard similarities reach threshold. Returns (i, j)
    pairs in ascending order. O(n^2) within each relation group; this is the
    hot loop the compiled kernel exists for.
    """
    n = len(relation_keys)
    groups = {}
    for i in range(n):
        groups.setdefault(relation_keys[i], []).append(i)

    subj_tokens = [token_set(s) for s in subjects]
    obj_tokens = [token_set(o) for o in objects]

    links = []
    for members in groups.values():
        for a in range(len(members)):
            i = members[a]
            for b in range(a + 1, len(members)):
                j = members[b]
                if jaccard(subj_tokens[i], subj_tokens[j]) < threshold:
                    continue
                if jaccard(obj_tokens[i], obj_tokens[j]) < threshold:
                    continue
                links.append((i, j))
    links.sort()
    return links

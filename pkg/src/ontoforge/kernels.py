"""Text-kernel backend selection.

Prefers the compiled extension when it was built, otherwise falls back to the
pure-Python implementation. Everything downstream imports the primitives from
here so the choice is made exactly once, at import time.
"""

try:
    from ontoforge import _textkernel as _impl

    KERNEL_BACKEND = "cython"
except ImportError:
    from ontoforge import _textkernel_py as _impl

    KERNEL_BACKEND = "python"

normalize_label = _impl.normalize_label
token_set = _impl.token_set
jaccard = _impl.jaccard
similarity = _impl.similarity
pair_links = _impl.pair_links


def available_backends():
    """Name -> module for every kernel implementation importable here."""
    from ontoforge import _textkernel_py

    backends = {"python": _textkernel_py}
    try:
        from ontoforge import _textkernel

        backends["cython"] = _textkernel
    except ImportError:
        pass
    return backends

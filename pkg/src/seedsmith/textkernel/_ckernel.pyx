# cython: language_level=3, boundscheck=False, wraparound=False
"""Compiled text kernels; mirrors ``_pykernel`` exactly.

Tokenization scans character runs of Unicode alphanumerics on the
lowercased string, which is equivalent to the fallback's [^\\W_]+ regex.
"""

from cpython.unicode cimport Py_UNICODE_ISALNUM
from libc.math cimport sqrt


def token_counts(text, stopwords=frozenset(), Py_ssize_t min_len=2):
    """Count tokens in ``text`` after lowercasing, dropping short tokens
    and stopwords. Returns a term -> count dict."""
    cdef str lowered = (<str?>text).lower()
    cdef Py_ssize_t n = len(lowered)
    cdef Py_ssize_t i = 0
    cdef Py_ssize_t start
    cdef Py_UCS4 ch
    cdef dict counts = {}
    cdef str tok
    while i < n:
        ch = lowered[i]
        if Py_UNICODE_ISALNUM(ch):
            start = i
            i += 1
            while i < n:
                ch = lowered[i]
                if not Py_UNICODE_ISALNUM(ch):
                    break
                i += 1
            if i - start >= min_len:
                tok = lowered[start:i]
                if tok not in stopwords:
                    counts[tok] = counts.get(tok, 0) + 1
        else:
            i += 1
    return counts


def merge_counts(dict dst, dict src):
    """Add ``src`` counts into ``dst`` in place and return ``dst``."""
    for term, n in src.items():
        dst[term] = dst.get(term, 0) + n
    return dst


def sparse_cosine(dict a, dict b):
    """Cosine similarity of two sparse term->weight mappings.

    Either mapping empty yields 0.0. Iterates the smaller mapping for the
    dot product; the result is invariant under positive rescaling of
    either vector.
    """
    if not a or not b:
        return 0.0
    cdef dict small = a
    cdef dict large = b
    if len(b) < len(a):
        small = b
        large = a
    cdef double dot = 0.0
    cdef object wb
    for term, wa in small.items():
        wb = large.get(term)
        if wb is not None:
            dot += <double>wa * <double>wb
    if dot == 0.0:
        return 0.0
    cdef double norm_a = 0.0
    for wa in small.values():
        norm_a += <double>wa * <double>wa
    cdef double norm_b = 0.0
    for wb2 in large.values():
        norm_b += <double>wb2 * <double>wb2
    return dot / (sqrt(norm_a) * sqrt(norm_b))

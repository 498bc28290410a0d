"""Bundled English stopword list, version-pinned for reproducible vectors.

Changing this list changes every term vector built with it, so bump
STOPWORDS_VERSION on any edit. Single-character tokens are already
dropped by the tokenizer regardless of this list.
"""

STOPWORDS_VERSION = "1"

STOPWORDS = frozenset(
    """
    a about above after again against all am an and any are aren arent as at
    be because been before being below between both but by
    can cannot could couldn couldnt
    did didn didnt do does doesn doesnt doing don dont down during
    each few for from further
    had hadn hadnt has hasn hasnt have haven havent having he her here hers
    herself him himself his how
    i if in into is isn isnt it its itself
    just
    ll
    me more most mustn mustnt my myself
    no nor not now
    of off on once only or other our ours ourselves out over own
    re
    s same shan shant she should shouldn shouldnt so some such
    t than that the their theirs them themselves then there these they this
    those through to too
    under until up
    ve very
    was wasn wasnt we were weren werent what when where which while who whom
    why will with won wont would wouldn wouldnt
    y you your yours yourself yourselves
    """.split()
)

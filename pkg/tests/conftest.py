import sys
from datetime import datetime, timezone
from pathlib import Path

import pytest

from seedsmith.corpus.model import Post, TopicSpec, build_corpus

sys.path.insert(0, str(Path(__file__).parent))

RETRIEVED = datetime(2018, 11, 6, 0, 0, 0, tzinfo=timezone.utc)

_counter = [0]


def make_post(id=None, **overrides):
    """Post factory with a unique id and the golden-era retrieval date."""
    if id is None:
        _counter[0] += 1
        id = f"p{_counter[0]}"
    defaults = dict(
        id=id,
        source="reddit",
        vertical="top",
        query="river flood",
        query_kind="text",
        topic_id="t1",
        author="alice",
        retrieved_at=RETRIEVED,
        text="",
        serp_visible=False,
    )
    defaults.update(overrides)
    return Post(**defaults)


def make_topic(topic_id="t1", **overrides):
    defaults = dict(topic_id=topic_id, text_query="river flood")
    defaults.update(overrides)
    return TopicSpec(**defaults)


def make_corpus(posts, topics=None):
    if topics is None:
        topics = [make_topic(t) for t in sorted({p.topic_id for p in posts})]
    return build_corpus(posts, topics)


@pytest.fixture
def data_dir():
    return Path(__file__).parent / "data"

"""Reply forests and post-class segmentation.

Posts directly returned by a SERP form tree roots; their reply threads
are classified into groups by post count and author count:

- P1A1: the root post alone
- PnA1: a root-anchored chain of replies all written by the root author
- PnAn: the root plus all replies, when at least two authors took part

PnA1 and PnAn together form the micro-collection (MC) view. A root post
belongs to its P1A1 group and to the MC groups of its thread; pass
``mc_exclude_root=True`` for the alternative counting where MC groups
hold replies only. P1An groups (multi-author reference lists) never come
out of segmentation; the goldstandard module builds those.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from datetime import datetime, timezone

from .corpus.model import Corpus, Post

P1A1 = "P1A1"
P1AN = "P1An"
PNA1 = "PnA1"
PNAN = "PnAn"
MC = "MC"
BASE_CLASSES = (P1A1, P1AN, PNA1, PNAN)
MC_MEMBER_CLASSES = (PNA1, PNAN)

_MIN_TS = datetime.min.replace(tzinfo=timezone.utc)


class SegmentationError(Exception):
    pass


@dataclass(frozen=True)
class PostGroup:
    """A set of posts carrying exactly one post-class label."""

    group_id: str
    post_class: str
    post_ids: tuple[str, ...]
    root_id: str | None  # None for groups under a detached root
    topic_id: str
    source: str
    vertical: str
    author_set: frozenset[str]

    def validate(self, include_root: bool = True) -> None:
        """Check the class-label size/author constraints.

        The constraints below assume root-inclusive membership; with
        ``mc_exclude_root`` the minimum sizes shift down by one post.
        """
        n_posts = len(self.post_ids)
        n_authors = len(self.author_set)
        min_mc = 2 if include_root else 1
        if self.post_class == P1A1 and n_posts != 1:
            raise SegmentationError(f"{self.group_id}: P1A1 groups hold exactly one post")
        if self.post_class == PNA1:
            if n_authors != 1 or n_posts < min_mc:
                raise SegmentationError(
                    f"{self.group_id}: PnA1 needs one author and >= {min_mc} posts "
                    f"(got {n_authors} authors, {n_posts} posts)"
                )
        if self.post_class == PNAN and include_root:
            if n_authors < 2 or n_posts < 2:
                raise SegmentationError(
                    f"{self.group_id}: PnAn needs >= 2 authors and >= 2 posts "
                    f"(got {n_authors} authors, {n_posts} posts)"
                )


@dataclass(frozen=True)
class Selector:
    """Optional topic/source/vertical filter over a corpus."""

    topics: frozenset[str] | None = None
    sources: frozenset[str] | None = None
    verticals: frozenset[str] | None = None

    @classmethod
    def of(cls, topics=None, sources=None, verticals=None) -> "Selector":
        wrap = lambda v: frozenset(v) if v else None
        return cls(wrap(topics), wrap(sources), wrap(verticals))

    def matches(self, post: Post) -> bool:
        return (
            (self.topics is None or post.topic_id in self.topics)
            and (self.sources is None or post.source in self.sources)
            and (self.verticals is None or post.vertical in self.verticals)
        )


@dataclass
class TreeNode:
    post: Post | None  # None only on synthetic detached roots
    children: list["TreeNode"] = field(default_factory=list)
    detached_key: str | None = None  # missing parent id, for detached roots

    @property
    def is_detached_root(self) -> bool:
        return self.post is None

    def posts(self) -> list[Post]:
        out = []
        stack = [self]
        while stack:
            node = stack.pop()
            if node.post is not None:
                out.append(node.post)
            stack.extend(reversed(node.children))
        return out

    def cell_post(self) -> Post:
        """Representative post for (topic, source, vertical) grouping."""
        if self.post is not None:
            return self.post
        return self.children[0].post


def _order_key(node: TreeNode):
    post = node.cell_post()
    return (post.created_at or _MIN_TS, post.id)


def build_forest(corpus: Corpus, selector: Selector | None = None, warnings=None) -> list[TreeNode]:
    """Arrange the selected posts into reply trees.

    SERP-visible posts root their threads. A reply whose parent falls
    outside the selection goes under a synthetic detached root (one per
    missing parent), with a warning recorded. Children are ordered by
    (created_at, id) so the forest is reproducible.
    """
    selector = selector or Selector()
    selected = [p for p in corpus.posts.values() if selector.matches(p)]
    nodes = {p.id: TreeNode(p) for p in selected}

    roots: list[TreeNode] = []
    detached: dict[str, TreeNode] = {}
    for post in selected:
        node = nodes[post.id]
        if post.serp_visible:
            roots.append(node)
        elif post.parent_id is not None and post.parent_id in nodes:
            nodes[post.parent_id].children.append(node)
        else:
            # Orphan reply, or a parentless post that is not SERP-visible:
            # group under one synthetic root per missing parent.
            key = post.parent_id if post.parent_id is not None else post.id
            holder = detached.get(key)
            if holder is None:
                holder = TreeNode(None, detached_key=key)
                detached[key] = holder
            holder.children.append(node)
            if warnings is not None and post.parent_id is not None:
                warnings.append(
                    f"post {post.id}: parent {post.parent_id} not in selection; attached to detached root"
                )

    for node in nodes.values():
        node.children.sort(key=_order_key)
    for holder in detached.values():
        holder.children.sort(key=_order_key)

    forest = roots + list(detached.values())
    forest.sort(key=_order_key)
    return forest


def _maximal_self_chains(root: TreeNode) -> list[list[Post]]:
    """Root-anchored reply chains written entirely by the root author.

    Each returned chain starts at the root, follows one reply edge per
    step, and cannot be extended by another same-author reply. Chains of
    just the root (no same-author reply at all) are not returned.
    """
    author = root.post.author
    chains: list[list[Post]] = []

    def grow(node: TreeNode, prefix: list[Post]) -> None:
        extensions = [c for c in node.children if c.post.author == author]
        if not extensions:
            if len(prefix) >= 2:
                chains.append(prefix)
            return
        for child in extensions:
            grow(child, prefix + [child.post])

    grow(root, [root.post])
    return chains


def classify_groups(tree: TreeNode, mc_exclude_root: bool = False) -> list[PostGroup]:
    """Emit the post-class groups of one reply tree.

    Total over valid trees: detached roots yield neither P1A1 nor PnA1
    groups, but their reply fragments can still form a PnAn group.
    """
    groups: list[PostGroup] = []
    all_posts = tree.posts()
    if not all_posts:
        return groups
    cell = tree.cell_post()
    meta = dict(topic_id=cell.topic_id, source=cell.source, vertical=cell.vertical)

    root_post = tree.post if not tree.is_detached_root else None
    root_prefix = root_post.id if root_post is not None else f"detached:{tree.detached_key}"

    if root_post is not None and root_post.serp_visible:
        groups.append(
            PostGroup(
                group_id=f"{root_post.id}/P1A1",
                post_class=P1A1,
                post_ids=(root_post.id,),
                root_id=root_post.id,
                author_set=frozenset([root_post.author]),
                **meta,
            )
        )
        for chain in _maximal_self_chains(tree):
            members = chain[1:] if mc_exclude_root else chain
            groups.append(
                PostGroup(
                    group_id=f"{root_post.id}/PnA1/{chain[-1].id}",
                    post_class=PNA1,
                    post_ids=tuple(p.id for p in members),
                    root_id=root_post.id,
                    author_set=frozenset(p.author for p in members),
                    **meta,
                )
            )

    replies = [p for p in all_posts if root_post is None or p.id != root_post.id]
    authors = {p.author for p in all_posts}
    if replies and len(authors) >= 2:
        members = replies if (mc_exclude_root or root_post is None) else all_posts
        groups.append(
            PostGroup(
                group_id=f"{root_prefix}/PnAn",
                post_class=PNAN,
                post_ids=tuple(p.id for p in members),
                root_id=root_post.id if root_post is not None else None,
                author_set=frozenset(p.author for p in members),
                **meta,
            )
        )

    for group in groups:
        group.validate(include_root=not mc_exclude_root)
    return groups


CellKey = tuple[str, str, str, str]  # (topic_id, source, vertical, post_class)


def partition_corpus(
    corpus: Corpus,
    selector: Selector | None = None,
    mc_exclude_root: bool = False,
    warnings=None,
) -> dict[CellKey, list[PostGroup]]:
    """Group the corpus into (topic, source, vertical, post class) cells.

    The result is deterministically ordered: cells sorted by key, groups
    in forest order within each cell. An empty selection yields an empty
    map.
    """
    forest = build_forest(corpus, selector, warnings=warnings)
    cells: dict[CellKey, list[PostGroup]] = {}
    for tree in forest:
        for group in classify_groups(tree, mc_exclude_root=mc_exclude_root):
            key = (group.topic_id, group.source, group.vertical, group.post_class)
            cells.setdefault(key, []).append(group)
    return {key: cells[key] for key in sorted(cells)}


def mc_view(partition: dict[CellKey, list[PostGroup]]) -> dict[CellKey, list[PostGroup]]:
    """Merge PnA1 and PnAn cells under the MC label; counts stay additive."""
    merged: dict[CellKey, list[PostGroup]] = {}
    for (topic, source, vertical, post_class), groups in partition.items():
        if post_class in MC_MEMBER_CLASSES:
            key = (topic, source, vertical, MC)
        else:
            key = (topic, source, vertical, post_class)
        merged.setdefault(key, []).extend(groups)
    return {key: merged[key] for key in sorted(merged)}


def partition_counts(partition: dict[CellKey, list[PostGroup]]) -> list[tuple]:
    """Rows of (topic, source, vertical, post_class, group_count, post_count)."""
    rows = []
    for (topic, source, vertical, post_class), groups in sorted(partition.items()):
        rows.append(
            (
                topic,
                source,
                vertical,
                post_class,
                len(groups),
                sum(len(g.post_ids) for g in groups),
            )
        )
    return rows

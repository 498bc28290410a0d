"""Independent reference implementations used to cross-check the package.

Everything here is deliberately written with a different algorithmic
shape than the production code: path enumeration instead of chain
growing, stdlib quantiles instead of the hand-rolled interpolation, a
calendar-free day counter instead of datetime arithmetic.
"""

from collections import defaultdict


def brute_force_classify(posts, mc_exclude_root=False):
    """Classify one reply tree by exhaustive path enumeration.

    ``posts`` is the full post list of a single tree whose root is the
    unique serp_visible post. Returns a set of (post_class,
    frozenset(post_ids)) pairs.
    """
    by_id = {p.id: p for p in posts}
    children = defaultdict(list)
    for p in posts:
        if p.parent_id is not None:
            children[p.parent_id].append(p)
    roots = [p for p in posts if p.serp_visible]
    assert len(roots) == 1, "brute-force classifier expects exactly one visible root"
    root = roots[0]

    groups = {("P1A1", frozenset([root.id]))}

    # Enumerate every downward path from the root, then keep the
    # author-uniform ones that are not prefixes of longer uniform paths.
    paths = []

    def walk(post_id, acc):
        acc = acc + [post_id]
        paths.append(tuple(acc))
        for child in children[post_id]:
            walk(child.id, acc)

    walk(root.id, [])
    uniform = [
        p
        for p in paths
        if len(p) >= 2 and all(by_id[x].author == root.author for x in p)
    ]
    maximal = [
        p
        for p in uniform
        if not any(len(q) > len(p) and q[: len(p)] == p for q in uniform)
    ]
    for chain in maximal:
        members = chain[1:] if mc_exclude_root else chain
        groups.add(("PnA1", frozenset(members)))

    replies = [p for p in posts if p.id != root.id]
    authors = {p.author for p in posts}
    if replies and len(authors) >= 2:
        members = replies if mc_exclude_root else posts
        groups.add(("PnAn", frozenset(m.id for m in members)))
    return groups


def classify_result_as_set(groups):
    """Production classify_groups output in the brute-force comparison shape."""
    return {(g.post_class, frozenset(g.post_ids)) for g in groups}


def random_reply_tree(rng, max_posts=20, max_authors=4):
    """A random single-root reply tree as a list of conftest-style kwargs."""
    n = rng.randint(1, max_posts)
    authors = [f"a{i}" for i in range(1, rng.randint(1, max_authors) + 1)]
    posts = []
    ids = []
    for i in range(n):
        pid = f"n{i}"
        author = rng.choice(authors)
        if i == 0:
            posts.append(dict(id=pid, author=author, serp_visible=True))
        else:
            posts.append(dict(id=pid, author=author, parent_id=rng.choice(ids)))
        ids.append(pid)
    return posts


def days_from_civil(year, month, day):
    """Days since 1970-01-01 from a civil date, no calendar library.

    Standard era/day-of-era arithmetic over the proleptic Gregorian
    calendar.
    """
    year -= month <= 2
    era = (year if year >= 0 else year - 399) // 400
    yoe = year - era * 400
    doy = (153 * (month + (-3 if month > 2 else 9)) + 2) // 5 + day - 1
    doe = yoe * 365 + yoe // 4 - yoe // 100 + doy
    return era * 146097 + doe - 719468


def quantiles_inclusive(values):
    """(q1, median, q3) via the stdlib's linear-interpolation quantiles."""
    import statistics

    if len(values) == 1:
        v = values[0]
        return v, v, v
    q1, median, q3 = statistics.quantiles(values, n=4, method="inclusive")
    return q1, median, q3


def distinct_count(items):
    """Set-size oracle via sort-and-scan rather than hashing."""
    ordered = sorted(items)
    count = 0
    previous = object()
    for item in ordered:
        if item != previous:
            count += 1
            previous = item
    return count

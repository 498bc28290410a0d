"""Small lenient HTML layer on top of html.parser.

Builds a minimal element tree that tolerates unclosed and stray tags,
enough for anchor/meta extraction and main-content text recovery. Not a
general DOM: no entity-reference table beyond the stdlib's, no CSS.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from html.parser import HTMLParser

VOID_TAGS = frozenset(
    "area base br col embed hr img input link meta param source track wbr".split()
)

# Tags that never contribute readable content.
NON_CONTENT_TAGS = frozenset(
    "script style noscript template nav header footer aside svg iframe form".split()
)

_CHARSET_META_RE = re.compile(
    rb"""<meta[^>]+charset\s*=\s*["']?\s*([a-zA-Z0-9_.:-]+)""", re.IGNORECASE
)
_XML_DECL_RE = re.compile(rb"""<\?xml[^>]*encoding\s*=\s*["']([a-zA-Z0-9_.:-]+)["']""")


class HtmlDecodingError(ValueError):
    """Input bytes could not be decoded; the message names the encoding."""


@dataclass
class Element:
    tag: str
    attrs: dict[str, str]
    children: list = field(default_factory=list)  # Element | str

    def iter(self):
        """Yield this element and all descendants, depth-first."""
        yield self
        for child in self.children:
            if isinstance(child, Element):
                yield from child.iter()

    def iter_tag(self, tag: str):
        for el in self.iter():
            if el.tag == tag:
                yield el

    def text(self, exclude=NON_CONTENT_TAGS) -> str:
        """Whitespace-collapsed text of the subtree, skipping ``exclude`` tags."""
        parts: list[str] = []
        self._collect_text(parts, exclude)
        return " ".join(" ".join(parts).split())

    def _collect_text(self, parts, exclude):
        for child in self.children:
            if isinstance(child, str):
                parts.append(child)
            elif child.tag not in exclude:
                child._collect_text(parts, exclude)

    def element_count(self) -> int:
        return sum(1 for _ in self.iter()) - 1

    def attr(self, name: str) -> str | None:
        return self.attrs.get(name)

    def classes(self) -> list[str]:
        return (self.attrs.get("class") or "").lower().split()


class _TreeBuilder(HTMLParser):
    def __init__(self):
        super().__init__(convert_charrefs=True)
        self.root = Element("[document]", {})
        self.stack = [self.root]

    def handle_starttag(self, tag, attrs):
        element = Element(tag, {k: (v if v is not None else "") for k, v in attrs})
        self.stack[-1].children.append(element)
        if tag not in VOID_TAGS:
            self.stack.append(element)

    def handle_startendtag(self, tag, attrs):
        self.stack[-1].children.append(
            Element(tag, {k: (v if v is not None else "") for k, v in attrs})
        )

    def handle_endtag(self, tag):
        # Pop back to the nearest matching open tag; ignore stray closers.
        for i in range(len(self.stack) - 1, 0, -1):
            if self.stack[i].tag == tag:
                del self.stack[i:]
                return

    def handle_data(self, data):
        if data:
            self.stack[-1].children.append(data)


def parse_html(text: str) -> Element:
    """Parse HTML text into an Element tree, tolerating malformed markup."""
    builder = _TreeBuilder()
    builder.feed(text)
    builder.close()
    return builder.root


def detect_encoding(body: bytes) -> str | None:
    """Declared charset from a meta tag or XML declaration, if any."""
    head = body[:4096]
    m = _CHARSET_META_RE.search(head) or _XML_DECL_RE.search(head)
    if m:
        return m.group(1).decode("ascii", "replace").lower()
    return None


def decode_html(body: bytes) -> str:
    """Decode HTML bytes using the declared charset, defaulting to UTF-8."""
    if isinstance(body, str):
        return body
    encoding = detect_encoding(body) or "utf-8"
    try:
        return body.decode(encoding)
    except (UnicodeDecodeError, LookupError) as exc:
        raise HtmlDecodingError(f"cannot decode document as {encoding}: {exc}") from exc


def find_links(root: Element) -> list[tuple[str, Element]]:
    """All (href, anchor element) pairs in document order."""
    return [(el.attrs["href"], el) for el in root.iter_tag("a") if el.attrs.get("href")]


def absolute_http_links(root: Element) -> list[str]:
    """hrefs that are absolute http(s) URIs, in document order."""
    out = []
    for href, _ in find_links(root):
        href = href.strip()
        if href.lower().startswith(("http://", "https://")):
            out.append(href)
    return out


def find_meta(root: Element) -> list[dict[str, str]]:
    """Attribute dicts of every meta tag, keys lowercased."""
    return [
        {k.lower(): v for k, v in el.attrs.items()} for el in root.iter_tag("meta")
    ]

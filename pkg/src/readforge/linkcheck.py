"""Post-emit crawler: every internal reference must resolve inside the site."""

from __future__ import annotations

from html.parser import HTMLParser
from pathlib import Path
from urllib.parse import urlsplit

_REF_ATTRS = {
    "a": "href",
    "link": "href",
    "script": "src",
    "img": "src",
    "audio": "src",
    "source": "src",
}


class _RefCollector(HTMLParser):
    def __init__(self) -> None:
        super().__init__()
        self.refs: list[str] = []

    def handle_starttag(self, tag: str, attrs: list[tuple[str, str | None]]) -> None:
        wanted = _REF_ATTRS.get(tag)
        if wanted is None:
            return
        for name, value in attrs:
            if name == wanted and value:
                self.refs.append(value)


def page_refs(html_text: str) -> list[str]:
    """All href/src values found in a page, in document order."""
    collector = _RefCollector()
    collector.feed(html_text)
    return collector.refs


def internal_refs(html_text: str) -> list[str]:
    """Page refs that point inside the site: relative, with query/fragment stripped."""
    internal = []
    for ref in page_refs(html_text):
        split = urlsplit(ref)
        if split.scheme or split.netloc:
            continue
        path = split.path
        if path:
            internal.append(path)
    return internal


def external_refs(html_text: str) -> list[str]:
    return [ref for ref in page_refs(html_text) if urlsplit(ref).scheme]


def find_dangling_links(output_dir: Path) -> list[str]:
    """Crawl every emitted page; report internal refs that resolve to nothing."""
    problems: list[str] = []
    root = output_dir.resolve()
    for page in sorted(root.rglob("*.html")):
        page_rel = page.relative_to(root)
        for ref in internal_refs(page.read_text(encoding="utf-8")):
            target = (page.parent / ref).resolve()
            if not target.is_relative_to(root):
                problems.append(f"{page_rel} -> {ref}: escapes the output directory")
            elif not target.is_file():
                problems.append(f"{page_rel} -> {ref}: missing file")
    return problems

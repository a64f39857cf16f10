#!/usr/bin/env python3
"""Write small synthetic PDF fixtures for the extraction tests.

Builds real PDFs (page tree, Flate-compressed content streams, Helvetica)
from lists of text lines, one list per page. Run from the repo root:

    python scripts/make_pdf_fixture.py
"""

from __future__ import annotations

import sys
import zlib
from pathlib import Path


def _content_stream(lines: list[str]) -> bytes:
    ops = ["BT", "/F1 11 Tf", "72 760 Td"]
    first = True
    for line in lines:
        if not first:
            ops.append("0 -14 Td")
        escaped = line.replace("\\", r"\\").replace("(", r"\(").replace(")", r"\)")
        ops.append(f"({escaped}) Tj")
        first = False
    ops.append("ET")
    return "\n".join(ops).encode("latin-1")


def build_pdf(pages: list[list[str]], compress: bool = True) -> bytes:
    """A minimal but valid PDF with one content stream per page."""
    objects: list[bytes] = []

    page_count = len(pages)
    first_page_num = 3
    font_num = first_page_num + 2 * page_count

    kids = " ".join(f"{first_page_num + 2 * i} 0 R" for i in range(page_count))
    objects.append(b"<< /Type /Catalog /Pages 2 0 R >>")
    objects.append(
        f"<< /Type /Pages /Kids [{kids}] /Count {page_count} >>".encode()
    )
    for i, lines in enumerate(pages):
        page_num = first_page_num + 2 * i
        content_num = page_num + 1
        objects.append(
            (
                f"<< /Type /Page /Parent 2 0 R /MediaBox [0 0 612 792] "
                f"/Resources << /Font << /F1 {font_num} 0 R >> >> "
                f"/Contents {content_num} 0 R >>"
            ).encode()
        )
        stream = _content_stream(lines)
        if compress:
            stream = zlib.compress(stream)
            head = f"<< /Length {len(stream)} /Filter /FlateDecode >>".encode()
        else:
            head = f"<< /Length {len(stream)} >>".encode()
        objects.append(head + b"\nstream\n" + stream + b"\nendstream")
    objects.append(b"<< /Type /Font /Subtype /Type1 /BaseFont /Helvetica >>")

    out = bytearray(b"%PDF-1.4\n")
    offsets = [0]
    for num, body in enumerate(objects, 1):
        offsets.append(len(out))
        out += f"{num} 0 obj\n".encode() + body + b"\nendobj\n"
    xref_pos = len(out)
    out += f"xref\n0 {len(objects) + 1}\n".encode()
    out += b"0000000000 65535 f \n"
    for off in offsets[1:]:
        out += f"{off:010d} 00000 n \n".encode()
    out += (
        f"trailer\n<< /Size {len(objects) + 1} /Root 1 0 R >>\n"
        f"startxref\n{xref_pos}\n%%EOF\n"
    ).encode()
    return bytes(out)


TWO_PAGE_FIXTURE = [
    [
        "Compact Survey Tools for Stream Processing",
        "Rivera, Dana; Okafor, Chidi",
        "Abstract",
        "We study compact tooling for stream processing surveys.",
        "The tool runs on commodity hardware.",
    ],
    [
        "1. Introduction",
        "Stream processing surveys take time (see Fig. 1).",
        "2. Conclusion",
        "Compact tooling makes surveys faster.",
    ],
]


def main() -> int:
    out_dir = Path(__file__).resolve().parent.parent / "tests" / "fixtures"
    out_dir.mkdir(parents=True, exist_ok=True)
    pdf_path = out_dir / "two_page_paper.pdf"
    pdf_path.write_bytes(build_pdf(TWO_PAGE_FIXTURE))
    print(f"wrote {pdf_path}")

    # A syntactically valid PDF whose single page draws no text at all.
    blank = build_pdf([[]], compress=False)
    (out_dir / "no_text_layer.pdf").write_bytes(blank)
    print(f"wrote {out_dir / 'no_text_layer.pdf'}")
    return 0


if __name__ == "__main__":
    sys.exit(main())

"""Minimal PDF text-layer extraction.

Covers the subset of PDF needed to pull page-ordered text out of digitally
produced documents: object parsing, FlateDecode streams, page-tree walking,
and the BT/ET text operators (Tj, TJ, ', ", Td, TD, T*). Text is assumed to
be written with a single-byte (Latin-1 compatible) encoding; scanned pages
and CID/Unicode-mapped fonts are out of scope, as is OCR.
"""

from __future__ import annotations

import re
import zlib


class PdfError(Exception):
    """The input is not a PDF this extractor can read."""


class PdfNoTextError(PdfError):
    """The PDF has no extractable text layer (likely scanned; OCR unsupported)."""


_OBJ_RE = re.compile(rb"(\d+)\s+\d+\s+obj\b", re.S)
_STREAM_RE = re.compile(rb"stream\r?\n")
_REF_RE = re.compile(rb"^(\d+)\s+\d+\s+R")


def _parse_objects(data: bytes) -> dict[int, bytes]:
    """Map object number -> raw object body (between 'obj' and 'endobj')."""
    objects: dict[int, bytes] = {}
    for match in _OBJ_RE.finditer(data):
        num = int(match.group(1))
        start = match.end()
        end = data.find(b"endobj", start)
        if end == -1:
            continue
        objects[num] = data[start:end]
    return objects


def _dict_value(body: bytes, key: bytes) -> bytes | None:
    """Raw value following /key in an object body (up to the next delimiter)."""
    idx = body.find(b"/" + key)
    if idx == -1:
        return None
    rest = body[idx + len(key) + 1 :].lstrip()
    if rest.startswith(b"["):
        depth = 0
        for i, ch in enumerate(rest):
            if ch == ord("["):
                depth += 1
            elif ch == ord("]"):
                depth -= 1
                if depth == 0:
                    return rest[: i + 1]
        return None
    if rest.startswith(b"/"):
        m = re.match(rb"/[^\s/\[\]<>()]*", rest)
        return m.group(0) if m else None
    m = re.match(rb"[^/\[\]<>\r\n]*", rest)
    return m.group(0).strip() if m else None

def _resolve_ref(value: bytes, objects: dict[int, bytes]) -> bytes | None:
    m = _REF_RE.match(value.strip())
    if m:
        return objects.get(int(m.group(1)))
    return value


def _stream_bytes(body: bytes, objects: dict[int, bytes]) -> bytes | None:
    """Decoded stream content of an object, honoring /Length and /Filter."""
    m = _STREAM_RE.search(body)
    if not m:
        return None
    start = m.end()
    length_raw = _dict_value(body, b"Length")
    raw: bytes | None = None
    if length_raw is not None:
        resolved = _resolve_ref(length_raw, objects)
        if resolved is not None:
            digits = re.search(rb"\d+", resolved)
            if digits:
                raw = body[start : start + int(digits.group(0))]
    if raw is None:
        end = body.rfind(b"endstream")
        if end == -1:
            return None
        raw = body[start:end].rstrip(b"\r\n")
    filt = _dict_value(body, b"Filter")
    if filt and b"FlateDecode" in filt:
        try:
            return zlib.decompress(raw)
        except zlib.error as exc:
            raise PdfError(f"bad FlateDecode stream: {exc}") from None
    return raw


def _page_order(objects: dict[int, bytes]) -> list[int]:
    """Page object numbers in page-tree order, with a scan fallback."""
    root_num = None
    for body in objects.values():
        if b"/Type" in body and b"/Catalog" in body:
            pages_ref = _dict_value(body, b"Pages")
            if pages_ref:
                m = _REF_RE.match(pages_ref)
                if m:
                    root_num = int(m.group(1))
                    break

    ordered: list[int] = []

    def walk(num: int) -> None:
        body = objects.get(num)
        if body is None:
            return
        if b"/Kids" in body:
            kids = _dict_value(body, b"Kids") or b""
            for ref in re.finditer(rb"(\d+)\s+\d+\s+R", kids):
                walk(int(ref.group(1)))
        elif b"/Page" in body:
            ordered.append(num)

    if root_num is not None:
        walk(root_num)
    if not ordered:
        for num, body in objects.items():
            if b"/Type" in body and re.search(rb"/Page\b", body):
                ordered.append(num)
    return ordered


_ESCAPES = {
    ord("n"): "\n",
    ord("r"): "\r",
    ord("t"): "\t",
    ord("b"): "\b",
    ord("f"): "\f",
    ord("("): "(",
    ord(")"): ")",
    ord("\\"): "\\",
}


def _read_literal_string(data: bytes, pos: int) -> tuple[str, int]:
    """Parse a (...) string starting at the open paren; returns (text, next_pos)."""
    out: list[str] = []
    depth = 1
    i = pos + 1
    while i < len(data) and depth > 0:
        ch = data[i]
        if ch == ord("\\"):
            i += 1
            if i >= len(data):
                break
            esc = data[i]
            if esc in _ESCAPES:
                out.append(_ESCAPES[esc])
                i += 1
            elif ord("0") <= esc <= ord("7"):
                digits = chr(esc)
                i += 1
                while i < len(data) and len(digits) < 3 and ord("0") <= data[i] <= ord("7"):
                    digits += chr(data[i])
                    i += 1
                out.append(chr(int(digits, 8)))
            elif esc in (ord("\n"), ord("\r")):
                i += 1  # line continuation
            else:
                out.append(chr(esc))
                i += 1
        elif ch == ord("("):
            depth += 1
            out.append("(")
            i += 1
        elif ch == ord(")"):
            depth -= 1
            if depth > 0:
                out.append(")")
            i += 1
        else:
            out.append(chr(ch))
            i += 1
    return "".join(out), i


def _read_hex_string(data: bytes, pos: int) -> tuple[str, int]:
    end = data.find(b">", pos)
    if end == -1:
        return "", len(data)
    digits = re.sub(rb"\s", b"", data[pos + 1 : end])
    if len(digits) % 2:
        digits += b"0"
    try:
        decoded = bytes.fromhex(digits.decode("ascii"))
    except ValueError:
        decoded = b""
    return decoded.decode("latin-1"), end + 1


_NUMBER_RE = re.compile(rb"[+-]?(?:\d+\.?\d*|\.\d+)")
_OPERATOR_RE = re.compile(rb"[A-Za-z'\"*]+")


def _extract_stream_text(content: bytes) -> str:
    """Run the text operators of one content stream, emitting lines."""
    out: list[str] = []
    operands: list[object] = []
    in_text = False
    i = 0
    n = len(content)

    def newline() -> None:
        if out and not out[-1].endswith("\n"):
            out.append("\n")

    while i < n:
        ch = content[i]
        if ch in b" \t\r\n\x00":
            i += 1
        elif ch == ord("%"):
            nl = content.find(b"\n", i)
            i = n if nl == -1 else nl + 1
        elif ch == ord("("):
            text, i = _read_literal_string(content, i)
            operands.append(text)
        elif ch == ord("<"):
            if content.startswith(b"<<", i):
                end = content.find(b">>", i)
                i = n if end == -1 else end + 2
            else:
                text, i = _read_hex_string(content, i)
                operands.append(text)
        elif ch in b"[]":
            operands.append(chr(ch))
            i += 1
        elif ch == ord("/"):
            m = re.match(rb"/[^\s/\[\]()<>{}%]*", content[i:])
            operands.append(m.group(0).decode("latin-1"))
            i += len(m.group(0))
        else:
            m = _NUMBER_RE.match(content, i)
            if m and not content[i : i + 1].isalpha():
                operands.append(float(m.group(0)))
                i = m.end()
                continue
            m = _OPERATOR_RE.match(content, i)
            if not m:
                i += 1
                continue
            op = m.group(0)
            i = m.end()
            if op == b"BT":
                in_text = True
                operands.clear()
            elif op == b"ET":
                in_text = False
                newline()
                operands.clear()
            elif not in_text:
                operands.clear()
            elif op == b"Tj":
                if operands and isinstance(operands[-1], str):
                    out.append(operands[-1])
                operands.clear()
            elif op == b"TJ":
                for item in operands:
                    if isinstance(item, str) and item not in "[]":
                        out.append(item)
                operands.clear()
            elif op in (b"'", b'"'):
                newline()
                if operands and isinstance(operands[-1], str):
                    out.append(operands[-1])
                operands.clear()
            elif op == b"T*":
                newline()
                operands.clear()
            elif op in (b"Td", b"TD"):
                if len(operands) >= 2 and isinstance(operands[-1], float):
                    if operands[-1] != 0:
                        newline()
                operands.clear()
            else:
                operands.clear()
    return "".join(out)


def extract_page_texts(data: bytes) -> list[str]:
    """Text of each page, in page order.

    Raises PdfError for non-PDF input and PdfNoTextError when no page yields
    any text (advice: OCR is out of scope for this tool).
    """
    if not data.lstrip().startswith(b"%PDF"):
        raise PdfError("not a PDF: missing %PDF header")
    objects = _parse_objects(data)
    if not objects:
        raise PdfError("no objects found in PDF")
    pages = _page_order(objects)
    if not pages:
        raise PdfError("no pages found in PDF")

    texts: list[str] = []
    for num in pages:
        body = objects[num]
        contents_ref = _dict_value(body, b"Contents")
        chunks: list[bytes] = []
        if contents_ref:
            for ref in re.finditer(rb"(\d+)\s+\d+\s+R", contents_ref):
                target = objects.get(int(ref.group(1)))
                if target is None:
                    continue
                stream = _stream_bytes(target, objects)
                if stream:
                    chunks.append(stream)
        page_text = "".join(_extract_stream_text(c) for c in chunks)
        texts.append(page_text.strip("\n"))

    if not any(t.strip() for t in texts):
        raise PdfNoTextError(
            "PDF has no extractable text layer; scanned documents need OCR, "
            "which this tool does not provide"
        )
    return texts

#!/usr/bin/env python3
"""Regenerate core/src/translit_table.inc.

The table is checked in; this script only documents how it was produced.
Requires the `unidecode` package. Covers Latin-1 Supplement, Latin
Extended-A/B and Latin Extended Additional.
"""
import pathlib
import sys

from unidecode import unidecode

RANGES = [(0x0080, 0x024F), (0x1E00, 0x1EFF)]


def c_escape(s: str) -> str:
    out = []
    for ch in s:
        if ch in '\\"':
            out.append('\\' + ch)
        elif 0x20 <= ord(ch) < 0x7F:
            out.append(ch)
        else:
            out.append('\\x%02x' % ord(ch))
    return ''.join(out)


def main() -> int:
    target = pathlib.Path(__file__).resolve().parent.parent / 'core' / 'src' / 'translit_table.inc'
    lines = ['// Generated by scripts/gen_translit_table.py. Do not edit by hand.',
             '// {first code point, ASCII replacement}', '']
    for lo, hi in RANGES:
        for cp in range(lo, hi + 1):
            rep = unidecode(chr(cp))
            if rep == '[?]' or any(ord(c) > 0x7F for c in rep):
                rep = ''
            lines.append('{0x%04X, "%s"},' % (cp, c_escape(rep)))
    target.write_text('\n'.join(lines) + '\n')
    return 0


if __name__ == '__main__':
    sys.exit(main())

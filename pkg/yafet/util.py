# This Source Code Form is subject to the terms of the Mozilla Public
# License, v. 2.0. If a copy of the MPL was not distributed with this
# file, You can obtain one at https://mozilla.org/MPL/2.0/.
from __future__ import annotations

import math
import re

from . import (
    ty,
)


def lattice_iter(total: int,
                 nparts: int,
                 minimum: int = 0,
                 ) -> ty.Iterator[ty.Tuple[int, ...]]:
    """
    Iterate over tuples of ``nparts`` integers, each at least ``minimum``,
    summing to ``total``, in lexicographic order.

    >>> list(lattice_iter(2, 2))
    [(0, 2), (1, 1), (2, 0)]
    >>> list(lattice_iter(3, 3, minimum=1))
    [(1, 1, 1)]
    """
    if nparts == 1:
        if total >= minimum:
            yield (total,)
        return
    for first in range(minimum, total - minimum * (nparts - 1) + 1):
        for rest in lattice_iter(total - first, nparts - 1, minimum):
            yield (first,) + rest


def binomial(n: int, k: int) -> int:
    return math.comb(n, k)


def format_float(x: float) -> str:
    """
    Shortest round-trip decimal representation, used for every float written
    to CSV output.

    >>> format_float(0.1)
    '0.1'
    """
    return repr(float(x))


_RANGE_RE = re.compile(r'^\s*(\d+)\s*(?:\.\.\s*(\d+)\s*)?$')


def parse_degree_range(spec: str) -> ty.List[int]:
    """
    Parse ``a..b`` (inclusive) or a single integer.

    >>> parse_degree_range('2..4')
    [2, 3, 4]
    >>> parse_degree_range('7')
    [7]
    """
    m = _RANGE_RE.match(spec)
    if not m:
        msg = f'invalid degree range: {spec!r}'
        raise ValueError(msg)
    lo = int(m.group(1))
    hi = int(m.group(2)) if m.group(2) is not None else lo
    if hi < lo:
        msg = f'empty degree range: {spec!r}'
        raise ValueError(msg)
    return list(range(lo, hi + 1))


def split_list(spec: str) -> ty.List[str]:
    """
    Split a comma separated list, keeping commas inside parentheses.

    >>> split_list('point,integral(0),integral(6)')
    ['point', 'integral(0)', 'integral(6)']
    """
    items: ty.List[str] = []
    depth = 0
    current = ''
    for ch in spec:
        if ch == '(':
            depth += 1
        elif ch == ')':
            depth -= 1
        if ch == ',' and depth == 0:
            items.append(current.strip())
            current = ''
        else:
            current += ch
    if current.strip():
        items.append(current.strip())
    return items

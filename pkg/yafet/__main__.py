# This Source Code Form is subject to the terms of the Mozilla Public
# License, v. 2.0. If a copy of the MPL was not distributed with this
# file, You can obtain one at https://mozilla.org/MPL/2.0/.
from __future__ import annotations

import sys

from . import (
    climodule,
    ty,
)


def run() -> ty.NoReturn:
    sys.exit(climodule.run(sys.argv[1:]))


if __name__ == '__main__':
    run()

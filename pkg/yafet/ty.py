# This Source Code Form is subject to the terms of the Mozilla Public
# License, v. 2.0. If a copy of the MPL was not distributed with this
# file, You can obtain one at https://mozilla.org/MPL/2.0/.
"""
Utility module to contain common typing-related utilities. Members of the
typing module should be exported by this module and be used as this module's
attributes. Array aliases for numpy are also kept here so that every module
spells them the same way.
"""
from typing import (
    Any as Any,
    Callable as Callable,
    Dict as Dict,
    Iterable as Iterable,
    Iterator as Iterator,
    List as List,
    Literal as Literal,
    Mapping as Mapping,
    NamedTuple as NamedTuple,
    NoReturn as NoReturn,
    Optional as Optional,
    Protocol as Protocol,
    Sequence as Sequence,
    TextIO as TextIO,
    Tuple as Tuple,
    Type as Type,
    TypeVar as TypeVar,
    Union as Union,
    cast as cast,
)

import numpy as np
import numpy.typing as npt


FloatArray = npt.NDArray[np.float64]
IntArray = npt.NDArray[np.int64]
BoolArray = npt.NDArray[np.bool_]
ArrayLike = npt.ArrayLike

MultiIndex = Tuple[int, ...]
Tabulation = Dict[MultiIndex, FloatArray]

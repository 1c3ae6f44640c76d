# This Source Code Form is subject to the terms of the Mozilla Public
# License, v. 2.0. If a copy of the MPL was not distributed with this
# file, You can obtain one at https://mozilla.org/MPL/2.0/.
"""
On-disk cache of built elements.

Entries are addressed by the sha256 of the pickled element descriptor and
live under ``<path>/entries/<hash>/``, next to a copy of the descriptor.
"""
from __future__ import annotations

import hashlib
import logging
import os
import pathlib
import shutil
import tempfile

import dill as pickle

from . import (
    elements,
    quadrature,
    ty,
)


logger = logging.getLogger()


CACHE_FORMAT = 2

DEFAULT_CACHE_DIR = pathlib.Path('.yafet', 'cache')


class ElementDescriptor(ty.NamedTuple):
    family: str
    dim: int
    degree: int
    variant: str
    tables: str = ''
    cache_format: int = CACHE_FORMAT


def describe(family: str,
             dim: int,
             degree: int,
             variant: ty.Optional[str] = None,
             ) -> ElementDescriptor:
    """
    Descriptor for the element :func:`elements.create_element` would build
    right now: the variant resolved to the family default and the digest of
    the active quadrature tables recorded.
    """
    if variant is None:
        variant = elements.default_variant(family)
    return ElementDescriptor(family, dim, degree, variant,
                             quadrature.active_tables_digest())


class ElementCache:
    def __init__(self,
                 path: ty.Union[pathlib.Path, str] = DEFAULT_CACHE_DIR,
                 hash_paranoid: bool = False,
                 ):
        """
        :param hash_paranoid: compare stored descriptors on lookup instead of
          trusting the hash alone.
        """
        self.__path = pathlib.Path(path)
        self.__hash_paranoid = hash_paranoid

    @property
    def path(self) -> pathlib.Path:
        return self.__path

    def __call__(self,
                 family: str,
                 dim: int,
                 degree: int,
                 variant: ty.Optional[str] = None,
                 ) -> elements.CiarletElement:
        """
        Return the cached element, building and storing it on a miss.
        """
        descriptor = describe(family, dim, degree, variant)
        elem = self.get(descriptor)
        if elem is not None:
            return elem
        elem = elements.create_element(family, dim, degree,
                                       descriptor.variant)
        self.put(descriptor, elem)
        return elem

    def entry_dir(self, descriptor: ElementDescriptor) -> pathlib.Path:
        digest = hashlib.sha256(pickle.dumps(tuple(descriptor))).hexdigest()
        return self.__path / 'entries' / digest

    def get(self,
            descriptor: ElementDescriptor,
            ) -> ty.Optional[elements.CiarletElement]:
        """
        Load an entry. Missing, unreadable and colliding entries are misses.
        """
        entry_dir = self.entry_dir(descriptor)
        try:
            if self.__hash_paranoid:
                with open(entry_dir / 'descriptor.pickle', 'rb') as f:
                    saved = pickle.load(f)
                if tuple(saved) != tuple(descriptor):
                    logger.warning(f'hash collision in {entry_dir}')
                    return None
            with open(entry_dir / 'element.pickle', 'rb') as f:
                elem = pickle.load(f)
        except FileNotFoundError:
            return None
        except Exception as e:
            logger.warning(f'ignoring unreadable cache entry {entry_dir}: {e}')
            return None
        if not isinstance(elem, elements.CiarletElement):
            logger.warning(f'ignoring foreign object in {entry_dir}')
            return None
        logger.debug(f'loaded {elem!r} from {entry_dir}')
        return elem

    def put(self,
            descriptor: ElementDescriptor,
            elem: elements.CiarletElement,
            ) -> None:
        entry_dir = self.entry_dir(descriptor)
        entry_dir.parent.mkdir(exist_ok=True, parents=True)

        tmpdir = pathlib.Path(tempfile.mkdtemp(dir=entry_dir.parent))
        try:
            with open(tmpdir / 'descriptor.pickle', 'wb') as f:
                pickle.dump(tuple(descriptor), f)
            with open(tmpdir / 'element.pickle', 'wb') as f:
                pickle.dump(elem, f)

            if entry_dir.exists():
                shutil.rmtree(entry_dir)
            os.replace(tmpdir, entry_dir)
        finally:
            if tmpdir.exists():
                shutil.rmtree(tmpdir)
        logger.debug(f'stored {elem!r} in {entry_dir}')

    def clear(self) -> None:
        if (self.__path / 'entries').exists():
            shutil.rmtree(self.__path / 'entries')

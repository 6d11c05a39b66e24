"""
Strata Cache Management for schubert-ed

This module provides the StrataCacheFile class, which stores complete W^P
enumerations on disk so that repeated scans of the same variety skip the
enumeration step. Files are content addressed by type, rank, excluded nodes
and program version; files written by another version are ignored.
"""

from abc import ABC
import base64
from filelock import FileLock, Timeout
import logging
import os
import json
from typing import Dict, List, Optional
from datetime import datetime

import numpy as np
from typing_extensions import override

from schubert_ed import version
from schubert_ed.coset import WpEnumeration, enumerate_wp
from schubert_ed.exception import StrataCacheError
from schubert_ed.rootsys import ParabolicSubset, RootSystem
from schubert_ed.weyl import DTYPE, WeylElement

# Constants for the cache file
CACHE_VERSION = 1
CACHE_MAGIC = 'SCHUBERT_ED_STRATA'
DEFAULT_CACHE_DIR = os.path.join('~', '.cache', 'schubert-ed')


def code_version() -> str:  # noqa: D103
    return version


class StrataCache(ABC):
    """
    Abstract base class for storing W^P enumerations.

    This class provides an interface for locking, loading and saving
    enumerations keyed by root system and parabolic subgroup.
    """

    def lock_cache(self):
        """
        Acquire a lock on the cache directory.

        Raises:
            StrataCacheError: If the lock cannot be acquired, indicating another process
                              is writing to the cache.
        """
        pass

    def unlock_cache(self):
        """
        Release the lock on the cache directory.
        """
        pass

    def load(self, rs: RootSystem, p: ParabolicSubset) -> Optional[WpEnumeration]:
        """
        Load a stored enumeration.

        Args:
            rs: The root system
            p: The parabolic subgroup

        Returns:
            WpEnumeration: The stored enumeration, or None if nothing usable is stored

        Raises:
            StrataCacheError: If the stored file is corrupted or fails its integrity check.
        """
        pass

    def save(self, enum: WpEnumeration) -> None:
        """
        Store a complete enumeration.

        Args:
            enum: The enumeration to store
        """
        pass

    def __enter__(self):
        self.lock_cache()
        return self

    def __exit__(self, exc_type, exc_value, traceback):
        self.unlock_cache()


class NullStrataCache(StrataCache):
    """A cache that stores nothing, used when caching is disabled."""

    @override
    def load(self, rs: RootSystem, p: ParabolicSubset) -> Optional[WpEnumeration]:  # noqa: D102
        return None


class StrataCacheFile(StrataCache):
    """
    Stores enumerations as versioned JSON files in a cache directory.

    Each stratum is written as the base64 encoding of its concatenated
    action matrices, in the same sorted order as in memory.

    Attributes:
        cache_dir (str): Directory holding the cache files
    """

    def __init__(self, cache_dir: str = DEFAULT_CACHE_DIR):
        """
        Initialize the StrataCacheFile.

        Args:
            cache_dir: Directory where cache files are stored; '~' is expanded
        """
        self.cache_dir = os.path.expanduser(cache_dir)
        self.lock = None
        self.lock_file_path = os.path.join(self.cache_dir, '.strata.lock')

    def file_name(self, rs: RootSystem, p: ParabolicSubset) -> str:
        """Return the path of the cache file for a root system and parabolic subgroup."""
        excluded = '-'.join(str(node) for node in sorted(p.excluded))
        tag = ''.join(c if c.isalnum() or c == '.' else '_' for c in code_version())
        return os.path.join(self.cache_dir, f'{rs.name}_x{excluded}_v{tag}.json')

    @override
    def lock_cache(self):  # noqa: D102
        try:
            os.makedirs(self.cache_dir, exist_ok=True)
            self.lock = FileLock(self.lock_file_path)
            self.lock.acquire(blocking=False)
        except Timeout:
            logging.error('Strata cache lock file already exists. Another process may be writing.')
            raise StrataCacheError('Strata cache lock file already exists. Another process may be writing.')

    @override
    def unlock_cache(self):  # noqa: D102
        if self.lock:
            self.lock.release()

    @override
    def load(self, rs: RootSystem, p: ParabolicSubset) -> Optional[WpEnumeration]:  # noqa: D102
        path = self.file_name(rs, p)
        if not os.path.exists(path):
            logging.info(f'No cached strata for {rs.name} P{p}')
            return None

        try:
            with open(path, 'r') as f:
                data = json.load(f)
        except Exception as e:
            logging.error(f'Error loading strata cache: {e}')
            raise StrataCacheError(f'Error loading strata cache file {path}: {e}')

        meta = data.get('_meta', {}) if isinstance(data, dict) else {}
        if meta.get('magic') != CACHE_MAGIC:
            raise StrataCacheError(
                f'Cache file has incorrect magic number. Expected {CACHE_MAGIC}, got {meta.get("magic")}')
        file_version = meta.get('version', 0)
        if file_version > CACHE_VERSION:
            raise StrataCacheError(f'Cache file version {file_version} is newer than current version {CACHE_VERSION}.')
        if meta.get('code_version') != code_version():
            logging.info(f'Ignoring stale cache file {path} from version {meta.get("code_version")}')
            return None

        enum = self._decode(rs, p, data.get('strata', {}), meta)
        expected = enum.expected_count()
        if enum.total_count != expected:
            raise StrataCacheError(
                f'Cache file {path} holds {enum.total_count} elements, but |W|/|W_P| = {expected}')
        logging.info(f'Loaded {enum.total_count} cached elements for {rs.name} P{p}')
        return enum

    @override
    def save(self, enum: WpEnumeration) -> None:  # noqa: D102
        if not enum.is_complete:
            logging.debug(f'Not caching incomplete enumeration of {enum.rs.name} P{enum.parabolic}')
            return
        path = self.file_name(enum.rs, enum.parabolic)
        try:
            os.makedirs(self.cache_dir, exist_ok=True)
            data = {
                '_meta': self._build_metadata(enum),
                'strata': {
                    str(length): base64.b64encode(b''.join(u.key for u in stratum)).decode('ascii')
                    for length, stratum in enum.strata.items()
                }
            }
            with open(path, 'w') as f:
                json.dump(data, f)
            logging.info(f'Saved {enum.total_count} elements to {path}')
        except Exception as e:
            logging.error(f'Error saving strata cache: {e}')

    def entries(self) -> List[Dict]:
        """Return the metadata block of every cache file in the directory."""
        result = []
        if not os.path.isdir(self.cache_dir):
            return result
        for name in sorted(os.listdir(self.cache_dir)):
            if not name.endswith('.json'):
                continue
            path = os.path.join(self.cache_dir, name)
            try:
                with open(path, 'r') as f:
                    meta = json.load(f).get('_meta', {})
            except Exception as e:
                logging.warning(f'Unreadable cache file {path}: {e}')
                meta = {}
            result.append({'file': name, 'size': os.path.getsize(path), **meta})
        return result

    def clear(self) -> int:
        """Delete every cache file; returns the number of files removed."""
        removed = 0
        for entry in self.entries():
            os.remove(os.path.join(self.cache_dir, entry['file']))
            removed += 1
        logging.info(f'Removed {removed} cache files from {self.cache_dir}')
        return removed

    @staticmethod
    def _decode(rs: RootSystem, p: ParabolicSubset, strata: Dict[str, str], meta: Dict) -> WpEnumeration:
        gram = rs.gram.astype(np.float64)
        decoded = {}
        try:
            for length, blob in strata.items():
                matrices = np.frombuffer(base64.b64decode(blob), dtype=DTYPE).reshape(-1, rs.rank, rs.rank)
                inverses = np.rint(np.linalg.solve(
                    gram, np.transpose(matrices, (0, 2, 1)).astype(np.float64) @ gram)).astype(DTYPE)
                decoded[int(length)] = [WeylElement(rs, m.copy(), inv, int(length))
                                        for m, inv in zip(matrices, inverses)]
        except (ValueError, TypeError) as e:
            raise StrataCacheError(f'Corrupted strata in cache file: {e}')
        return WpEnumeration(rs, p, decoded, int(meta.get('dimension', max(decoded))))

    @staticmethod
    def _build_metadata(enum: WpEnumeration):
        """
        Generate metadata for a cache file.

        Returns:
            dict: Version, magic number, creation time, program name and a summary of the enumeration.
        """
        return {
            'version': CACHE_VERSION,
            'magic': CACHE_MAGIC,
            'code_version': code_version(),
            'created': str(datetime.now()),
            'program': 'schubert-ed',
            'family': enum.rs.family.value,
            'rank': enum.rs.rank,
            'excluded': sorted(enum.parabolic.excluded),
            'counts': enum.counts,
            'dimension': enum.dimension,
            'truncated': enum.truncated,
        }


def load_or_enumerate(rs: RootSystem, p: ParabolicSubset, cache: Optional[StrataCache] = None,
                      max_elements: Optional[int] = None, deadline: Optional[float] = None) -> WpEnumeration:
    """
    Return the enumeration of W^P, reading it from the cache when possible.

    Freshly computed complete enumerations are written back to the cache.

    Raises:
        StrataCacheError: If a cache file exists but cannot be trusted.
    """
    cache = cache or NullStrataCache()
    enum = cache.load(rs, p)
    if enum is None:
        enum = enumerate_wp(rs, p, max_elements=max_elements, deadline=deadline)
        cache.save(enum)
    return enum


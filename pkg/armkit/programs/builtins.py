"""Named operations that DSL `use name = builtin(key)` headers resolve."""
import importlib
import logging
from functools import lru_cache
from typing import Callable, Dict, List, Optional

from armkit.errors import GenerationError
from armkit.machine.program import Operation

logger = logging.getLogger(__name__)

_FACTORIES: Dict[str, Callable[[], Operation]] = {}

# modules whose import registers their operations
_PROVIDERS = (
    "armkit.programs.ltwo",
    "armkit.programs.graph",
    "armkit.programs.sorting",
    "armkit.programs.nondet",
    "armkit.programs.qsat",
)


def builtin(key: str):
    """Register a zero-argument operation factory under `key`; built once."""
    def register(factory: Callable[[], Operation]) -> Callable[[], Operation]:
        cached = lru_cache(maxsize=None)(factory)
        _FACTORIES[key] = cached
        return cached
    return register


@lru_cache(maxsize=None)
def _load_providers() -> None:
    for module in _PROVIDERS:
        importlib.import_module(module)


def resolve_builtin(key: str) -> Operation:
    _load_providers()
    factory = _FACTORIES.get(key)
    if factory is None:
        raise GenerationError(f"unknown builtin operation {key!r}")
    op = factory()
    logger.debug("resolved builtin %s", key)
    return op


def builtin_keys() -> List[str]:
    _load_providers()
    return sorted(_FACTORIES)


def key_of(op: Operation) -> Optional[str]:
    """Registry key of an already built operation, if it is a builtin."""
    for key, factory in _FACTORIES.items():
        if factory.cache_info().currsize and factory() is op:
            return key
    return None

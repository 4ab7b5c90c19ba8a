"""Name-keyed registries for models and check suites."""

from typing import Dict, Generic, List, Type, TypeVar

T = TypeVar("T")


class Registry(Generic[T]):
    """
    Registry of plugin classes keyed by the ``name`` of their instances.

    Subclasses set ``kind`` for messages and ``missing_error`` for the
    exception raised by :meth:`get`.
    """

    kind: str = "entry"
    missing_error: Type[Exception] = ValueError

    def __init__(self):
        """Initialize an empty registry."""
        self._entries: Dict[str, Type[T]] = {}

    def register(self, entry_class: Type[T]) -> None:
        """
        Register a new plugin class.

        Args:
            entry_class: Class to register; it is instantiated once to read its name

        Raises:
            ValueError: If the name is already registered
        """
        name = entry_class().name

        if name in self._entries:
            raise ValueError(f"{self.kind.capitalize()} '{name}' is already registered")

        self._entries[name] = entry_class

    def unregister(self, name: str) -> None:
        """
        Unregister a plugin.

        Raises:
            KeyError: If the name is not registered
        """
        if name not in self._entries:
            raise KeyError(f"{self.kind.capitalize()} '{name}' not found")

        del self._entries[name]

    def get(self, name: str) -> T:
        """
        Get a fresh plugin instance by name.

        Raises:
            ValueError: If the name is not registered (as ``missing_error``)
        """
        if name not in self._entries:
            available = ", ".join(self.names())
            raise self.missing_error(f"Unknown {self.kind} '{name}'. Available {self.kind}s: {available}")
        return self._entries[name]()

    def names(self) -> List[str]:
        """Sorted list of registered names."""
        return sorted(self._entries.keys())

    def info(self) -> Dict[str, str]:
        """Mapping from name to description, sorted by name."""
        return {name: self._entries[name]().description for name in self.names()}

    def __contains__(self, name: str) -> bool:
        return name in self._entries

    def __len__(self) -> int:
        return len(self._entries)

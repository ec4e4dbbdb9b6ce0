#
# Copyright 2021 Splunk Inc.
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
# http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.
#

"""This module provides some common used patterns."""

from typing import Callable, Dict, Iterator

__all__ = ["Singleton", "Registry", "RegistryException"]


class Singleton(type):
    """Singleton meta class.

    Examples:
       >>> class Test(metaclass=Singleton):
       >>>     def __init__(self):
       >>>         pass
    """

    def __init__(cls, name, bases, attrs):
        super().__init__(name, bases, attrs)
        cls._instance = None

    def __call__(cls, *args, **kwargs):
        if cls._instance is None:
            cls._instance = super().__call__(*args, **kwargs)
        return cls._instance


class RegistryException(Exception):
    """Exception raised by Registry class."""

    pass


class Registry:
    """Name to factory registry with a decorator interface.

    Factories are built lazily on every `get`, so registered objects never
    share mutable state between callers.

    Examples:
       >>> fixtures = Registry("region")
       >>> @fixtures.register("THM8_MACWT")
       >>> def _thm8():
       >>>     return ...
       >>> fixtures.get("THM8_MACWT")
    """

    def __init__(self, kind: str):
        self._kind = kind
        self._factories: Dict[str, Callable] = {}

    def register(self, name: str) -> Callable:
        def decorator(factory: Callable) -> Callable:
            if name in self._factories:
                raise RegistryException(f"Duplicate {self._kind} id: {name}.")
            self._factories[name] = factory
            return factory

        return decorator

    def get(self, name: str, **kwargs):
        try:
            factory = self._factories[name]
        except KeyError:
            raise RegistryException(
                "Unknown {} id: {}, expected one of {}.".format(
                    self._kind, name, ", ".join(self._factories)
                )
            )
        return factory(**kwargs)

    def names(self) -> Iterator[str]:
        return iter(self._factories)

    def __contains__(self, name: str) -> bool:
        return name in self._factories

# encoding:utf-8
"""
dict conversion shared by every configuration dataclass

each config record is a dataclass mixing in :class:`ConfigMixin`,
nested records are declared in ``_nested`` and runtime-only fields
(callables) in ``_transient``.
"""
import dataclasses
import enum

import numpy as np

from .exceptions import ConfigError


def to_plain(value):
    """
    convert config values into json friendly python objects
    :param value: any config value
    :return: dict, list, str, float, int, bool or None
    """
    if isinstance(value, ConfigMixin):
        return value.to_dict()
    if isinstance(value, enum.Enum):
        return value.value
    if isinstance(value, np.ndarray):
        return value.tolist()
    if isinstance(value, np.generic):
        return value.item()
    if isinstance(value, (list, tuple)):
        return [to_plain(item) for item in value]
    if isinstance(value, dict):
        return {key: to_plain(item) for key, item in value.items()}
    return value


def _join(path, key):
    return "%s.%s" % (path, key) if path else str(key)


class ConfigMixin(object):
    """
    to_dict / from_dict for dataclass config records
    """
    _nested = {}
    _transient = ()

    @classmethod
    def field_names(cls):
        return [f.name for f in dataclasses.fields(cls) if f.name not in cls._transient]

    def to_dict(self) -> dict:
        """
        :return: dict, transient fields excluded
        """
        return {name: to_plain(getattr(self, name)) for name in self.field_names()}

    @classmethod
    def from_dict(cls, data, path=""):
        """
        build the record from a dict, unknown keys are rejected
        :param data: dict
        :param path: dotted path of ``data`` inside the scenario, used in errors
        :return: config instance
        """
        if not isinstance(data, dict):
            raise ConfigError("%s must be a mapping" % (path or cls.__name__))

        names = cls.field_names()
        unknown = sorted(set(data) - set(names))
        if unknown:
            raise ConfigError("unknown config path %s" % _join(path, unknown[0]))

        kwargs = {}
        for key, value in data.items():
            nested = cls._nested.get(key)
            if nested is not None and value is not None:
                if isinstance(nested, list):
                    if not isinstance(value, list):
                        raise ConfigError("%s must be a list" % _join(path, key))
                    value = [nested[0].from_dict(item, _join(_join(path, key), index))
                             for index, item in enumerate(value)]
                else:
                    value = nested.from_dict(value, _join(path, key))
            kwargs[key] = value
        try:
            return cls(**kwargs)
        except TypeError as exc:
            raise ConfigError("%s: %s" % (path or cls.__name__, exc))

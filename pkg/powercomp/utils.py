# encoding:utf-8
import itertools
import json
import os
import tempfile

from .exceptions import ConfigError, RepeatedValueError


def check_array_repeated(array):
    """
    check array repeated keys, if exist repeated keys will raise RepeatedValueError
    :param array: [(key,value),....]
    :raise RepeatedValueError
    """
    if not array:
        return
    keys, _ = itertools.zip_longest(*array)
    keys_dict = {}
    for key in keys:
        if key in keys_dict:
            raise RepeatedValueError("repeated value: %s" % key)
        else:
            keys_dict.setdefault(key)


def parse_value(text: str):
    """
    parse an override value, json literals first, plain string otherwise

    >>> parse_value("-1"), parse_value("true"), parse_value("implied")
    ... (-1, True, 'implied')
    """
    try:
        return json.loads(text)
    except ValueError:
        return text


def parse_override(text: str):
    """
    split ``key=value`` into (key, parsed value)
    :param text: str
    :return: tuple
    """
    key, sep, value = text.partition("=")
    key = key.strip()
    if not sep or not key:
        raise ConfigError("override must look like key=value: %r" % text)
    return key, parse_value(value.strip())


def set_dotted(data: dict, path: str, value):
    """
    assign ``value`` at a dotted path of nested dicts and lists,
    the path must already exist
    :param data: nested dict
    :param path: "compensator.enabled", "disturbances.0.magnitude"
    :param value: new value
    """
    parts = path.split(".")
    node = data
    walked = []
    for part in parts[:-1]:
        node = _child(node, part, walked, path)
        walked.append(part)
        if node is None:
            raise ConfigError("unknown config path %s: section %s is disabled"
                              % (path, ".".join(walked)))
    last = parts[-1]
    if isinstance(node, list):
        index = _index(node, last, path)
        node[index] = value
    elif isinstance(node, dict) and last in node:
        node[last] = value
    else:
        raise ConfigError("unknown config path %s" % path)


def _child(node, part, walked, path):
    if isinstance(node, dict):
        if part not in node:
            raise ConfigError("unknown config path %s" % path)
        return node[part]
    if isinstance(node, list):
        return node[_index(node, part, path)]
    raise ConfigError("unknown config path %s" % path)


def _index(node, part, path):
    try:
        index = int(part)
    except ValueError:
        raise ConfigError("unknown config path %s: %s is not a list index" % (path, part))
    if not 0 <= index < len(node):
        raise ConfigError("unknown config path %s: index %d out of range" % (path, index))
    return index


def atomic_write(path, data, mode="w"):
    """
    write to a temp file next to ``path`` then rename it into place
    :param path: target file path
    :param data: str or bytes
    :param mode: "w" or "wb"
    """
    directory = os.path.dirname(os.path.abspath(path))
    os.makedirs(directory, exist_ok=True)
    fd, temp_path = tempfile.mkstemp(dir=directory, prefix=".tmp-")
    try:
        if "b" in mode:
            with os.fdopen(fd, mode) as f:
                f.write(data)
        else:
            with os.fdopen(fd, mode, encoding="utf-8", newline="") as f:
                f.write(data)
        os.replace(temp_path, path)
    except BaseException:
        if os.path.exists(temp_path):
            os.remove(temp_path)
        raise

# encoding:utf-8
import abc
import json

import msgpack
import numpy as np

from .config import to_plain
from .exceptions import SerializerError


class BaseSerializer(abc.ABC):
    """
    The base serializer class,
    only defines the signature for loads and dumps
    """

    @abc.abstractmethod
    def loads(self, data, *args, **kwargs):
        """
        Deserialize the data
        :param data: the structure data need to be
        """
        raise NotImplementedError()

    @abc.abstractmethod
    def dumps(self, data, *args, **kwargs):
        """
        Serialize ``data`` to kinds of type
        :param data:
        """
        raise NotImplementedError()


class MsgPackDecoder(object):
    """
    decode serializer data
    """

    def decode(self, obj):
        """
        :param obj:
        :return:obj
        """
        if "__cls__" in obj:
            decode_func = getattr(self, "decode_%s" % obj["__cls__"], None)
            if decode_func is None:
                raise SerializerError("unknown message-pack class tag: %s" % obj["__cls__"])
            return decode_func(obj)
        return obj

    def decode_ndarray(self, obj):
        return np.frombuffer(obj["data"], dtype=np.dtype(obj["dtype"])).reshape(obj["shape"]).copy()

    def decode_complex(self, obj):
        return complex(obj["re"], obj["im"])


class MsgPackEncoder(object):
    """
    encode the data type to the message pack format
    """

    def encode(self, obj):
        """
        :param obj:
        :return: dict
        """
        if isinstance(obj, np.ndarray):
            if obj.dtype.hasobject or obj.dtype.names:
                raise SerializerError("only plain numeric arrays can be packed")
            return {"__cls__": "ndarray", "dtype": obj.dtype.str,
                    "shape": list(obj.shape), "data": obj.tobytes()}
        elif isinstance(obj, complex):
            return {"__cls__": "complex", "re": obj.real, "im": obj.imag}
        elif isinstance(obj, np.generic):
            return obj.item()
        raise SerializerError("can't serialize type %s" % type(obj).__name__)


class MsgPackSerializer(BaseSerializer):
    """
    MessagePack serializer, used for worker payloads of parameter sweeps
    """

    def loads(self, data, *args, **kwargs):
        """
        deserializer data from message-pack format
        :param data: bytes
        :return:obj
        """
        return msgpack.unpackb(data, raw=False, object_hook=MsgPackDecoder().decode, **kwargs)

    def dumps(self, data, *args, **kwargs):
        """
        serializer data to message-pack format
        :param data: obj
        :return: bytes
        """
        return msgpack.packb(data, default=MsgPackEncoder().encode, use_bin_type=True, **kwargs)


class JsonSerializer(BaseSerializer):
    """
    json text for scenario files and metrics reports,
    key order is kept so the output is stable across runs
    """

    def __init__(self, indent=2):
        self.indent = indent

    def loads(self, data, *args, **kwargs):
        try:
            return json.loads(data, *args, **kwargs)
        except ValueError as exc:
            raise SerializerError("invalid json document: %s" % exc)

    def dumps(self, data, *args, **kwargs):
        try:
            return json.dumps(to_plain(data), indent=self.indent, allow_nan=False, **kwargs) + "\n"
        except (TypeError, ValueError) as exc:
            raise SerializerError("can't serialize to json: %s" % exc)

# encoding:utf-8
import math
import unittest

import numpy as np
import numpy.testing

from powercomp import serializers
from powercomp.compensator import CompensatorConfig, CompensatorMode
from powercomp.exceptions import SerializerError


class MsgPackSerializersTests(unittest.TestCase):
    def setUp(self):
        self.msgpack_serializer = serializers.MsgPackSerializer()

    def test_loads_and_dumps(self):
        obj = {"name": "second-order", "overrides": [["a", -1], ["compensator.enabled", True]],
               "options": {"seed": None, "fs": 1000.0}}
        encode_data = self.msgpack_serializer.dumps(obj)
        decode_data = self.msgpack_serializer.loads(encode_data)
        self.assertDictEqual(obj, decode_data)

    def test_ndarray(self):
        obj = {"data": np.linspace(0.0, 1.0, 7).reshape(7, 1)}
        decode_data = self.msgpack_serializer.loads(self.msgpack_serializer.dumps(obj))
        numpy.testing.assert_array_equal(decode_data["data"], obj["data"])
        self.assertEqual(decode_data["data"].dtype, np.float64)
        self.assertTrue(decode_data["data"].flags.writeable)

    def test_complex(self):
        obj = {"gain": complex(0.25, -1.5)}
        decode_data = self.msgpack_serializer.loads(self.msgpack_serializer.dumps(obj))
        self.assertEqual(decode_data["gain"], obj["gain"])

    def test_numpy_scalar(self):
        decode_data = self.msgpack_serializer.loads(self.msgpack_serializer.dumps({"n": np.int64(3)}))
        self.assertEqual(decode_data, {"n": 3})

    def test_unicode(self):
        obj = {"data": "ω̃"}
        encode_data = self.msgpack_serializer.dumps(obj)
        decode_data = self.msgpack_serializer.loads(encode_data)
        self.assertDictEqual(obj, decode_data)

    def test_unsupported(self):
        with self.assertRaises(SerializerError):
            self.msgpack_serializer.dumps({"data": object()})

    def test_unknown_tag(self):
        data = self.msgpack_serializer.dumps({"__cls__": "decimal", "value": "1.2"})
        with self.assertRaises(SerializerError):
            self.msgpack_serializer.loads(data)


class JsonSerializersTests(unittest.TestCase):
    def setUp(self):
        self.json_serializer = serializers.JsonSerializer()

    def test_loads_and_dumps(self):
        obj = {"b": 1, "a": [1.5, None, True], "c": {"d": "e"}}
        text = self.json_serializer.dumps(obj)
        self.assertTrue(text.endswith("\n"))
        self.assertLess(text.index('"b"'), text.index('"a"'))
        self.assertDictEqual(self.json_serializer.loads(text), obj)

    def test_config_record(self):
        config = CompensatorConfig(mode=CompensatorMode.HIGHER_ORDER, l_weight=2.0)
        data = self.json_serializer.loads(self.json_serializer.dumps(config))
        self.assertEqual(data["mode"], "higher_order")
        self.assertNotIn("forward_gain", data)
        self.assertEqual(CompensatorConfig.from_dict(data), config)

    def test_numpy_values(self):
        data = self.json_serializer.loads(self.json_serializer.dumps({"x": np.arange(3), "y": np.float64(0.5)}))
        self.assertEqual(data, {"x": [0, 1, 2], "y": 0.5})

    def test_nan(self):
        with self.assertRaises(SerializerError):
            self.json_serializer.dumps({"x": math.nan})

    def test_invalid(self):
        with self.assertRaises(SerializerError):
            self.json_serializer.loads("{not json")

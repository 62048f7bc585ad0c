# encoding:utf-8
import numpy as np

from powercomp.exceptions import TraceError
from .base import TraceBase

TRACE_DTYPE = np.dtype([("t", "float64"), ("y", "float64"), ("y_noisy", "float64"),
                        ("u", "float64"), ("u_hat", "float64"), ("v", "float64")])


class SimTrace(TraceBase):
    """
    Simulation record backed by a preallocated numpy structured array

    rows must be appended with strictly increasing timestamps,
    a run that stops early keeps its rows and sets ``truncated``.
    """

    def __init__(self, max_length, metadata=None, dtype=TRACE_DTYPE,
                 timestamp_column_name="t"):
        """
        :param max_length: int, capacity in rows
        :param metadata: dict, configuration echo of the run
        :param dtype: numpy.dtype of a row
        :param timestamp_column_name: timestamp column name
        """
        self.dtype = np.dtype(dtype)
        if timestamp_column_name not in self.dtype.names:
            raise TraceError("dtype has no %s column" % timestamp_column_name)
        self.timestamp_column_name = timestamp_column_name
        self.names = list(self.dtype.names)
        self.max_length = int(max_length)
        self.metadata = dict(metadata or {})
        self.events = []
        self.truncated = False
        self.failure = None
        self._data = np.zeros(self.max_length, dtype=self.dtype)
        self._size = 0

    @property
    def array(self):
        return self._data[:self._size]

    def column(self, name):
        return self.array[name]

    def _check_timestamp(self, timestamp):
        if self._size and not timestamp > self._data[self._size - 1][self.timestamp_column_name]:
            raise TraceError("timestamps must be strictly increasing -> timestamp: %r" % timestamp)

    def add(self, row):
        """
        append one row
        :param row: tuple in dtype order
        """
        if len(row) != len(self.names):
            raise TraceError("row needs %d values, got %d" % (len(self.names), len(row)))
        if self._size >= self.max_length:
            raise TraceError("trace is full (%d rows)" % self.max_length)
        timestamp = row[self.names.index(self.timestamp_column_name)]
        self._check_timestamp(timestamp)
        self._data[self._size] = tuple(row)
        self._size += 1

    def add_many(self, array):
        """
        append a structured array of rows
        :param array: numpy.ndarray with the trace dtype
        """
        array = np.asarray(array, dtype=self.dtype)
        if array.size == 0:
            return
        timestamps = array[self.timestamp_column_name]
        if np.any(np.diff(timestamps) <= 0):
            raise TraceError("timestamps must be strictly increasing")
        self._check_timestamp(timestamps[0])
        if self._size + array.size > self.max_length:
            raise TraceError("trace is full (%d rows)" % self.max_length)
        self._data[self._size:self._size + array.size] = array
        self._size += array.size

    def add_event(self, event):
        if self.events and self.events[-1].kind == event.kind:
            raise TraceError("extremum kinds must alternate, got two %s events" % event.kind.value)
        self.events.append(event)

    def truncate(self, reason):
        """
        mark the run as stopped early
        :param reason: str
        """
        self.truncated = True
        self.failure = reason

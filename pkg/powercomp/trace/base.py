# encoding:utf-8
import abc

import numpy


class TraceBase(abc.ABC):
    """
    Time-indexed record base class

    rows are kept sorted by the ``timestamp_column_name`` column,
    every query below runs a binary search on that column.

    ``start_timestamp`` and ``end_timestamp`` are inclusive bounds,
    None means unbounded.
    """
    timestamp_column_name = "t"

    @property
    @abc.abstractmethod
    def array(self) -> numpy.ndarray:
        """
        :return: structured array of the recorded rows
        """
        raise NotImplementedError()

    @property
    def timestamps(self) -> numpy.ndarray:
        return self.array[self.timestamp_column_name]

    def length(self):
        """
        Time complexity: O(1)
        :return: int
        """
        return self.array.shape[0]

    def __len__(self):
        return self.length()

    def _bounds(self, start_timestamp=None, end_timestamp=None):
        timestamps = self.timestamps
        start = 0 if start_timestamp is None else int(numpy.searchsorted(timestamps, start_timestamp, "left"))
        end = len(timestamps) if end_timestamp is None else int(numpy.searchsorted(timestamps, end_timestamp, "right"))
        return start, max(start, end)

    def get_slice(self, start_timestamp=None, end_timestamp=None, limit=None, asc=True):
        """
        :param start_timestamp: start timestamp
        :param end_timestamp: end timestamp
        :param limit: int, max rows returned
        :param asc: bool, sorted as the timestamp values
        :return: numpy.ndarray
        """
        start, end = self._bounds(start_timestamp, end_timestamp)
        result = self.array[start:end]
        if not asc:
            result = result[::-1]
        if limit is not None:
            result = result[:limit]
        return result

# encoding:utf-8
import io

import pandas as pd

from powercomp import utils

EVENT_COLUMNS = ["i", "kind", "t_star", "amp", "omega"]


def to_dataframe(trace):
    """
    :param trace: SimTrace
    :return: pandas.DataFrame, one column per trace field
    """
    return pd.DataFrame(trace.array, columns=trace.names)


def events_dataframe(trace):
    """
    :param trace: SimTrace
    :return: pandas.DataFrame with columns ``i,kind,t_star,amp,omega``
    """
    rows = [event.to_row() for event in trace.events]
    return pd.DataFrame(rows, columns=EVENT_COLUMNS)


def _to_csv(data_frame):
    buffer = io.StringIO()
    # float_format=None keeps numpy's shortest round-trip repr
    data_frame.to_csv(buffer, index=False, lineterminator="\n")
    return buffer.getvalue()


def write_trace_csv(trace, path):
    utils.atomic_write(path, _to_csv(to_dataframe(trace)))


def write_events_csv(trace, path):
    utils.atomic_write(path, _to_csv(events_dataframe(trace)))

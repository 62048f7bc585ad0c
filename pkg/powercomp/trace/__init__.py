# encoding:utf-8
from .numpy import SimTrace, TRACE_DTYPE

from aware_stl.monitor.robustness import NodeValue, RobustnessReport, robustness, sat
from aware_stl.monitor.signal import Signal

__all__ = ["NodeValue", "RobustnessReport", "Signal", "robustness", "sat"]

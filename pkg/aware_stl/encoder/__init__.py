from aware_stl.encoder.context import NAME_LEGEND, EncodingContext
from aware_stl.encoder.encode import encode, encode_abs

__all__ = ["NAME_LEGEND", "EncodingContext", "encode", "encode_abs"]

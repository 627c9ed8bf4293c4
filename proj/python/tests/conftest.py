import os

# Must be set before OpenBLAS loads.
os.environ.setdefault("OPENBLAS_CORETYPE", "SkylakeX")

"""Hot-loop kernels: compiled extension when available, numpy fallback
otherwise.  Set MFLAB_FORCE_FALLBACK=1 to skip the extension.

``python -m mflab.bench_kernels`` times the two implementations against
each other.
"""

import os

from . import fallback

if os.environ.get("MFLAB_FORCE_FALLBACK"):
    _impl = fallback
    BACKEND = "fallback"
else:
    try:
        from . import _nbody as _impl

        BACKEND = "compiled"
    except ImportError:
        _impl = fallback
        BACKEND = "fallback"

verlet_batch = _impl.verlet_batch
external_field_steps = _impl.external_field_steps
phase_mode_sums = _impl.phase_mode_sums

__all__ = ["verlet_batch", "external_field_steps", "phase_mode_sums", "BACKEND", "fallback"]

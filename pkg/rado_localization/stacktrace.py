"""Progress and stack-trace dumps on demand via SIGUSR1.

Sending SIGUSR1 to a running ``rado-localize`` process (``kill -SIGUSR1 <pid>``)
writes the current pipeline step, then the tracebacks of all threads, to
``sys.stderr``. Construction stages and fuzz batches can run for a while; this
shows where without attaching a debugger.

SIGUSR1 is not available on all platforms (notably Windows); there the helper
is a no-op.
"""

import faulthandler
import signal
import sys


class Progress:
    """The pipeline step currently running, as shown by the dump handler."""

    def __init__(self, step="starting"):
        # No lock: the signal handler reads this on the thread that may be writing it
        self.step = step

    def update(self, step):
        self.step = step


def register_progress_dump_handler(progress=None, stream=None):
    """Register a SIGUSR1 handler that dumps progress and all thread tracebacks.

    Returns ``True`` if the handler was registered and ``False`` otherwise,
    including outside the main thread and on platforms without ``SIGUSR1``.
    """
    if not hasattr(signal, "SIGUSR1"):
        return False

    def dump(signum, frame):
        out = stream if stream is not None else sys.stderr
        if progress is not None:
            out.write("progress: %s\n" % progress.step)
            out.flush()
        faulthandler.dump_traceback(file=out, all_threads=True)

    try:
        signal.signal(signal.SIGUSR1, dump)
    except (ValueError, OSError, RuntimeError):
        # ValueError: signal only works in main thread
        return False

    return True

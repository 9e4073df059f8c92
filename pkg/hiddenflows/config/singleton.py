"""The singleton metaclass shared by the process-wide Config and Logger."""
import threading


class Singleton(type):
    """
    Metaclass handing out one instance per class, also when worker threads
    of a corpus run ask for it concurrently.
    """

    _instances: dict = {}
    _lock = threading.Lock()

    def __call__(cls, *args, **kwargs):
        """Return the instance of cls, creating it on first use."""
        if cls not in cls._instances:
            with Singleton._lock:
                if cls not in cls._instances:
                    cls._instances[cls] = super().__call__(*args, **kwargs)
        return cls._instances[cls]

"""Hidden information flows in Node-RED node packages."""
__version__ = "0.1.0"

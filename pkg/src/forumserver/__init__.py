"""Self-contained student forum service: members, threaded messages, live chat."""

__version__ = "0.1.0"

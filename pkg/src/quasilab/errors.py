class ResourceLimitError(RuntimeError):
    """A configured size cap (word length, interval count, dense matrix size) would be exceeded."""

class ResourceGuardError(RuntimeError):
    """A request would exceed a configured work cap."""

class CapExceededError(RuntimeError):
    """An enumeration would exceed its configured size cap."""

    def __init__(self, what: str, count: int, cap: int):
        self.what = what
        self.count = count
        self.cap = cap
        super().__init__(f"{what}: {count} exceeds cap {cap}")

"""
Error types shared by every service.

Commands translate these into exit codes: DomainError -> 2, CheckFailure -> 3.
"""


class DomainError(ValueError):
    """Invalid parameters or inputs outside an operation's domain."""


class ClassificationError(DomainError):
    """A numerical solution could not be assigned a unique sector."""


class CheckFailure(Exception):
    """A verification step computed something other than the expected value."""

    def __init__(self, check, expected, computed):
        self.check = check
        self.expected = expected
        self.computed = computed
        super().__init__(f'{check}: expected {expected}, computed {computed}')

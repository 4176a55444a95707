"""Base errors of the command line harness"""
from errors import BaseError


class HarnessError(BaseError):
    NAME = "Harness error"


class UsageError(HarnessError):
    NAME = "Usage error"

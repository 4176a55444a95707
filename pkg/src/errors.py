class BaseError(Exception):
    """
    All generic custom errors inherit from this one
    """

    NAME = "Error"

    def __str__(self):
        msg = super().__str__()
        return msg or self.NAME

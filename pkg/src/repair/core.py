from errors import BaseError


class RepairError(BaseError):
    NAME = "Repair error"


class RepairFailed(RepairError):
    NAME = "Repair failed"


class EncodingError(RepairError):
    NAME = "Encoding error"

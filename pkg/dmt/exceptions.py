# exceptions.py
from rest_framework import status
from rest_framework.exceptions import APIException


class DmtError(APIException):
    """
    Base error for every DMT computation
    """
    status_code = status.HTTP_400_BAD_REQUEST
    default_detail = "Invalid DMT request."
    default_code = "dmt_error"


class GammaUnsupported(DmtError):
    default_detail = "Amplify-and-forward schemes are defined for gamma = 1 only."
    default_code = "gamma_unsupported"


class StepInvalid(DmtError):
    default_detail = "Oracle grid step must satisfy 0 < step <= 0.1."
    default_code = "step_invalid"


class DimensionTooLarge(DmtError):
    default_detail = "Exponent programs are limited to 5 variables."
    default_code = "dimension_too_large"


class InvalidConfig(DmtError):
    default_detail = "Configuration violates a domain constraint."
    default_code = "invalid_config"


class InsufficientData(DmtError):
    status_code = status.HTTP_422_UNPROCESSABLE_ENTITY
    default_detail = "Fewer than two SNR points carry enough outage events for a slope fit."
    default_code = "insufficient_data"

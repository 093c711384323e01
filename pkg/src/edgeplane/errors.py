"""Domain errors shared by every component.

Each error exposes a stable machine-readable ``code`` (its class name) that
the HTTP layer puts into error bodies, plus the status the REST API maps it
to.
"""


class ServiceError(Exception):
    http_status = 500

    def __init__(self, message: str = ""):
        super().__init__(message or self.__class__.__name__)

    @property
    def code(self) -> str:
        return self.__class__.__name__


class ValidationError(ServiceError):
    http_status = 400


class AuthFailed(ServiceError):
    http_status = 401


class Forbidden(ServiceError):
    http_status = 403


class NotFound(ServiceError):
    http_status = 404


class DuplicateUser(ServiceError):
    http_status = 409


class DuplicateName(ServiceError):
    http_status = 409


class DuplicateBinding(ServiceError):
    http_status = 409


class DuplicateRoute(ServiceError):
    http_status = 409


class InvalidPhase(ServiceError):
    http_status = 409


class NoCompatibleNode(ServiceError):
    http_status = 409


class PortExhausted(ServiceError):
    http_status = 409


class UnsupportedImage(ServiceError):
    http_status = 422


class RegistryUnavailable(ServiceError):
    http_status = 502


class BrokerStopped(ServiceError):
    http_status = 503


class FixtureUnreadable(ServiceError):
    http_status = 400


class MalformedRow(ServiceError):
    http_status = 400


class BatchSizeMismatch(ServiceError):
    http_status = 400


class NonFiniteInput(ServiceError):
    http_status = 400


class SizeTooLarge(ServiceError):
    http_status = 400

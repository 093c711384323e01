"""REST surface of the control plane.

Credentials travel in the ``X-Folder-Id`` / ``X-Api-Key`` headers on every
request; errors come back as ``{"code", "message"}`` bodies where the code is
one of the domain error names. When a built UI directory is configured it is
served at ``/`` behind the API routes.
"""

from __future__ import annotations

from fastapi import Body, FastAPI, Header, Request
from fastapi.exceptions import RequestValidationError
from fastapi.responses import JSONResponse, PlainTextResponse, Response
from fastapi.staticfiles import StaticFiles

from .auth import Credential
from .bridge import RouteConfig
from .errors import Forbidden, ServiceError, ValidationError
from .pipeline.runtime import PIPELINE_ROUTE_ID
from .runtime import AppRuntime
from .service import DeployRequest


def create_app(runtime: AppRuntime) -> FastAPI:
    app = FastAPI(title="edgeplane", version="0.1.0", docs_url=None, redoc_url=None)
    service = runtime.service

    @app.exception_handler(ServiceError)
    async def service_error_handler(_: Request, exc: ServiceError):
        return JSONResponse(
            status_code=exc.http_status,
            content={"code": exc.code, "message": str(exc)},
        )

    @app.exception_handler(RequestValidationError)
    async def shape_error_handler(_: Request, exc: RequestValidationError):
        return JSONResponse(
            status_code=400,
            content={"code": "ValidationError", "message": str(exc.errors()[:1])},
        )

    def credential(folder_id: str | None, api_key: str | None) -> Credential:
        return Credential(folder_id=folder_id or "", api_key=api_key or "")

    @app.post("/users", status_code=201)
    def register_user(
        body: dict = Body(...),
        x_folder_id: str | None = Header(default=None),
        x_api_key: str | None = Header(default=None),
    ):
        return service.register_user(
            credential(x_folder_id, x_api_key),
            new_folder_id=_text_field(body, "folder_id"),
            new_api_key=_text_field(body, "api_key"),
        )

    @app.post("/auth/login", status_code=204)
    def login(
        x_folder_id: str | None = Header(default=None),
        x_api_key: str | None = Header(default=None),
    ):
        service.authenticate(credential(x_folder_id, x_api_key))
        return Response(status_code=204)

    @app.post("/deployments", status_code=201)
    def create_deployment(
        body: dict = Body(...),
        x_folder_id: str | None = Header(default=None),
        x_api_key: str | None = Header(default=None),
    ):
        ports = body.get("ports")
        if not isinstance(ports, list):
            raise ValidationError("ports must be a list of integers")
        request = DeployRequest(
            container_name=_text_field(body, "container_name"),
            image=_text_field(body, "image"),
            ports=tuple(ports),
            cpu_millicores=_int_field(body, "cpu_millicores"),
            memory_mi=_int_field(body, "memory_mi"),
            gpu_cores=_int_field(body, "gpu_cores", optional=True),
        )
        receipt = service.create_deployment(credential(x_folder_id, x_api_key), request)
        return receipt.as_dict()

    @app.get("/deployments/ports")
    def exposed_ports(
        x_folder_id: str | None = Header(default=None),
        x_api_key: str | None = Header(default=None),
    ):
        rows = service.list_exposed_ports(credential(x_folder_id, x_api_key))
        return [
            {"container_name": name, "container_port": cport, "node_port": nport}
            for name, cport, nport in rows
        ]

    @app.get("/deployments/{deployment_id}/manifest", response_class=PlainTextResponse)
    def deployment_manifest(
        deployment_id: str,
        x_folder_id: str | None = Header(default=None),
        x_api_key: str | None = Header(default=None),
    ):
        return service.deployment_manifest(
            credential(x_folder_id, x_api_key), deployment_id
        )

    @app.get("/cluster/status")
    def cluster_status(
        x_folder_id: str | None = Header(default=None),
        x_api_key: str | None = Header(default=None),
    ):
        return service.cluster_status(credential(x_folder_id, x_api_key))

    @app.get("/pipeline/visualization")
    def pipeline_visualization():
        return runtime.pipeline.snapshot()

    @app.post("/middleware/routes")
    def reload_routes(
        body: dict = Body(...),
        x_folder_id: str | None = Header(default=None),
        x_api_key: str | None = Header(default=None),
    ):
        principal = service.authenticate(credential(x_folder_id, x_api_key))
        if not principal.is_admin:
            raise Forbidden("route reload is restricted to the administrator")
        entries = body.get("routes")
        if not isinstance(entries, list):
            raise ValidationError("routes must be a list")
        configs = [_route_from_body(entry) for entry in entries]
        # The pipeline's own translation route stays put across reloads.
        installed = runtime.bridge.replace_routes(
            configs, keep={PIPELINE_ROUTE_ID}
        )
        return {"installed": installed}

    ui_dir = runtime.config.ui_dir
    if ui_dir is not None and ui_dir.is_dir():
        app.mount("/", StaticFiles(directory=ui_dir, html=True), name="ui")

    return app


def _text_field(body: dict, name: str) -> str:
    value = body.get(name)
    if not isinstance(value, str) or not value:
        raise ValidationError(f"{name} must be a non-empty string")
    return value


def _int_field(body: dict, name: str, optional: bool = False):
    value = body.get(name)
    if value is None and optional:
        return None
    if not isinstance(value, int) or isinstance(value, bool):
        raise ValidationError(f"{name} must be an integer")
    return value


def _route_from_body(entry) -> RouteConfig:
    try:
        config = RouteConfig(
            route_id=entry["id"],
            source=(entry["source"]["broker"], entry["source"]["topic"]),
            sinks=tuple((s["broker"], s["topic"]) for s in entry["sinks"]),
        )
    except (KeyError, TypeError) as exc:
        raise ValidationError(f"bad route entry: {exc}") from exc
    config.validate()
    return config

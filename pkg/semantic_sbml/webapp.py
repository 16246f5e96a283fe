"""
HTTP service exposing the toolkit under ``/v1``.

Every endpoint delegates to one payload function from ``payloads``; the
response bytes equal the output of the matching CLI command. Models in
request bodies are either store handles or inline SBML/shorthand text.
"""

import logging
from pathlib import Path
from typing import Any, Optional, Union

try:
    from fastapi import FastAPI, Query, Request
    from fastapi.responses import JSONResponse, Response
    from pydantic import BaseModel, Field
except ImportError as e:
    raise ImportError(
        "The HTTP service needs the webapp extra: pip install semantic-sbml[webapp]"
    ) from e

from . import payloads
from .__version__ import __version__
from .annodb import AnnotationStore
from .balancing import balancing_config_from_dict
from .cluster import DEFAULT_CLUSTER_THRESHOLD
from .errors import SemanticSbmlError, error_payload
from .formats import load_model
from .model.document import ModelDocument
from .sbo import parse_rule_table
from .semantics import DEFAULT_THRESHOLD
from .store import HANDLE_RE, ModelStore
from .viz import ModelDotOptions

logger = logging.getLogger(__name__)

SERVICE_NAME = "semantic-sbml"


class ModelRequest(BaseModel):
    model: str


class AnnotateRequest(ModelRequest):
    element: str
    qualifier: str
    uri: str
    action: str = payloads.SET


class DiffRequest(BaseModel):
    left: str
    right: str


class MergeRequest(BaseModel):
    models: list[str]
    policy: Union[str, dict[str, Any], None] = None


class SplitRequest(ModelRequest):
    seeds: list[str]
    expand: bool = False


class BalanceRequest(ModelRequest):
    data: Optional[str] = None
    config: Optional[dict[str, Any]] = None


class SboRequest(ModelRequest):
    rules: Optional[str] = None


class LabelledModel(BaseModel):
    label: Optional[str] = None
    model: str


class ClusterRequest(BaseModel):
    models: list[Union[str, LabelledModel]]
    threshold: float = Field(default=DEFAULT_CLUSTER_THRESHOLD, ge=0)


class VisualizeRequest(ModelRequest):
    show_modifiers: bool = True
    compartment_clusters: bool = False


def _respond(payload: payloads.Payload, status_code: int = 200) -> Response:
    return Response(content=payload.body, media_type=payload.media_type, status_code=status_code)


def create_app(
    store_dir: Union[str, Path],
    annodb_dir: Union[str, Path, None] = None,
    threshold: float = DEFAULT_THRESHOLD,
) -> FastAPI:
    """
    Build the service.

    Args:
        store_dir: Root of the content-addressed model store
        annodb_dir: Annotation store directory; None serves an empty in-memory store
        threshold: Matching threshold for diff and merge
    """
    store = ModelStore(store_dir)
    annotations = AnnotationStore(annodb_dir)
    app = FastAPI(title="semantic-sbml", version=__version__)

    def resolve(reference: str) -> ModelDocument:
        if HANDLE_RE.match(reference):
            return store.load(reference)
        return load_model(reference)

    def accept(request: Request, *allowed: str) -> str:
        return payloads.media_output(request.headers.get("accept"), allowed)

    @app.exception_handler(SemanticSbmlError)
    async def toolkit_error(request: Request, exc: SemanticSbmlError) -> JSONResponse:
        logger.info(f"{request.method} {request.url.path} failed: {exc.code}")
        return JSONResponse(status_code=exc.status, content=error_payload(exc))

    @app.exception_handler(ValueError)
    async def bad_request(request: Request, exc: ValueError) -> JSONResponse:
        content = {"status": 400, "code": "bad_request", "message": str(exc)}
        return JSONResponse(status_code=400, content=content)

    @app.get("/v1/health")
    def health() -> dict[str, str]:
        return {"status": "healthy", "service": SERVICE_NAME, "version": __version__}

    @app.post("/v1/models", status_code=201)
    async def store_model(request: Request) -> dict[str, str]:
        return {"hash": store.store_model(await request.body())}

    @app.get("/v1/models/{handle}")
    def get_model(handle: str) -> Response:
        return Response(content=store.get_bytes(handle), media_type=payloads.SBML)

    @app.post("/v1/shorthand")
    async def shorthand(request: Request) -> Response:
        body = await request.body()
        if accept(request, "sbml", "shorthand") == "shorthand":
            return _respond(payloads.decompile_shorthand_payload(body))
        return _respond(payloads.compile_shorthand_payload(body))

    @app.post("/v1/validate")
    def validate(body: ModelRequest, request: Request) -> Response:
        output = accept(request, "json", "tsv")
        if HANDLE_RE.match(body.model):
            return _respond(payloads.validate_payload(store.get_bytes(body.model), output))
        return _respond(payloads.validate_payload(body.model, output))

    @app.post("/v1/annotate")
    def annotate(body: AnnotateRequest) -> Response:
        doc = resolve(body.model)
        return _respond(
            payloads.annotate_payload(doc, body.element, body.qualifier, body.uri, body.action)
        )

    @app.post("/v1/diff")
    def diff(body: DiffRequest, request: Request) -> Response:
        return _respond(
            payloads.diff_payload(
                resolve(body.left),
                resolve(body.right),
                accept(request, "json", "tsv"),
                annotations,
                threshold,
            )
        )

    @app.post("/v1/merge")
    def merge(body: MergeRequest, request: Request) -> Response:
        return _respond(
            payloads.merge_payload(
                [resolve(m) for m in body.models],
                payloads.parse_policy(body.policy),
                accept(request, "sbml", "json"),
                annotations,
                threshold,
            )
        )

    @app.post("/v1/split")
    def split(body: SplitRequest) -> Response:
        return _respond(payloads.split_payload(resolve(body.model), body.seeds, body.expand))

    @app.post("/v1/balance")
    def balance(body: BalanceRequest, request: Request) -> Response:
        config = balancing_config_from_dict(body.config) if body.config is not None else None
        return _respond(
            payloads.balance_payload(
                resolve(body.model), body.data, config, accept(request, "sbml", "tsv", "json")
            )
        )

    @app.post("/v1/sbo")
    def sbo(body: SboRequest, request: Request) -> Response:
        rules = parse_rule_table(body.rules) if body.rules is not None else None
        return _respond(
            payloads.sbo_payload(resolve(body.model), rules, accept(request, "sbml", "tsv", "json"))
        )

    @app.post("/v1/cluster")
    def cluster(body: ClusterRequest, request: Request) -> Response:
        models = []
        for entry in body.models:
            if isinstance(entry, str):
                doc = resolve(entry)
                models.append((doc.id, doc))
            else:
                doc = resolve(entry.model)
                models.append((entry.label or doc.id, doc))
        output = accept(request, "json", "tsv", "dot")
        return _respond(payloads.cluster_payload(models, body.threshold, output, annotations))

    @app.post("/v1/visualize")
    def visualize(body: VisualizeRequest) -> Response:
        options = ModelDotOptions(body.show_modifiers, body.compartment_clusters)
        return _respond(payloads.visualize_payload(resolve(body.model), options))

    @app.get("/v1/annotations/search")
    def search(
        name: Optional[str] = None,
        exact: bool = False,
        db: Optional[str] = None,
        identifier: Optional[str] = Query(default=None, alias="id"),
    ) -> Response:
        return _respond(payloads.search_payload(annotations, name, exact, db, identifier))

    logger.debug(f"Service ready: store {store.root}, annodb {annodb_dir or 'in-memory'}")
    return app

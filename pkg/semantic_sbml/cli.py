#!/usr/bin/env python3
"""
Command-line interface for semantic-sbml.

Every command that has an HTTP twin writes the bytes of the shared payload
function, so ``semantic-sbml diff a.xml b.xml`` and ``POST /v1/diff``
return the same document.
"""

try:
    import click
except ImportError:
    print("Error: 'click' is required for the CLI. Install with:")
    print("  pip install semantic-sbml[cli]")
    exit(1)

import functools
import logging
import sys
from collections.abc import Sequence
from pathlib import Path
from typing import IO, Any, Callable, Optional, TypeVar

from . import payloads
from .__version__ import __version__
from .annodb import AnnotationStore
from .balancing import get_default_balancing_config, load_balancing_config
from .cluster import DEFAULT_CLUSTER_THRESHOLD
from .errors import EXIT_INVALID, EXIT_USAGE, SemanticSbmlError, error_json
from .formats import load_model
from .model.document import ModelDocument
from .model.validation import validate_model
from .sbo import load_rule_table
from .semantics import DEFAULT_THRESHOLD
from .viz import ModelDotOptions

logger = logging.getLogger(__name__)

F = TypeVar("F", bound=Callable[..., Any])


class ToolkitGroup(click.Group):
    """Click group that reports usage errors with exit code 1."""

    def main(self, *args: Any, **kwargs: Any) -> Any:
        kwargs["standalone_mode"] = False
        try:
            return super().main(*args, **kwargs)
        except click.exceptions.Abort:
            click.echo("Aborted!", err=True)
            sys.exit(EXIT_USAGE)
        except click.UsageError as e:
            e.show()
            sys.exit(EXIT_USAGE)
        except click.ClickException as e:
            e.show()
            sys.exit(e.exit_code)


def reports_errors(command: F) -> F:
    """Turn toolkit errors into ``❌`` messages and their exit codes."""

    @functools.wraps(command)
    def wrapper(*args: Any, **kwargs: Any) -> Any:
        try:
            return command(*args, **kwargs)
        except SemanticSbmlError as e:
            ctx = click.get_current_context()
            if ctx.find_root().params.get("json_errors"):
                click.echo(error_json(e), err=True, nl=False)
            else:
                click.echo(f"❌ {e.message}", err=True)
            sys.exit(e.exit_code)
        except ValueError as e:
            click.echo(f"❌ {e}", err=True)
            sys.exit(EXIT_USAGE)

    return wrapper  # type: ignore[return-value]


def _read_model(source: IO[bytes]) -> ModelDocument:
    return load_model(source.read())


def _emit(payload: payloads.Payload, output: Optional[Path]) -> None:
    if output is None:
        click.echo(payload.body, nl=False)
        return
    output.write_bytes(payload.body)
    click.echo(f"✅ Wrote {output}", err=True)


def _annotation_store(db: Optional[Path]) -> Optional[AnnotationStore]:
    return AnnotationStore(db) if db is not None else None


output_option = click.option(
    "-o",
    "--output",
    type=click.Path(dir_okay=False, path_type=Path),
    help="Write to this file instead of stdout",
)
db_option = click.option(
    "--db",
    type=click.Path(file_okay=False, path_type=Path),
    help="Annotation store directory used for equivalence lookups",
)
model_argument = click.argument("model", type=click.File("rb"))


@click.group(cls=ToolkitGroup)
@click.version_option(version=__version__, prog_name="semantic-sbml")
@click.option("-v", "--verbose", count=True, help="Log more (-v info, -vv debug)")
@click.option("--json", "json_errors", is_flag=True, help="Report errors as JSON on stderr")
def cli(verbose: int, json_errors: bool) -> None:
    """
    semantic-sbml - semantic processing of SBML models

    Compile shorthand, validate, diff, merge and split models, balance
    kinetic parameters, assign SBO terms, cluster and draw models.
    """
    level = logging.WARNING if verbose == 0 else logging.INFO if verbose == 1 else logging.DEBUG
    logging.basicConfig(level=level, format="%(levelname)s %(name)s: %(message)s")


# --- shorthand / validate ---------------------------------------------------


@cli.group()
def shorthand() -> None:
    """Convert between shorthand and SBML."""


@shorthand.command("compile")
@click.argument("source", type=click.File("rb"))
@output_option
@reports_errors
def shorthand_compile(source: IO[bytes], output: Optional[Path]) -> None:
    """
    Compile a shorthand model to SBML.

    Examples:
    \b
        semantic-sbml shorthand compile model.txt -o model.xml
    """
    _emit(payloads.compile_shorthand_payload(source.read()), output)


@shorthand.command("decompile")
@model_argument
@output_option
@reports_errors
def shorthand_decompile(model: IO[bytes], output: Optional[Path]) -> None:
    """Print an SBML model as shorthand."""
    _emit(payloads.decompile_shorthand_payload(model.read()), output)


@cli.command()
@model_argument
@click.option("--format", "fmt", type=click.Choice(["json", "tsv"]), default="json")
@output_option
@reports_errors
def validate(model: IO[bytes], fmt: str, output: Optional[Path]) -> None:
    """
    Validate a model and print its findings.

    Exits with status 2 when the model has validation errors.
    """
    data = model.read()
    _emit(payloads.validate_payload(data, fmt), output)
    if not validate_model(load_model(data)).ok:
        sys.exit(EXIT_INVALID)


# --- semantics / diffmerge --------------------------------------------------


@cli.group()
def annotate() -> None:
    """Add or remove MIRIAM annotations."""


def _annotate(action: str) -> Callable[..., None]:
    @model_argument
    @click.argument("element")
    @click.argument("qualifier")
    @click.argument("uri")
    @output_option
    @reports_errors
    def command(
        model: IO[bytes], element: str, qualifier: str, uri: str, output: Optional[Path]
    ) -> None:
        doc = _read_model(model)
        _emit(payloads.annotate_payload(doc, element, qualifier, uri, action), output)

    return command


annotate.command("set", help="Add (QUALIFIER, URI) to ELEMENT.")(_annotate(payloads.SET))
annotate.command("remove", help="Remove (QUALIFIER, URI) from ELEMENT.")(
    _annotate(payloads.REMOVE)
)


@cli.command()
@click.argument("left", type=click.File("rb"))
@click.argument("right", type=click.File("rb"))
@click.option("--format", "fmt", type=click.Choice(["json", "tsv"]), default="json")
@click.option("--threshold", type=click.FloatRange(0, 1), default=DEFAULT_THRESHOLD)
@db_option
@output_option
@reports_errors
def diff(
    left: IO[bytes],
    right: IO[bytes],
    fmt: str,
    threshold: float,
    db: Optional[Path],
    output: Optional[Path],
) -> None:
    """
    Report added, removed and changed elements between two models.

    Examples:
    \b
        semantic-sbml diff old.xml new.xml --format tsv
    """
    payload = payloads.diff_payload(
        _read_model(left), _read_model(right), fmt, _annotation_store(db), threshold
    )
    _emit(payload, output)


@cli.command()
@click.argument("models", type=click.File("rb"), nargs=-1, required=True)
@click.option(
    "--policy",
    default="fail",
    show_default=True,
    help="Conflict policy: fail, left, right or file=POLICY.tsv",
)
@click.option("--format", "fmt", type=click.Choice(["sbml", "json"]), default="sbml")
@click.option("--threshold", type=click.FloatRange(0, 1), default=DEFAULT_THRESHOLD)
@db_option
@output_option
@reports_errors
def merge(
    models: Sequence[IO[bytes]],
    policy: str,
    fmt: str,
    threshold: float,
    db: Optional[Path],
    output: Optional[Path],
) -> None:
    """
    Merge models left to right.

    With the fail policy, conflicting attributes abort the merge with
    status 3 and are listed on stderr.

    Examples:
    \b
        semantic-sbml merge a.xml b.xml -o merged.xml
        semantic-sbml merge a.xml b.xml --policy file=policy.tsv
    """
    payload = payloads.merge_payload(
        [_read_model(m) for m in models],
        payloads.parse_policy(policy, allow_files=True),
        fmt,
        _annotation_store(db),
        threshold,
    )
    _emit(payload, output)


@cli.command()
@model_argument
@click.option("--seeds", required=True, help="Comma-separated element ids to keep")
@click.option("--expand-reactions", is_flag=True, help="Seeded species pull in their reactions")
@output_option
@reports_errors
def split(model: IO[bytes], seeds: str, expand_reactions: bool, output: Optional[Path]) -> None:
    """Extract the self-contained submodel around the seed elements."""
    ids = [s.strip() for s in seeds.split(",") if s.strip()]
    _emit(payloads.split_payload(_read_model(model), ids, expand_reactions), output)


# --- balancing / sbo --------------------------------------------------------


@cli.command()
@model_argument
@click.option("--data", type=click.File("rb"), help="Kinetic data table (TSV)")
@click.option("--config", type=click.Path(exists=True, dir_okay=False, path_type=Path))
@click.option(
    "--modifier-mode",
    type=click.Choice(["none", "activation", "inhibition"]),
    help="Add activation or inhibition constants for modifiers",
)
@click.option("--report", type=click.Path(dir_okay=False, path_type=Path), help="Report TSV")
@output_option
@reports_errors
def balance(
    model: IO[bytes],
    data: Optional[IO[bytes]],
    config: Optional[Path],
    modifier_mode: Optional[str],
    report: Optional[Path],
    output: Optional[Path],
) -> None:
    """
    Balance kinetic parameters and write modular rate laws.

    Examples:
    \b
        semantic-sbml balance model.xml --data kinetics.tsv --report report.tsv
    """
    settings = load_balancing_config(config) if config else get_default_balancing_config()
    if modifier_mode is not None:
        settings = settings.model_copy(update={"modifier_mode": modifier_mode})
    doc = _read_model(model)
    table = data.read() if data is not None else None
    _emit(payloads.balance_payload(doc, table, settings, "sbml"), output)
    if report is not None:
        report.write_bytes(payloads.balance_payload(doc, table, settings, "tsv").body)
        click.echo(f"✅ Wrote {report}", err=True)


@cli.command()
@model_argument
@click.option("--rules", type=click.Path(exists=True, dir_okay=False, path_type=Path))
@click.option("--log", "log_path", type=click.Path(dir_okay=False, path_type=Path))
@output_option
@reports_errors
def sbo(
    model: IO[bytes], rules: Optional[Path], log_path: Optional[Path], output: Optional[Path]
) -> None:
    """Classify kinetic laws and assign SBO terms from a rule table."""
    table = load_rule_table(rules)
    doc = _read_model(model)
    _emit(payloads.sbo_payload(doc, table, "sbml"), output)
    if log_path is not None:
        log_path.write_bytes(payloads.sbo_payload(doc, table, "tsv").body)
        click.echo(f"✅ Wrote {log_path}", err=True)


# --- cluster / viz ----------------------------------------------------------


@cli.command()
@click.argument(
    "models", type=click.Path(exists=True, dir_okay=False, path_type=Path), nargs=-1
)
@click.option("--threshold", type=click.FloatRange(min=0), default=DEFAULT_CLUSTER_THRESHOLD)
@click.option("--format", "fmt", type=click.Choice(["json", "tsv"]), default="tsv")
@click.option("--dot", type=click.Path(dir_okay=False, path_type=Path), help="Also write DOT")
@db_option
@output_option
@reports_errors
def cluster(
    models: Sequence[Path],
    threshold: float,
    fmt: str,
    dot: Optional[Path],
    db: Optional[Path],
    output: Optional[Path],
) -> None:
    """
    Cluster models by annotation similarity.

    Models are labelled by file name without extension.
    """
    labelled = [(path.stem, load_model(path.read_bytes())) for path in models]
    store = _annotation_store(db)
    _emit(payloads.cluster_payload(labelled, threshold, fmt, store), output)
    if dot is not None:
        dot.write_bytes(payloads.cluster_payload(labelled, threshold, "dot", store).body)
        click.echo(f"✅ Wrote {dot}", err=True)


@cli.command()
@model_argument
@click.option("--no-modifiers", is_flag=True, help="Omit dashed modifier edges")
@click.option("--compartments", is_flag=True, help="Group species by compartment")
@output_option
@reports_errors
def viz(model: IO[bytes], no_modifiers: bool, compartments: bool, output: Optional[Path]) -> None:
    """Draw the species-reaction network as GraphViz DOT."""
    options = ModelDotOptions(show_modifiers=not no_modifiers, compartment_clusters=compartments)
    _emit(payloads.visualize_payload(_read_model(model), options), output)


# --- annodb -----------------------------------------------------------------


@cli.group()
def annodb() -> None:
    """Manage the local annotation store."""


@annodb.command("ingest")
@click.argument("records", type=click.File("rb"))
@click.option("--db", type=click.Path(file_okay=False, path_type=Path), required=True)
@reports_errors
def annodb_ingest(records: IO[bytes], db: Path) -> None:
    """Merge entity record lines into the store at --db."""
    summary = AnnotationStore(db).ingest_records(records.read())
    click.echo(
        f"✅ {summary.accepted} records accepted, {summary.changed} changed,"
        f" {summary.rejected} rejected"
    )


@annodb.command("search")
@click.option("--db", type=click.Path(file_okay=False, path_type=Path), required=True)
@click.option("--name", help="Name or name fragment, case-insensitive")
@click.option("--exact", is_flag=True, help="Match whole names only")
@click.option("--namespace", help="identifiers.org namespace, with --id")
@click.option("--id", "identifier", help="Identifier within --namespace")
@output_option
@reports_errors
def annodb_search(
    db: Path,
    name: Optional[str],
    exact: bool,
    namespace: Optional[str],
    identifier: Optional[str],
    output: Optional[Path],
) -> None:
    """Look up entity records by name or by database id."""
    _emit(payloads.search_payload(AnnotationStore(db), name, exact, namespace, identifier), output)


# --- service ----------------------------------------------------------------


@cli.command()
@click.option("-p", "--port", default=8000, help="Port to serve on (default: 8000)")
@click.option("--host", default="127.0.0.1", help="Interface to bind")
@click.option(
    "--store",
    "store_dir",
    type=click.Path(file_okay=False, path_type=Path),
    default=Path("model-store"),
    show_default=True,
)
@click.option("--db", type=click.Path(file_okay=False, path_type=Path))
@click.option("--threshold", type=click.FloatRange(0, 1), default=DEFAULT_THRESHOLD)
@click.pass_context
def serve(
    ctx: click.Context,
    port: int,
    host: str,
    store_dir: Path,
    db: Optional[Path],
    threshold: float,
) -> None:
    """
    Run the HTTP service.

    Examples:
    \b
        semantic-sbml serve --port 8080 --store ./store --db ./annodb
    """
    try:
        import uvicorn

        from .webapp import create_app
    except ImportError as e:
        click.echo(f"❌ Error: {e}", err=True)
        sys.exit(EXIT_USAGE)

    verbose = ctx.find_root().params.get("verbose", 0)
    log_level = "warning" if verbose == 0 else "info" if verbose == 1 else "debug"
    click.echo(f"🌐 Serving semantic-sbml at http://{host}:{port}/v1")
    uvicorn.run(create_app(store_dir, db, threshold), host=host, port=port, log_level=log_level)


if __name__ == "__main__":
    cli()

"""Main script for the hiddenflows package."""
import click

from hiddenflows import __version__


def shared_options(command):
    """Options every subcommand accepts."""
    options = [
        click.option("--debug", is_flag=True, help="Enable Debug Mode"),
        click.option(
            "--catalog",
            "-C",
            help="Specifies which endpoint catalog YAML file to use.",
        ),
        click.option(
            "--registry",
            help="Base URL of the package registry (also HIDDENFLOWS_REGISTRY).",
        ),
        click.option(
            "-j",
            "--jobs",
            type=int,
            help="Number of packages processed concurrently.",
        ),
        click.option(
            "-o",
            "--out",
            default="out",
            show_default=True,
            help="Directory the report is written to.",
        ),
        click.option(
            "--format",
            "fmt",
            type=click.Choice(["json", "csv"]),
            default="json",
            show_default=True,
            help="Report format.",
        ),
        click.option("--seed", type=int, default=0, show_default=True, help="Seed of random draws."),
        click.option(
            "--max-packages",
            type=int,
            help="Process at most this many corpus entries.",
        ),
        click.option(
            "--count-syntactic",
            is_flag=True,
            help="Count every catalog match as a detected endpoint, not only flow participants.",
        ),
    ]
    for option in reversed(options):
        command = option(command)
    return command


def _execute(mode: str, inputs: tuple, **kwargs) -> None:
    # Put imports inside function to avoid importing everything when starting the CLI
    import logging

    from hiddenflows.config import Config
    from hiddenflows.configurator import create_config
    from hiddenflows.logs import logger
    from hiddenflows.pipeline import run

    config = create_config(mode, inputs, **kwargs)
    logger.set_level(logging.DEBUG if Config().debug_mode else logging.INFO)
    raise SystemExit(run(config))


@click.group()
@click.version_option(__version__, prog_name="hiddenflows")
def main() -> None:
    """
    Find hidden information flows in Node-RED node packages.

    Compares what each node declares in its editor registration with the
    sources and sinks its runtime code actually reaches, and rates every
    detected flow by severity.
    """


@main.command()
@click.argument("path", type=click.Path())
@shared_options
def scan(path: str, **kwargs) -> None:
    """Analyze one package directory or .tgz archive."""
    _execute("scan", (path,), **kwargs)


@main.command()
@click.argument("source", type=click.Path())
@click.option("--sample", type=int, help="Analyze a random sample of this many valid packages.")
@click.option(
    "--strategy",
    type=click.Choice(["half-half", "top-downloads", "uniform-random"]),
    default="half-half",
    show_default=True,
    help="Sampling strategy over the valid packages.",
)
@shared_options
def corpus(source: str, **kwargs) -> None:
    """Analyze a directory of packages or a file of registry ids."""
    _execute("corpus", (source,), **kwargs)


@main.command()
@click.argument("id_list", type=click.Path())
@shared_options
def fetch(id_list: str, **kwargs) -> None:
    """Download the archives named in an id list into the output directory."""
    _execute("fetch", (id_list,), **kwargs)


@main.command()
@click.argument("report_file", required=False, type=click.Path())
@click.option(
    "--severity-table",
    is_flag=True,
    help="Print the severity table as YAML instead of re-emitting a report.",
)
@shared_options
def report(report_file: str, **kwargs) -> None:
    """Verify a JSON report and re-emit it in the requested format."""
    _execute("report", (report_file,) if report_file else (), **kwargs)


if __name__ == "__main__":
    main()

"""
lieprobe command line.

Exit codes: 0 success, 1 usage error, 2 malformed input, 3 Unknown outcome
or a failed check, 4 size guard.
"""

import argparse
import json
import logging
import sys
from pathlib import Path
from typing import Callable, Optional, TextIO

from pydantic import ValidationError

from app.integrations.documents import (
    SUFFIX_FORMATS,
    format_geometry,
    format_graph,
    format_report,
    read_graph,
)
from app.pipelines.config import EngineConfig, load_engine_config
from app.pipelines.flow import (
    batch_recognize_flow,
    generate_flow,
    reconstruct_flow,
    recognize_flow,
    thread_runner,
    verify_flow,
)
from app.pydantic_models.command import GEN_FAMILIES, CommandConfig
from app.pydantic_models.utils import GraphFormat
from app.services.errors import (
    DegenerateForm,
    DimensionMismatch,
    InstanceTooLarge,
    LieProbeError,
    MalformedInput,
    NonPrimeCharacteristic,
    OrderTooLarge,
    RankTooSmall,
    SizeLimitExceeded,
    VertexOutOfRange,
)
from app.services.geometry import point_graph
from app.services.graphs import Graph, are_isomorphic, clique_extension, local_graph
from app.services.reconstruct import local_quotient, ray_quotient, recover_rays
from app.services.recognize import srg_parameters

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_MALFORMED = 2
EXIT_UNKNOWN = 3
EXIT_SIZE = 4

# checked in order, first match wins
ERROR_EXIT_CODES: list[tuple[type[LieProbeError], int]] = [
    (SizeLimitExceeded, EXIT_SIZE),
    (InstanceTooLarge, EXIT_SIZE),
    (OrderTooLarge, EXIT_SIZE),
    (MalformedInput, EXIT_MALFORMED),
    (VertexOutOfRange, EXIT_MALFORMED),
    (DimensionMismatch, EXIT_MALFORMED),
    (NonPrimeCharacteristic, EXIT_USAGE),
    (DegenerateForm, EXIT_USAGE),
    (RankTooSmall, EXIT_USAGE),
]

LOG_FORMAT = "%(asctime)s | %(name)s | %(levelname)s | %(message)s"


class UsageError(Exception):
    pass


class Parser(argparse.ArgumentParser):
    def error(self, message: str):  # type: ignore[override]
        raise UsageError(message)


def build_parser() -> argparse.ArgumentParser:
    common = Parser(add_help=False)
    common.add_argument("--threads", type=int, help="worker threads (LIEPROBE_THREADS)")
    common.add_argument("--seed", type=int, help="seed recorded in reports (LIEPROBE_SEED)")
    common.add_argument("--format", choices=[f.value for f in GraphFormat], help="input graph format")
    common.add_argument("--header", action="store_true", help="write the >>graph6<< header")

    parser = Parser(prog="lieprobe", description="Lie incidence geometry probe")
    commands = parser.add_subparsers(dest="command", required=True)

    gen = commands.add_parser("gen", parents=[common], help="generate a geometry")
    gen.add_argument("--family", choices=GEN_FAMILIES, required=True)
    gen.add_argument("--n", type=int, help="rank or Dynkin index")
    gen.add_argument("--dim", type=int, help="projective dimension (polar families, pg)")
    gen.add_argument("--q", type=int, required=True)
    gen.add_argument("--graph", type=Path, help="point graph output")
    gen.add_argument("--geometry", type=Path, help="geometry JSON output")

    for name, text in (
        ("localgraph", "local graph at a vertex"),
        ("cliqueext", "q-clique extension"),
        ("quotient", "ray quotient"),
    ):
        sub = commands.add_parser(name, parents=[common], help=text)
        sub.add_argument("input", type=Path)
        sub.add_argument("--out", type=Path)
        sub.add_argument(
            "--out-format", choices=[f.value for f in GraphFormat], help="written graph format"
        )
        if name != "cliqueext":
            sub.add_argument("--vertex", type=int)
        else:
            sub.add_argument("--q", type=int)

    reconstruct = commands.add_parser("reconstruct", parents=[common], help="build the geometry")
    reconstruct.add_argument("input", type=Path)
    reconstruct.add_argument("--geometry", type=Path)

    recognize = commands.add_parser("recognize", parents=[common], help="classify a graph")
    recognize.add_argument("input", type=Path)
    recognize.add_argument("--report", type=Path)

    verify = commands.add_parser("verify", parents=[common], help="check axioms")
    verify.add_argument("input", type=Path)
    verify.add_argument("--axioms", required=True, help="comma separated, e.g. gamma,shult,parapolar:3")

    iso = commands.add_parser("iso", parents=[common], help="isomorphism test")
    iso.add_argument("first", type=Path)
    iso.add_argument("second", type=Path)

    params = commands.add_parser("params", parents=[common], help="strongly regular parameters")
    params.add_argument("input", type=Path)

    batch = commands.add_parser("batch", parents=[common], help="recognise every graph in a directory")
    batch.add_argument("directory", type=Path)
    batch.add_argument("--summary", type=Path)
    return parser


def to_command_config(args: argparse.Namespace) -> CommandConfig:
    values = vars(args)
    inputs = [
        values[key] for key in ("input", "first", "second", "directory") if values.get(key) is not None
    ]
    axioms = [a.strip() for a in values["axioms"].split(",") if a.strip()] if values.get("axioms") else []
    return CommandConfig(
        command=values["command"],
        inputs=inputs,
        out=values.get("out"),
        graph=values.get("graph"),
        geometry=values.get("geometry"),
        report=values.get("report"),
        summary=values.get("summary"),
        family=values.get("family"),
        n=values.get("n"),
        dim=values.get("dim"),
        q=values.get("q"),
        vertex=values.get("vertex"),
        axioms=axioms,
        format=values.get("format"),
        out_format=values.get("out_format"),
        threads=values.get("threads"),
        seed=values.get("seed"),
        header=values.get("header", False),
    )


def _emit_graph(command: CommandConfig, graph: Graph, stdout: TextIO) -> None:
    """--out-format, then the --out suffix, then --format."""
    fmt = command.out_format
    if fmt is None and command.out is not None:
        fmt = SUFFIX_FORMATS.get(command.out.suffix.lower())
    fmt = fmt or command.format or GraphFormat.graph6
    text = format_graph(graph, fmt, command.header)
    if command.out is None:
        stdout.write(text)
    else:
        command.out.write_text(text)


def run_gen(command: CommandConfig, engine: EngineConfig, stdout: TextIO) -> int:
    assert command.family is not None and command.q is not None
    geometry = generate_flow(
        command.family,
        command.q,
        command.n,
        command.dim,
        command.graph,
        command.geometry,
        command.format,
        command.header,
        engine.max_points,
    )
    if command.graph is None and command.geometry is None:
        stdout.write(format_graph(point_graph(geometry), command.format or GraphFormat.graph6, command.header))
    else:
        stdout.write(f"{geometry.n_points} points, {len(geometry.lines)} lines\n")
    return EXIT_OK


def run_localgraph(command: CommandConfig, engine: EngineConfig, stdout: TextIO) -> int:
    assert command.vertex is not None
    graph = read_graph(command.inputs[0], command.format)
    _emit_graph(command, local_graph(graph, command.vertex), stdout)
    return EXIT_OK


def run_cliqueext(command: CommandConfig, engine: EngineConfig, stdout: TextIO) -> int:
    assert command.q is not None
    graph = read_graph(command.inputs[0], command.format)
    _emit_graph(command, clique_extension(graph, command.q), stdout)
    return EXIT_OK


def run_quotient(command: CommandConfig, engine: EngineConfig, stdout: TextIO) -> int:
    """With --vertex, the quotient of that local graph; otherwise the input is the local graph."""
    graph = read_graph(command.inputs[0], command.format)
    if command.vertex is not None:
        quotient, _ = local_quotient(graph, command.vertex)
    else:
        quotient = ray_quotient(graph, recover_rays(graph))
    _emit_graph(command, quotient, stdout)
    return EXIT_OK


def run_reconstruct(command: CommandConfig, engine: EngineConfig, stdout: TextIO) -> int:
    geometry = reconstruct_flow(command.inputs[0], command.format, command.geometry)
    if command.geometry is None:
        stdout.write(format_geometry(geometry))
    else:
        stdout.write(f"{geometry.n_points} points, {len(geometry.lines)} lines\n")
    return EXIT_OK


def run_recognize(command: CommandConfig, engine: EngineConfig, stdout: TextIO) -> int:
    flow = recognize_flow.with_options(task_runner=thread_runner(engine.threads))
    report = flow(command.inputs[0], engine, command.format, command.report)
    if command.report is None:
        stdout.write(format_report(report, engine.output.report_indent))
    else:
        stdout.write(f"{report.outcome_name} ({report.identification_level})\n")
    return EXIT_OK if report.recognized else EXIT_UNKNOWN


def run_verify(command: CommandConfig, engine: EngineConfig, stdout: TextIO) -> int:
    reports = verify_flow(command.inputs[0], command.axioms, command.format)
    for name, report in zip(command.axioms, reports):
        if report.holds:
            stdout.write(f"{name}: holds\n")
        else:
            reason = report.details.get("reason", "")
            stdout.write(f"{name}: fails {json.dumps(report.witness)} {reason}".rstrip() + "\n")
    return EXIT_OK if all(r.holds for r in reports) else EXIT_UNKNOWN


def run_iso(command: CommandConfig, engine: EngineConfig, stdout: TextIO) -> int:
    first, second = (read_graph(p, command.format) for p in command.inputs)
    result = are_isomorphic(first, second, engine.iso_limit)
    payload = {"isomorphic": result.isomorphic, "mapping": result.mapping, "reason": result.reason}
    stdout.write(json.dumps(payload) + "\n")
    return EXIT_OK if result.isomorphic else EXIT_UNKNOWN


def run_params(command: CommandConfig, engine: EngineConfig, stdout: TextIO) -> int:
    srg = srg_parameters(read_graph(command.inputs[0], command.format))
    if srg.strongly_regular:
        stdout.write(f"({srg.v}, {srg.k}, {srg.lam}, {srg.mu})\n")
        return EXIT_OK
    stdout.write(f"NotStronglyRegular: {srg.reason}\n")
    return EXIT_UNKNOWN


def run_batch(command: CommandConfig, engine: EngineConfig, stdout: TextIO) -> int:
    assert command.summary is not None
    directory = command.inputs[0]
    if not directory.is_dir():
        raise MalformedInput(f"{directory} is not a directory", path=str(directory))
    flow = batch_recognize_flow.with_options(task_runner=thread_runner(engine.threads))
    reports = flow(directory, engine, command.summary)
    unknown = sum(not r.recognized for r in reports)
    stdout.write(f"{len(reports)} files, {unknown} unknown\n")
    return EXIT_OK if unknown == 0 else EXIT_UNKNOWN


COMMANDS: dict[str, Callable[[CommandConfig, EngineConfig, TextIO], int]] = {
    "gen": run_gen,
    "localgraph": run_localgraph,
    "cliqueext": run_cliqueext,
    "quotient": run_quotient,
    "reconstruct": run_reconstruct,
    "recognize": run_recognize,
    "verify": run_verify,
    "iso": run_iso,
    "params": run_params,
    "batch": run_batch,
}


def exit_code_for(error: LieProbeError) -> int:
    for kind, code in ERROR_EXIT_CODES:
        if isinstance(error, kind):
            return code
    return EXIT_UNKNOWN


def run(argv: Optional[list[str]] = None, stdout: TextIO = sys.stdout, stderr: TextIO = sys.stderr) -> int:
    try:
        args = build_parser().parse_args(argv)
        command = to_command_config(args)
    except UsageError as exc:
        stderr.write(f"usage error: {exc}\n")
        return EXIT_USAGE
    except ValidationError as exc:
        for error in exc.errors():
            stderr.write(f"usage error: {error['msg']}\n")
        return EXIT_USAGE

    try:
        engine = load_engine_config(command.threads, command.seed)
    except ValueError as exc:
        stderr.write(f"usage error: {exc}\n")
        return EXIT_USAGE
    logging.basicConfig(level=engine.log_level, format=LOG_FORMAT)

    try:
        return COMMANDS[command.command](command, engine, stdout)
    except LieProbeError as exc:
        stderr.write(f"{exc.code}: {exc.message} {json.dumps(exc.details, default=str)}\n")
        return exit_code_for(exc)
    except ValidationError as exc:
        stderr.write(f"MalformedInput: {exc.error_count()} validation errors\n")
        return EXIT_MALFORMED
    except (OSError, UnicodeDecodeError) as exc:
        stderr.write(f"MalformedInput: {exc}\n")
        return EXIT_MALFORMED


def main() -> None:
    sys.exit(run(sys.argv[1:]))


if __name__ == "__main__":
    main()

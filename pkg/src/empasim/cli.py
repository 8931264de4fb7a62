"""Command-line front end: assemble, run, benchmark and sweep."""

import argparse
import logging
import logging.config
import sys
from importlib import resources
from pathlib import Path
from typing import IO, List, Optional, Sequence

import yaml

from empasim import __version__
from empasim.core import (
    AssemblyError,
    ClockBudgetExceededError,
    ReportFormat,
    RunMode,
    RunReport,
    SimulationFault,
    Simulator,
    SimulatorSettings,
    assemble,
    create_report_writer,
    is_object_text,
    write_object,
    write_trace,
)
from empasim.core.programs import prepare, vector_for_length
from empasim.core.supervisor import MAX_POOL_SIZE

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_ERROR = 1
EXIT_USAGE = 2
EXIT_CHECK_FAILED = 3


class _UsageError(Exception):
    """Bad combination of arguments that argparse cannot express."""


def configure_logging(verbose: bool = False) -> None:
    """Apply the packaged ``logging.yml``; ``verbose`` lowers the console to DEBUG."""
    text = resources.files("empasim").joinpath("logging.yml").read_text(encoding="utf-8")
    config = yaml.safe_load(text)
    if verbose:
        config["handlers"]["console"]["level"] = "DEBUG"
        for logger_config in config.get("loggers", {}).values():
            logger_config["level"] = "DEBUG"
    logging.config.dictConfig(config)


def parse_lengths(text: str) -> List[int]:
    """
    Parse a vector-length list.

    Accepts ``a..b``, ``a..b:step`` and comma lists such as ``1,2,4,6``.

    Raises:
        ValueError: If the text is empty or malformed
    """
    text = text.strip()
    if not text:
        raise ValueError("empty length list")
    if ".." in text:
        bounds, _, step_text = text.partition(":")
        start_text, _, stop_text = bounds.partition("..")
        start, stop = int(start_text), int(stop_text)
        step = int(step_text) if step_text else 1
        if step < 1 or start < 1 or stop < start:
            raise ValueError(f"bad length range '{text}'")
        return list(range(start, stop + 1, step))
    lengths = [int(part) for part in text.split(",") if part.strip()]
    if not lengths or min(lengths) < 1:
        raise ValueError(f"bad length list '{text}'")
    return lengths


def _pool_size(text: str) -> int:
    value = int(text)
    if not 1 <= value <= MAX_POOL_SIZE:
        raise argparse.ArgumentTypeError(f"pool size must be within 1..{MAX_POOL_SIZE}, got {value}")
    return value


def _modes(text: str) -> List[RunMode]:
    try:
        modes = [RunMode(part.strip().upper()) for part in text.split(",") if part.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"modes must be drawn from {[m.value for m in RunMode]}, got '{text}'")
    if not modes:
        raise argparse.ArgumentTypeError("at least one mode is required")
    return modes


def build_parser() -> argparse.ArgumentParser:
    """The argument parser with the asm, run, bench and sweep subcommands."""
    parser = argparse.ArgumentParser(prog="empasim", description="EMPA many-core processor simulator")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    parser.add_argument("-v", "--verbose", action="store_true", help="debug logging on the console")

    machine = argparse.ArgumentParser(add_help=False)
    machine.add_argument("--pool", type=_pool_size, default=None, help="number of cores (1..64)")
    machine.add_argument("--timing", default=None, help="timing configuration file")

    report = argparse.ArgumentParser(add_help=False)
    report.add_argument("--format", choices=[f.value for f in ReportFormat], default=None,
                        help="report format (default from settings)")
    report.add_argument("--out", default=None, help="output file (default stdout)")

    commands = parser.add_subparsers(dest="command", required=True)

    asm = commands.add_parser("asm", help="assemble a source file into object text")
    asm.add_argument("source", help="assembly source file")
    asm.add_argument("--out", default=None, help="object file (default stdout)")

    run = commands.add_parser("run", parents=[machine], help="run a program")
    run.add_argument("program", nargs="?", help="object or source file")
    run.add_argument("--sample", type=str.upper, choices=[m.value for m in RunMode], default=None,
                     help="run a shipped sum-up program instead of a file")
    run.add_argument("--veclen", type=int, default=None, help="vector length patched into the program's data")
    run.add_argument("--trace", default=None, help="write the event trace to this file")
    run.add_argument("--check-invariants", action="store_true", help="verify machine invariants every clock")

    bench = commands.add_parser("bench", parents=[machine, report], help="reproduce the efficiency table")
    bench.add_argument("--check", action="store_true", help="compare with the shipped reference table")

    sweep = commands.add_parser("sweep", parents=[machine, report], help="benchmark rows over many lengths")
    sweep.add_argument("--lengths", required=True, help="'a..b', 'a..b:step' or a comma list")
    sweep.add_argument("--modes", type=_modes, default=list(RunMode), help="comma list of NO,FOR,SUMUP")
    return parser


def _create_simulator(args: argparse.Namespace) -> Simulator:
    settings = SimulatorSettings()
    updates = {}
    if getattr(args, "pool", None):
        updates["pool_size"] = args.pool
    if getattr(args, "timing", None):
        updates["timing_path"] = args.timing
    if getattr(args, "check_invariants", False):
        updates["check_invariants"] = True
    if updates:
        settings = settings.model_copy(update=updates)
    return Simulator(settings)


def _emit(text: str, out: Optional[str], stdout: IO[str]) -> None:
    if out:
        Path(out).write_text(text, encoding="utf-8")
        logger.info(f"Wrote {out}")
    else:
        stdout.write(text)


def format_run(report: RunReport) -> str:
    """Summary printed by ``run``: totals, then the root registers and flags."""
    lines = [f"clocks={report.total_clocks} k={report.peak_cores}"]
    for name, value in report.registers.items():
        lines.append(f"{name}=0x{value:08x}")
    lines.append(" ".join(f"{name}={int(flag)}" for name, flag in report.condition_codes.items()))
    return "\n".join(lines) + "\n"


def cmd_asm(args: argparse.Namespace, stdout: IO[str]) -> int:
    source = Path(args.source).read_text(encoding="utf-8")
    image = assemble(source)
    _emit(write_object(image), args.out, stdout)
    return EXIT_OK


def cmd_run(args: argparse.Namespace, stdout: IO[str]) -> int:
    if (args.program is None) == (args.sample is None):
        raise _UsageError("give either a program file or --sample")
    simulator = _create_simulator(args)
    record_trace = args.trace is not None
    if args.sample:
        if args.veclen is None:
            raise _UsageError("--sample needs --veclen")
        report = simulator.run_sample(args.sample, veclen=args.veclen, record_trace=record_trace)
    else:
        text = Path(args.program).read_text(encoding="utf-8")
        if args.veclen is not None:
            if is_object_text(text):
                raise _UsageError("--veclen needs assembly source, not object text")
            text = prepare(text, vector_for_length(args.veclen))
        report = simulator.run(simulator.load_program(text), record_trace=record_trace)
    if record_trace:
        with open(args.trace, "w", encoding="utf-8") as stream:
            count = write_trace(report.trace, stream)
        logger.info(f"Wrote {count} trace events to {args.trace}")
    stdout.write(format_run(report))
    return EXIT_OK


def cmd_bench(args: argparse.Namespace, stdout: IO[str], stderr: IO[str]) -> int:
    simulator = _create_simulator(args)
    results = simulator.bench()
    _emit(create_report_writer(args.format).render(results), args.out, stdout)
    if args.check:
        deltas = simulator.check_against_golden(results)
        for delta in deltas:
            stderr.write(f"mismatch: {delta}\n")
        if deltas:
            return EXIT_CHECK_FAILED
    return EXIT_OK


def cmd_sweep(args: argparse.Namespace, stdout: IO[str]) -> int:
    try:
        lengths = parse_lengths(args.lengths)
    except ValueError as e:
        raise _UsageError(str(e))
    simulator = _create_simulator(args)
    results = simulator.sweep(lengths, args.modes)
    _emit(create_report_writer(args.format).render(results), args.out, stdout)
    return EXIT_OK


def main(argv: Optional[Sequence[str]] = None, stdout: IO[str] = None, stderr: IO[str] = None) -> int:
    """
    Run the command line.

    Args:
        argv: Arguments without the program name; ``sys.argv[1:]`` when None
        stdout: Stream for regular output
        stderr: Stream for diagnostics

    Returns:
        int: 0 on success, 1 on errors, 2 on usage errors, 3 when ``bench --check`` finds differences
    """
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    parser = build_parser()
    args = parser.parse_args(argv)
    configure_logging(args.verbose)

    try:
        if args.command == "asm":
            return cmd_asm(args, stdout)
        elif args.command == "run":
            return cmd_run(args, stdout)
        elif args.command == "bench":
            return cmd_bench(args, stdout, stderr)
        else:
            return cmd_sweep(args, stdout)
    except _UsageError as e:
        stderr.write(f"{parser.prog} {args.command}: error: {e}\n")
        return EXIT_USAGE
    except AssemblyError as e:
        logger.error(f"Assembly failed: {e}")
        stderr.write(f"assembly error: {e}\n")
        return EXIT_ERROR
    except SimulationFault as e:
        logger.error(f"Simulation fault: {e}")
        stderr.write(f"simulation fault: {e}\n")
        return EXIT_ERROR
    except (ClockBudgetExceededError, ValueError, OSError) as e:
        logger.error(f"{args.command} failed: {e}")
        stderr.write(f"error: {e}\n")
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())

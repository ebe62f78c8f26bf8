"""Command-line front door.

One subcommand per artifact: membership dumps, representation-function
ranges, partition construction and verification, the dilation and
block-structure checks, the sieve census, toggle-pair classes, density
studies, and the extremal ratio scan.  Reports are CSV or JSON;
``--plot`` additionally renders figures next to the output file.

Exit codes: 0 all requested assertions passed, 1 usage error,
2 assertion failure, 3 resource ceiling exceeded.
"""

from __future__ import annotations

import argparse
import contextlib
import dataclasses
import sys
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from pathlib import Path

from . import analysis, extremal, partitions, reporting
from .engine import (
    DEFAULT_MAX_ELEMENTS,
    ResourceLimitError,
    SetPrefix,
    r2_range,
    r3_range,
)
from .sequences import evil_mask

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_ASSERTION = 2
EXIT_RESOURCE = 3

COMMANDS = (
    "tm",
    "repfn",
    "construct",
    "verify",
    "lemma2",
    "blocks",
    "sdecomp",
    "tclasses",
    "density",
    "scan",
)
_REPORT_COMMANDS = ("verify", "lemma2", "blocks")

DEFAULT_THETAS = (0.005, 0.010, 0.0149)
DEFAULT_CS = (1.0, 2.0, 4.0, 8.0)


@dataclass(frozen=True)
class RunConfig:
    """Fully resolved invocation; round-trips through to_dict/from_dict."""

    command: str
    x: int | None = None
    n: int | None = None
    variant: str | None = None
    N: int | None = None
    initial: str = "thue-morse"
    theta: tuple[float, ...] = DEFAULT_THETAS
    C: tuple[float, ...] = DEFAULT_CS
    kind: str = "r2"
    window: int | None = None
    m_max: int = 256
    i_max: int = 8
    k: int | None = None
    flip: tuple[int, ...] = ()
    out: str | None = None
    format: str = "csv"
    plot: bool = False
    threads: int = 1
    max_elements: int = DEFAULT_MAX_ELEMENTS

    def to_dict(self) -> dict:
        return dataclasses.asdict(self)

    @classmethod
    def from_dict(cls, data: dict) -> "RunConfig":
        coerced = dict(data)
        for key in ("theta", "C", "flip"):
            if key in coerced and coerced[key] is not None:
                coerced[key] = tuple(coerced[key])
        return cls(**coerced)


class _Parser(argparse.ArgumentParser):
    # usage problems must exit 1, not argparse's default 2
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def build_parser() -> _Parser:
    parser = _Parser(
        prog="repkit",
        description="Representation functions of complementary partitions: "
        "construction, verification, and density studies.",
    )
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def add_common(p, *, out_default="csv"):
        p.add_argument("--out", help="output file (default: stdout)")
        p.add_argument(
            "--format", choices=("csv", "json"), default=out_default,
            help=f"output format (default: {out_default})",
        )
        p.add_argument(
            "--plot", action="store_true",
            help="render figures next to --out",
        )
        p.add_argument("--threads", type=int, default=1,
                       help="worker-thread cap for per-n analysis loops")
        p.add_argument(
            "--max-elements", dest="max_elements", type=int,
            default=DEFAULT_MAX_ELEMENTS,
            help="memory ceiling for range computations (elements)",
        )

    def add_set_options(p):
        p.add_argument(
            "--initial", default="thue-morse",
            help="preset name (thue-morse, chen-wang) or hex membership "
            "bitmap of the initial segment, little-endian, bit m = m in A",
        )
        p.add_argument("--N", type=int, help="initial-segment half-length "
                       "(default: preset's, or the bitmap's popcount)")
        p.add_argument("--variant", choices=partitions.VARIANTS,
                       help="doubling-recurrence variant (default: preset's)")
        p.add_argument(
            "--flip", type=int, nargs="+", default=(),
            help="corrupt the built set at these positions before checking",
        )

    p = sub.add_parser("tm", help="Thue-Morse membership and digit dump")
    p.add_argument("--x", type=int, required=True)
    add_common(p)

    p = sub.add_parser("repfn", help="representation-function range")
    p.add_argument("--x", type=int, required=True)
    p.add_argument("--kind", choices=analysis.KINDS, default="r2")
    add_set_options(p)
    add_common(p)

    p = sub.add_parser("construct", help="extend a partition and dump membership")
    p.add_argument("--x", type=int, required=True)
    add_set_options(p)
    add_common(p)

    p = sub.add_parser("verify", help="equality of R(A,n) and R(complement,n)")
    p.add_argument("--x", type=int, required=True)
    add_set_options(p)
    add_common(p, out_default="json")

    p = sub.add_parser("lemma2", help="dilation membership rule m -> 2^i*m+k")
    p.add_argument("--x", type=int, help="extend the set this far (optional)")
    p.add_argument("--m-max", dest="m_max", type=int, default=256)
    p.add_argument("--i-max", dest="i_max", type=int, default=8)
    add_set_options(p)
    add_common(p, out_default="json")

    p = sub.add_parser("blocks", help="aligned-window block structure")
    p.add_argument("--x", type=int, required=True)
    p.add_argument("--k", type=int, required=True, help="block length exponent")
    add_set_options(p)
    add_common(p, out_default="json")

    p = sub.add_parser("sdecomp", help="sieve census per target")
    p.add_argument("--x", type=int)
    p.add_argument("--n", type=int)
    add_common(p)

    p = sub.add_parser("tclasses", help="toggleable-pair parity classes")
    p.add_argument("--x", type=int)
    p.add_argument("--n", type=int)
    add_common(p)

    p = sub.add_parser("density", help="good-n density per dyadic window")
    p.add_argument("--x", type=int, required=True)
    p.add_argument("--theta", type=float, nargs="+", default=list(DEFAULT_THETAS))
    p.add_argument("--C", type=float, nargs="+", default=list(DEFAULT_CS))
    p.add_argument("--kind", choices=analysis.KINDS, default="r2")
    add_set_options(p)
    add_common(p)

    p = sub.add_parser("scan", help="window extremes of R(A,n)/n")
    p.add_argument("--x", type=int, required=True)
    p.add_argument("--window", type=int, help="window width (default: x/16)")
    p.add_argument("--kind", choices=analysis.KINDS, default="r2")
    add_set_options(p)
    add_common(p, out_default="json")

    return parser


def config_from_args(ns: argparse.Namespace) -> RunConfig:
    values = {}
    for field in dataclasses.fields(RunConfig):
        if hasattr(ns, field.name):
            value = getattr(ns, field.name)
            if field.name in ("theta", "C", "flip") and value is not None:
                value = tuple(value)
            values[field.name] = value
    if values.get("command") == "scan" and values.get("window") is None:
        values["window"] = max(1, values["x"] // 16)
    return RunConfig(**values)


def _resolve_spec(cfg: RunConfig) -> partitions.PartitionSpec:
    if cfg.initial in partitions.PRESETS:
        base = partitions.preset_initial(cfg.initial, cfg.N or 1)
        variant = cfg.variant or base.variant
        return partitions.PartitionSpec(variant, base.N, base.initial)
    try:
        bitmap = int(cfg.initial, 16)
    except ValueError:
        raise ValueError(
            f"--initial must be a preset {partitions.PRESETS} or a hex bitmap, "
            f"got {cfg.initial!r}"
        ) from None
    n_members = bitmap.bit_count()
    N = cfg.N if cfg.N is not None else n_members
    return partitions.PartitionSpec(cfg.variant or "r2", N, bitmap)


def _build_prefix(cfg: RunConfig, bound: int) -> tuple[partitions.PartitionSpec, SetPrefix]:
    spec = _resolve_spec(cfg)
    prefix = partitions.extend_partition(spec, bound)
    if cfg.flip:
        bits = prefix.bits
        for pos in cfg.flip:
            if pos < 0 or pos > bound:
                raise ValueError(f"--flip position {pos} outside [0, {bound}]")
            bits ^= 1 << pos
        prefix = SetPrefix(bits, bound)
    return spec, prefix


def _out_stream(cfg: RunConfig):
    if cfg.out:
        return open(cfg.out, "w", newline="")
    return contextlib.nullcontext(sys.stdout)


def _figure_path(cfg: RunConfig, suffix: str = "") -> Path:
    return Path(cfg.out).with_suffix("").with_name(
        Path(cfg.out).stem + suffix + ".png"
    )


def _check_plot(cfg: RunConfig) -> None:
    if cfg.plot and not cfg.out:
        raise ValueError("--plot needs --out to place figures next to the report")


def _emit_table(cfg: RunConfig, header: list[str], rows: list[tuple]) -> None:
    with _out_stream(cfg) as fh:
        if cfg.format == "csv":
            reporting.write_csv(fh, header, rows)
        else:
            reporting.dump_json(
                [dict(zip(header, row)) for row in rows], fh
            )


def _emit_report(cfg: RunConfig, report, csv_header: list[str]) -> None:
    with _out_stream(cfg) as fh:
        if cfg.format == "csv":
            reporting.write_csv(fh, csv_header, report.failures)
        else:
            reporting.dump_json(report, fh)


def _targets(cfg: RunConfig) -> list[int]:
    if (cfg.n is None) == (cfg.x is None):
        raise ValueError("give exactly one of --n or --x")
    if cfg.n is not None:
        return [cfg.n]
    return list(range(1, cfg.x + 1))


def _map_rows(targets, fn, threads: int) -> list[tuple]:
    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            produced = list(pool.map(fn, targets))
    else:
        produced = [fn(t) for t in targets]
    return [row for row in produced if row is not None]


def _cmd_tm(cfg: RunConfig) -> int:
    if cfg.x < 0:
        raise ValueError("--x must be nonnegative")
    mask = evil_mask(cfg.x)
    rows = [(n, int(mask[n]), format(n, "b")) for n in range(cfg.x + 1)]
    _emit_table(cfg, ["n", "member", "bits"], rows)
    return EXIT_OK


def _cmd_repfn(cfg: RunConfig) -> int:
    _check_plot(cfg)
    _, prefix = _build_prefix(cfg, cfg.x)
    rng = r2_range if cfg.kind == "r2" else r3_range
    counts = rng(prefix, cfg.x, max_elements=cfg.max_elements)
    rows = [(n, int(counts[n])) for n in range(cfg.x + 1)]
    _emit_table(cfg, ["n", cfg.kind], rows)
    if cfg.plot and cfg.out:
        from . import plots

        plots.save_range_plot(counts, cfg.kind, _figure_path(cfg))
    return EXIT_OK


def _cmd_construct(cfg: RunConfig) -> int:
    _, prefix = _build_prefix(cfg, cfg.x)
    mask = prefix.to_bool_array()
    rows = [(n, int(mask[n])) for n in range(cfg.x + 1)]
    _emit_table(cfg, ["n", "member"], rows)
    return EXIT_OK


def _cmd_verify(cfg: RunConfig) -> int:
    spec, prefix = _build_prefix(cfg, cfg.x)
    report = partitions.verify_equality(prefix, spec.N, cfg.x, spec.variant)
    rules_ok = partitions.check_digit_rules(prefix, spec.N, cfg.x, spec.variant)
    with _out_stream(cfg) as fh:
        if cfg.format == "csv":
            reporting.write_csv(fh, ["n", "lhs", "rhs"], report.failures)
        else:
            data = reporting.to_jsonable(report)
            data["digit_rules_ok"] = rules_ok
            reporting.dump_json(data, fh)
    return EXIT_OK if report.passed and rules_ok else EXIT_ASSERTION


def _cmd_lemma2(cfg: RunConfig) -> int:
    spec = _resolve_spec(cfg)
    needed = (cfg.m_max << cfg.i_max) + (1 << cfg.i_max) - 1
    bound = max(needed, cfg.x or 0, 2 * spec.N - 1)
    _, prefix = _build_prefix(cfg, bound)
    report = partitions.dilation_check(prefix, spec.N, cfg.m_max, cfg.i_max)
    _emit_report(cfg, report, ["m", "i", "k"])
    return EXIT_OK if report.passed else EXIT_ASSERTION


def _cmd_blocks(cfg: RunConfig) -> int:
    spec, prefix = _build_prefix(cfg, cfg.x)
    report = partitions.block_structure_check(prefix, spec, cfg.k)
    _emit_report(cfg, report, ["j", "j_in_a", "mismatches"])
    return EXIT_OK if report.passed else EXIT_ASSERTION


def _cmd_sdecomp(cfg: RunConfig) -> int:
    _check_plot(cfg)

    def row(n: int):
        if n < 1 or analysis.block_profile(n).count == 0:
            return None
        counts = analysis.sieve_counts(n)
        blocks = analysis.block_profile(n).count
        return (n, blocks, counts.total, counts.missed, counts.failed, counts.kept)

    rows = _map_rows(_targets(cfg), row, cfg.threads)
    _emit_table(
        cfg, ["n", "blocks", "total", "missed", "failed", "kept"], rows
    )
    if cfg.plot and cfg.out and rows:
        from . import plots

        plots.save_sdecomp_plot(rows, _figure_path(cfg))
    return EXIT_OK


def _cmd_tclasses(cfg: RunConfig) -> int:
    _check_plot(cfg)

    def row(n: int):
        if n < 1:
            return None
        aa, bb, ab, ba = analysis.toggle_counts(n)
        return (n, aa, bb, ab, ba)

    rows = _map_rows(_targets(cfg), row, cfg.threads)
    _emit_table(cfg, ["n", "aa", "bb", "ab", "ba"], rows)
    if cfg.plot and cfg.out and rows:
        from . import plots

        plots.save_tclasses_plot(rows, _figure_path(cfg))
    return EXIT_OK


def _cmd_density(cfg: RunConfig) -> int:
    _check_plot(cfg)
    _, prefix = _build_prefix(cfg, cfg.x)
    reports = analysis.density_grid(
        prefix, cfg.x, cfg.theta, cfg.C, cfg.kind, max_elements=cfg.max_elements
    )
    if cfg.format == "json":
        with _out_stream(cfg) as fh:
            reporting.dump_json(reports, fh)
    elif len(reports) == 1:
        with _out_stream(cfg) as fh:
            reporting.write_csv(
                fh, reporting.DENSITY_HEADER, reporting.density_rows(reports[0])
            )
    else:
        if not cfg.out:
            raise ValueError(
                "CSV with several (theta, C) combinations needs --out; "
                "one file is written per combination"
            )
        base = Path(cfg.out)
        for rep in reports:
            path = base.with_name(
                f"{base.stem}_theta{rep.theta:g}_C{rep.C:g}{base.suffix}"
            )
            with open(path, "w", newline="") as fh:
                reporting.write_csv(
                    fh, reporting.DENSITY_HEADER, reporting.density_rows(rep)
                )
    if cfg.plot and cfg.out:
        from . import plots

        plots.save_density_plot(reports, _figure_path(cfg))
        plots.save_per_f_plot(reports, _figure_path(cfg, "_fdev"))
    return EXIT_OK


def _cmd_scan(cfg: RunConfig) -> int:
    _check_plot(cfg)
    _, prefix = _build_prefix(cfg, cfg.x)
    records = extremal.extremal_scan(
        prefix, cfg.x, cfg.window, cfg.kind, max_elements=cfg.max_elements
    )
    with _out_stream(cfg) as fh:
        if cfg.format == "csv":
            reporting.write_csv(fh, reporting.SCAN_HEADER, reporting.scan_rows(records))
        else:
            reporting.dump_json(records, fh)
    if cfg.plot and cfg.out:
        from . import plots

        plots.save_scan_plot(records, _figure_path(cfg))
    return EXIT_OK


_HANDLERS = {
    "tm": _cmd_tm,
    "repfn": _cmd_repfn,
    "construct": _cmd_construct,
    "verify": _cmd_verify,
    "lemma2": _cmd_lemma2,
    "blocks": _cmd_blocks,
    "sdecomp": _cmd_sdecomp,
    "tclasses": _cmd_tclasses,
    "density": _cmd_density,
    "scan": _cmd_scan,
}


def run(cfg: RunConfig) -> int:
    """Dispatch a resolved configuration; returns the exit status."""
    if cfg.command not in _HANDLERS:
        raise ValueError(f"unknown command {cfg.command!r}")
    if cfg.threads < 1:
        raise ValueError("--threads must be at least 1")
    return _HANDLERS[cfg.command](cfg)


def main(argv=None) -> int:
    parser = build_parser()
    try:
        ns = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return run(config_from_args(ns))
    except ResourceLimitError as exc:
        print(f"repkit: resource ceiling: {exc}", file=sys.stderr)
        return EXIT_RESOURCE
    except ValueError as exc:
        print(f"repkit: error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())

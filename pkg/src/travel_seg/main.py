"""
Main entry point for the travel CLI.
Subcommands: segment, eval, synth, sweep, bench and config.
"""

import functools
import logging
import os
import sys
from pathlib import Path

import click
from rich.console import Console
from rich.table import Table

from . import __version__
from .config import USER_SETTINGS, Config, PipelineConfig, resolve_config
from .core.io import SCAN_FORMATS
from .errors import ConfigError, InputError, TravelError
from .metrics import summarize_frames, write_metrics_csv, write_metrics_json
from .runner import (
    MANIFEST_NAME,
    RunManifest,
    evaluate_labels,
    load_pose_table,
    parse_pose,
    run_bench,
    run_segment,
    run_sweep,
    write_rows_csv,
)
from .synth import render, scenario_suite, write_labeled_scan
from .utils import collect_labels, collect_scans

console = Console()

# --- Logging ---
LOG_FORMAT = "%(asctime)s - %(levelname)s - [%(filename)s:%(lineno)d] - %(message)s"


def setup_logging(level: str | None = None):
    """Configure the root logger once: one stream handler, level from LOG_LEVEL unless given."""
    log_level = (level or os.environ.get("LOG_LEVEL", "WARNING")).upper()
    root_logger = logging.getLogger()
    root_logger.setLevel(log_level)
    # Remove existing handlers to avoid duplicates
    for handler in root_logger.handlers[:]:
        root_logger.removeHandler(handler)
    stream_handler = logging.StreamHandler(sys.stderr)
    stream_handler.setLevel(log_level)
    stream_handler.setFormatter(logging.Formatter(LOG_FORMAT))
    root_logger.addHandler(stream_handler)


log = logging.getLogger(__name__)


# --- Error handling ---


def handle_errors(func):
    """Map library errors to exit codes: 3 input, 4 config, 5 internal."""

    @functools.wraps(func)
    def wrapper(*args, **kwargs):
        try:
            return func(*args, **kwargs)
        except ConfigError as e:
            console.print(f"[bold red]Configuration error:[/bold red] {e}")
            sys.exit(e.exit_code)
        except TravelError as e:
            console.print(f"[bold red]Error:[/bold red] {e}")
            sys.exit(e.exit_code)
        except (click.ClickException, click.exceptions.Exit):
            raise
        except Exception as e:
            console.print(f"[bold red]Internal error:[/bold red] {e}")
            log.error(f"Unhandled error in {func.__name__}", exc_info=True)
            sys.exit(TravelError.exit_code)

    return wrapper


def _user_config() -> Config | None:
    try:
        return Config()
    except OSError as e:
        log.warning(f"User config unavailable: {e}")
        return None


def _pipeline_config(config_path, sets, base: PipelineConfig | None = None) -> PipelineConfig:
    overrides = {}
    for item in sets:
        if "=" not in item:
            raise ConfigError(item, "expected key=value")
        key, value = item.split("=", 1)
        overrides[key.strip()] = value.strip()
    return resolve_config(None if base is not None else _user_config(), config_path, overrides, base=base)


def _scene_list(names) -> list:
    suite = scenario_suite()
    if not names:
        return list(suite.values())
    wanted = [n.strip() for item in names for n in item.split(",") if n.strip()]
    unknown = [n for n in wanted if n not in suite]
    if unknown:
        raise ConfigError("scenes", f"unknown scene(s) {', '.join(unknown)}; available: {', '.join(suite)}")
    return [suite[n] for n in wanted]


def _fmt(value) -> str:
    if value is None:
        return "-"
    if isinstance(value, float):
        return f"{value:.4f}"
    return str(value)


config_option = click.option(
    "--config", "config_path", type=click.Path(dir_okay=False), default=None,
    help="Pipeline config file (YAML or key=value). Defaults to $TRAVEL_CONFIG.",
)
set_option = click.option("--set", "sets", multiple=True, metavar="KEY=VALUE", help="Override one pipeline value.")


CONTEXT_SETTINGS = dict(help_option_names=["-h", "--help"])


@click.group(context_settings=CONTEXT_SETTINGS)
@click.version_option(__version__, prog_name="travel")
@click.option("--log-level", default=None, help="Logging level (default: $LOG_LEVEL or WARNING).")
def cli(log_level):
    """Traversable ground segmentation and object clustering for LiDAR scans."""
    setup_logging(log_level)
    log.info(f"travel {__version__} starting")


# --- segment ---


@cli.command()
@click.argument("inputs", nargs=-1, type=click.Path())
@click.option("--out", "-o", "out_dir", type=click.Path(file_okay=False), required=True, help="Output directory.")
@click.option("--format", "fmt", type=click.Choice(SCAN_FORMATS), default=None, help="Scan format (default: by suffix).")
@click.option("--jobs", "-j", type=int, default=None, help="Worker processes.")
@click.option("--manifest", "manifest_path", type=click.Path(dir_okay=False), default=None,
              help="Replay the config (and inputs, if none are given) of a previous run.")
@click.option("--dump-nodes", is_flag=True, help="Write a per-node CSV of the tri-grid field.")
@click.option("--cluster-summary", is_flag=True, help="Write a per-cluster CSV.")
@click.option("--pose", "pose_text", default=None, metavar="ROLL,PITCH",
              help="Sensor attitude in radians, applied to every scan.")
@click.option("--poses", "poses_path", type=click.Path(exists=True, dir_okay=False), default=None,
              help="Per-scan attitude CSV (frame,roll,pitch[,yaw]); overrides --pose.")
@config_option
@set_option
@handle_errors
def segment(inputs, out_dir, fmt, jobs, manifest_path, dump_nodes, cluster_summary, pose_text, poses_path, config_path,
            sets):
    """Segment scans into terrain (0) and cluster ids, one label file per scan."""
    recorded = {}
    if manifest_path:
        previous = RunManifest.load(manifest_path)
        # --config and --set apply on top of the replayed values
        config = _pipeline_config(config_path, sets, base=previous.pipeline_config())
        recorded = previous.poses()
        inputs = inputs or tuple(previous.inputs)
        console.print(f"Replaying configuration from [bold]{manifest_path}[/bold]")
    else:
        config = _pipeline_config(config_path, sets)
    if not inputs:
        raise InputError("No input scans given")
    scans = collect_scans(inputs)
    if not scans:
        raise InputError("No scan files found in the given inputs")
    poses = {}
    if pose_text or recorded:
        shared = parse_pose(pose_text) if pose_text else None
        poses = {p.stem: shared or recorded.get(p.stem) for p in scans}
    if poses_path:
        poses.update(load_pose_table(poses_path))
    poses = {stem: pose for stem, pose in poses.items() if pose is not None}
    user = _user_config()
    jobs = jobs or (user.get_setting("jobs", 1) if user else 1)

    with console.status(f"[yellow]Segmenting {len(scans)} scan(s)...[/yellow]"):
        manifest = run_segment(scans, config, out_dir, fmt, int(jobs), dump_nodes, cluster_summary, poses)

    table = Table(title="Segmentation")
    for column in ("scan", "points", "terrain", "clusters", "total ms"):
        table.add_column(column)
    for frame in manifest.frames:
        if frame.get("error"):
            table.add_row(Path(frame["input"]).name, "[red]failed[/red]", "", "", "")
        else:
            table.add_row(
                Path(frame["input"]).name, str(frame["points"]), str(frame["terrain"]),
                str(frame["clusters"]), f"{frame['timings']['total']:.1f}",
            )
    console.print(table)
    console.print(f"[green]✓[/green] Manifest written to {Path(out_dir) / MANIFEST_NAME}")
    if manifest.failures:
        for frame in manifest.failures:
            console.print(f"[bold red]Failed:[/bold red] {frame['input']}: {frame['error']}")
        sys.exit(InputError.exit_code)


# --- eval ---


@cli.command(name="eval")
@click.option("--pred", "pred_path", type=click.Path(exists=True), required=True, help="Predicted label file or directory.")
@click.option("--truth", "truth_path", type=click.Path(exists=True), required=True, help="Truth label file or directory.")
@click.option("--scans", "scans_path", type=click.Path(exists=True), default=None, help="Scans, for euclidean objects.")
@click.option("--objects", type=click.Choice(["labels", "euclidean"]), default="labels",
              help="Where ground-truth objects come from.")
@click.option("--ec-radius", type=float, default=0.5, show_default=True, help="Euclidean oracle radius (m).")
@click.option("--out", "-o", "out_path", type=click.Path(dir_okay=False), default=None, help="Metrics CSV.")
@click.option("--json", "json_path", type=click.Path(dir_okay=False), default=None, help="Metrics JSON summary.")
@handle_errors
def evaluate(pred_path, truth_path, scans_path, objects, ec_radius, out_path, json_path):
    """Score predicted label files against Semantic-KITTI-style ground truth."""
    pred = collect_labels(pred_path)
    truth = collect_labels(truth_path)
    scans = collect_scans([scans_path]) if scans_path else None
    frames = evaluate_labels(pred, truth, scans, objects, ec_radius)

    table = Table(title=f"Metrics ({len(frames)} frames)")
    for column in ("frame", "P", "R", "F1", "accuracy", "OSE", "USE"):
        table.add_column(column)
    for frame in frames:
        row = frame.row()
        table.add_row(row["frame_id"], *(_fmt(row[k]) for k in ("precision", "recall", "f1", "accuracy", "ose", "use")))
    summary = summarize_frames(frames)
    for stat in ("mean", "std"):
        table.add_row(
            f"[bold]{stat}[/bold]",
            *(_fmt(summary[k][stat]) for k in ("precision", "recall", "f1", "accuracy", "ose", "use")),
        )
    console.print(table)
    if out_path:
        write_metrics_csv(frames, out_path)
        console.print(f"[green]✓[/green] Metrics CSV written to {out_path}")
    if json_path:
        write_metrics_json(frames, json_path, extra={"objects": objects, "version": __version__})
        console.print(f"[green]✓[/green] Metrics JSON written to {json_path}")


# --- synth ---


@cli.command()
@click.argument("scenes", nargs=-1)
@click.option("--out", "-o", "out_dir", type=click.Path(file_okay=False), default=None, help="Output directory.")
@click.option("--format", "fmt", type=click.Choice(SCAN_FORMATS), default="kitti_bin", show_default=True)
@click.option("--seed", type=int, default=None, help="Override every scene's noise seed.")
@click.option("--noise", type=float, default=None, help="Override every scene's range noise sigma (m).")
@click.option("--list", "list_only", is_flag=True, help="List the suite and exit.")
@handle_errors
def synth(scenes, out_dir, fmt, seed, noise, list_only):
    """Render synthetic scenes with ground-truth labels."""
    selected = _scene_list(scenes)
    if list_only:
        table = Table(title="Scenario suite")
        for column in ("scene", "expected clusters", "overrides", "note"):
            table.add_column(column)
        for scene in selected:
            overrides = ", ".join(f"{k}={v}" for k, v in scene.overrides.items())
            table.add_row(scene.name, _fmt(scene.expected_clusters), overrides, scene.note)
        console.print(table)
        return
    if not out_dir:
        raise click.UsageError("--out is required unless --list is given")
    for scene in selected:
        spec = scene.spec
        if seed is not None or noise is not None:
            spec = type(spec)(
                name=spec.name, primitives=spec.primitives, sensor=spec.sensor,
                noise_sigma=spec.noise_sigma if noise is None else noise,
                seed=spec.seed if seed is None else seed, pose=spec.pose,
            )
        scan_path, label_path = write_labeled_scan(render(spec), out_dir, fmt)
        console.print(f"[green]✓[/green] {scene.name}: {scan_path} + {label_path.name}")


# --- sweep ---


@cli.command()
@click.option("--param", required=True, help="PipelineConfig field to vary.")
@click.option("--values", required=True, help="Comma-separated values.")
@click.option("--scenes", multiple=True, help="Scene names (comma-separated or repeated). Default: whole suite.")
@click.option("--out", "-o", "out_path", type=click.Path(dir_okay=False), default=None, help="Sweep CSV.")
@config_option
@set_option
@handle_errors
def sweep(param, values, scenes, out_path, config_path, sets):
    """Evaluate the suite scenes over a range of one parameter."""
    if param not in PipelineConfig.field_names():
        raise ConfigError(param, "unknown parameter for sweep")
    base = _pipeline_config(config_path, sets)
    value_list = [v.strip() for v in values.split(",") if v.strip()]
    if not value_list:
        raise ConfigError("values", "no values given")
    selected = _scene_list(scenes)
    with console.status(f"[yellow]Sweeping {param} over {len(value_list)} value(s)...[/yellow]"):
        rows = run_sweep(param, value_list, selected, base)

    table = Table(title=f"Sweep {param}")
    for column in ("value", "scene", "F1", "OSE", "USE", "clusters", "expected", "total ms"):
        table.add_column(column)
    for row in rows:
        table.add_row(
            _fmt(row["value"]), row["scene"], _fmt(row["f1"]), _fmt(row["ose"]), _fmt(row["use"]),
            str(row["clusters"]), _fmt(row["expected_clusters"]), _fmt(row.get("t_total_ms")),
        )
    console.print(table)
    if out_path:
        write_rows_csv(rows, out_path)
        console.print(f"[green]✓[/green] Sweep CSV written to {out_path}")


# --- bench ---


@cli.command()
@click.option("--scenes", multiple=True, help="Scene names. Default: whole suite.")
@click.option("--repeats", type=int, default=5, show_default=True)
@click.option("--out", "-o", "out_path", type=click.Path(dir_okay=False), default=None, help="Timing CSV.")
@config_option
@set_option
@handle_errors
def bench(scenes, repeats, out_path, config_path, sets):
    """Time every pipeline stage on the suite scenes."""
    base = _pipeline_config(config_path, sets)
    with console.status("[yellow]Benchmarking...[/yellow]"):
        rows = run_bench(_scene_list(scenes), base, repeats)
    table = Table(title=f"Stage timings, ms (mean ± std over {repeats})")
    for column in ("scene", "points", "align", "ground", "cluster", "total"):
        table.add_column(column)
    for row in rows:
        cells = [f"{row[f'{s}_mean_ms']:.1f} ± {row[f'{s}_std_ms']:.1f}" for s in ("align", "ground", "cluster", "total")]
        table.add_row(row["scene"], str(row["points"]), *cells)
    console.print(table)
    if out_path:
        write_rows_csv(rows, out_path)
        console.print(f"[green]✓[/green] Timing CSV written to {out_path}")


# --- config ---


@cli.group(name="config")
def config_group():
    """Show or edit the user defaults file."""


@config_group.command(name="show")
@handle_errors
def config_show():
    user = Config()
    effective = resolve_config(user)
    overrides = user.pipeline_overrides()
    table = Table(title=f"Pipeline config ({user.config_file})")
    table.add_column("key")
    table.add_column("value")
    table.add_column("source")
    for key, value in effective.to_dict().items():
        table.add_row(key, str(value), "user" if key in overrides else "default")
    for key in USER_SETTINGS:
        table.add_row(key, str(user.get_setting(key, 1)), "setting")
    console.print(table)


@config_group.command(name="set")
@click.argument("key")
@click.argument("value")
@handle_errors
def config_set(key, value):
    """Set a pipeline value, or a CLI setting such as jobs."""
    if key in USER_SETTINGS:
        Config().set_setting(key, value)
    else:
        Config().set_pipeline_value(key, value)
    console.print(f"[green]✓[/green] {key} set to [bold]{value}[/bold].")


@config_group.command(name="reset")
@handle_errors
def config_reset():
    Config().reset()
    console.print("[green]✓[/green] Pipeline overrides cleared.")


if __name__ == "__main__":
    cli()

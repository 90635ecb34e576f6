"""Command-line interface for the chase pressure pipeline."""

from __future__ import annotations

import json
import logging
import sys
from pathlib import Path

import click

from . import distfit, evaluate as evaluate_mod, ingest, markov, strategy
from .phases import DEFAULT_PHASES, phase_of_over
from .pressure import ChaseContext, InningsState
from .server import ModelBundle, create_app

log = logging.getLogger(__name__)


@click.group()
@click.option("--verbose", is_flag=True, help="Enable debug logging.")
def main(verbose: bool):
    """Pressure-index modeling for T20 run chases."""
    logging.basicConfig(level=logging.DEBUG if verbose else logging.INFO,
                        format="%(levelname)s %(name)s: %(message)s")


@main.command("ingest")
@click.option("--input", "inputs", multiple=True, required=True,
              type=click.Path(exists=True), help="Match file or directory.")
@click.option("--format", "fmt", type=click.Choice(["json", "csv"]), default="json")
@click.option("--out", required=True, type=click.Path())
@click.option("--no-filter", is_flag=True, help="Keep every decided match.")
def ingest_cmd(inputs, fmt, out, no_filter):
    """Parse match files into a PI-sequence corpus."""
    paths: list[Path] = []
    for item in inputs:
        p = Path(item)
        paths.extend(sorted(p.glob(f"*.{fmt}")) if p.is_dir() else [p])
    matches = []
    for p in paths:
        try:
            matches.append(ingest.parse_match(p.read_text(), fmt))
        except Exception as exc:
            log.warning("skipping %s: %s", p, exc)
    if not no_filter:
        matches = ingest.filter_corpus(matches)
    seqs = ingest.build_sequences(matches)
    ingest.save_corpus(seqs, out)
    click.echo(f"wrote {len(seqs)} sequences to {out}")


@main.command("build-model")
@click.option("--corpus", required=True, type=click.Path(exists=True))
@click.option("--order", default=3, show_default=True)
@click.option("--precision", default=0.1, show_default=True)
@click.option("--phase", type=click.Choice([p.label for p in DEFAULT_PHASES]))
@click.option("--out", required=True, type=click.Path())
def build_model_cmd(corpus, order, precision, phase, out):
    """Build an order-k transition model from a corpus."""
    seqs = ingest.load_corpus(corpus)
    phase_obj = next((p for p in DEFAULT_PHASES if p.label == phase), None)
    model = markov.build_transitions(
        seqs, order, markov.Discretizer(precision), phase_obj)
    markov.save_model(model, out)
    click.echo(f"order={order} states={model.n_states} "
               f"transitions={model.n_transitions} -> {out}")


@main.command("select-order")
@click.option("--corpus", required=True, type=click.Path(exists=True))
@click.option("--kmax", default=7, show_default=True)
@click.option("--precision", default=0.1, show_default=True)
@click.option("--split", default=0.8, show_default=True)
@click.option("--seed", default=0, show_default=True)
def select_order_cmd(corpus, kmax, precision, split, seed):
    """Compare model orders on a held-out split."""
    seqs = ingest.load_corpus(corpus)
    report = markov.select_order(seqs, kmax, markov.Discretizer(precision),
                                 split, seed)
    click.echo(f"{'k':>3} {'params':>8} {'obs':>8} {'loglik':>12} "
               f"{'AIC':>12} {'BIC':>12} {'ratio':>8}")
    for r in report.rows:
        click.echo(f"{r.order:>3} {r.n_parameters:>8} {r.n_observations:>8} "
                   f"{r.log_likelihood:>12.2f} {r.aic:>12.2f} {r.bic:>12.2f} "
                   f"{r.ratio:>8.4f}")
    click.echo(f"recommended order: {report.recommended_order}")


@main.command("fit-phases")
@click.option("--corpus", required=True, type=click.Path(exists=True))
@click.option("--bootstrap", default=1000, show_default=True)
@click.option("--seed", default=0, show_default=True)
@click.option("--out", required=True, type=click.Path())
def fit_phases_cmd(corpus, bootstrap, seed, out):
    """Fit phase distributions and validate with a bootstrap K-S test."""
    seqs = ingest.load_corpus(corpus)
    fits = distfit.fit_phases(seqs, bootstrap, seed)
    distfit.save_fits(fits, out)
    for label, (best, _) in fits.items():
        click.echo(f"{label}: {best.family.value} shape={best.shape:.3f} "
                   f"rate={best.rate:.3f} p={best.bootstrap_p:.3f}")


def _load_models(model_dir: str) -> dict[str, markov.TransitionModel]:
    d = Path(model_dir)
    models: dict[str, markov.TransitionModel] = {}
    global_path = d / "global.json"
    if global_path.exists():
        m = markov.load_model(global_path)
        return {p.label: m for p in DEFAULT_PHASES}
    for p in DEFAULT_PHASES:
        path = d / f"{p.label}.json"
        if not path.exists():
            raise click.ClickException(f"missing model file {path}")
        models[p.label] = markov.load_model(path)
    return models


def _load_fallbacks(fits_path: str) -> dict[str, object]:
    if fits_path:
        return distfit.load_fits(fits_path)
    return dict(distfit.DEFAULT_PHASE_GAMMAS)


@main.command("evaluate")
@click.option("--models", "model_dir", required=True, type=click.Path(exists=True))
@click.option("--fits", "fits_path", type=click.Path(exists=True))
@click.option("--corpus", required=True, type=click.Path(exists=True))
@click.option("--confidence", default=0.95, show_default=True)
@click.option("--out", type=click.Path())
def evaluate_cmd(model_dir, fits_path, corpus, confidence, out):
    """Score predictions on a test corpus."""
    seqs = ingest.load_corpus(corpus)
    suite = evaluate_mod.evaluate_predictions(
        _load_models(model_dir), _load_fallbacks(fits_path), seqs, confidence)
    reports = [suite.global_report, *suite.by_phase.values(),
               *sorted(suite.by_over.values(), key=lambda r: r.group),
               *suite.by_competition.values()]
    for r in reports:
        click.echo(f"{r.group}: n={r.n_predictions} mae={r.mae:.4f} "
                   f"rmse={r.rmse:.4f} coverage={r.coverage_pct:.1f}% "
                   f"markov={r.markov_usage_pct:.1f}%")
    if out:
        Path(out).write_text(json.dumps(
            [r.__dict__ for r in reports], indent=2))


@main.command("predict")
@click.option("--model", "model_path", required=True, type=click.Path(exists=True))
@click.option("--fits", "fits_path", type=click.Path(exists=True))
@click.option("--recent", required=True,
              help="Comma-separated last k over-end PI values.")
@click.option("--over", type=int, help="The over being predicted.")
@click.option("--confidence", default=0.95, show_default=True)
def predict_cmd(model_path, fits_path, recent, over, confidence):
    """Predict the next over-end PI from recent values."""
    model = markov.load_model(model_path)
    values = [float(x) for x in recent.split(",")]
    phase = phase_of_over(over, DEFAULT_PHASES).label if over else (
        model.phase.label if model.phase else "middle")
    fallback = _load_fallbacks(fits_path)[phase]
    pred = markov.predict_next(model, values, fallback, confidence, over=over)
    click.echo(json.dumps({
        "expected_pi": pred.expected_pi,
        "interval": list(pred.interval),
        "source": pred.source.value,
        "n_observations": pred.n_observations,
    }))


def _parse_state(state: str) -> dict:
    out: dict = {}
    for part in state.split(";"):
        key, _, value = part.partition("=")
        out[key.strip()] = value.strip()
    required = {"t", "pi", "venue", "target", "runs", "wkts"}
    missing = required - out.keys()
    if missing:
        raise click.ClickException(f"state string missing {sorted(missing)}")
    return out


@main.command("recommend")
@click.option("--models", "model_dir", required=True, type=click.Path(exists=True))
@click.option("--fits", "fits_path", type=click.Path(exists=True))
@click.option("--zone-table", "zone_path", type=click.Path(exists=True))
@click.option("--state", required=True,
              help='e.g. "t=12;pi=1.3,1.4,1.5;venue=home;target=173;runs=99;wkts=1"')
def recommend_cmd(model_dir, fits_path, zone_path, state):
    """Zone recommendation for a live match state."""
    parts = _parse_state(state)
    over = int(parts["t"])
    history = [float(x) for x in parts["pi"].split(",")]
    wkts = int(parts["wkts"])
    ctx = ChaseContext(int(parts["target"]))
    st = InningsState(int(parts["runs"]), min(over * 6, ctx.total_balls),
                      tuple(range(1, wkts + 1)))
    table = strategy.ZoneTable.load_csv(zone_path) if zone_path else None
    rec = strategy.recommend(over, history, parts["venue"], _load_models(model_dir),
                             _load_fallbacks(fits_path), ctx, st, table)
    click.echo(json.dumps({
        "current_pi": rec.current_pi,
        "zone": rec.zone.value,
        "message": rec.message,
        "target_band": list(rec.target_band),
        "required_run_rate_hint": rec.required_run_rate_hint,
        "predicted": None if rec.predicted is None else rec.predicted.expected_pi,
        "basis": rec.basis,
    }))


@main.command("serve")
@click.option("--models", "model_dir", required=True, type=click.Path(exists=True))
@click.option("--fits", "fits_path", type=click.Path(exists=True))
@click.option("--zone-table", "zone_path", type=click.Path(exists=True))
@click.option("--host", default="127.0.0.1", show_default=True)
@click.option("--port", default=8000, show_default=True)
def serve_cmd(model_dir, fits_path, zone_path, host, port):
    """Run the live-session HTTP service."""
    import uvicorn

    bundle = ModelBundle(
        models=_load_models(model_dir),
        fits=_load_fallbacks(fits_path),
        zone_table=(strategy.ZoneTable.load_csv(zone_path)
                    if zone_path else strategy.default_zone_table()),
    )
    uvicorn.run(create_app(bundle), host=host, port=port)


if __name__ == "__main__":
    main(sys.argv[1:])

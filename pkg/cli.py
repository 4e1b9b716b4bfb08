"""
Command-line interface for pa-tail-lab
Graph generation, theory tables, tail estimation, embedding batches and replication runs
"""

import json
import logging
import sys
from pathlib import Path

import click
import numpy as np
import pandas as pd
from pydantic import ValidationError

from data_loader import default_config_path, load_experiment_config, read_degree_file
from utils.audit_utils import format_run_log_df, get_run_log
from utils.bi_embedding import embedding_batch, limit_law_checks
from utils.degree_law import TheoreticalLaw, epsilon_bound_report, expected_tail_counts
from utils.experiments import compare_with_reference, consistency_sweep, qq_data, replicate
from utils.export_utils import create_experiment_report, create_simple_export, write_degree_file, write_edge_csv
from utils.pa_graph import Model, PaParams, grow
from utils.settings_utils import get_log_level
from utils.tail_estimation import (
    DEFAULT_K_MIN, DegenerateTailError, SortedSample, alpha_hat, hill, kn_default, ks_distance,
    min_distance_select
)

logger = logging.getLogger("pa_tail_lab")

MODEL_CHOICE = click.Choice(["A", "B"], case_sensitive=False)


def _emit(payload: dict) -> None:
    click.echo(json.dumps(payload, indent=2, default=float))


@click.group()
@click.option("--log-level", default=None, help="DEBUG, INFO, WARNING (default from PA_TAIL_LAB_LOG_LEVEL)")
def main(log_level):
    """Preferential attachment simulation and tail-index estimation"""
    logging.basicConfig(
        level=(log_level or get_log_level()).upper(),
        format="%(asctime)s %(levelname)s %(name)s: %(message)s",
    )


@main.command()
@click.option("--model", type=MODEL_CHOICE, default="B", show_default=True)
@click.option("--delta", type=float, default=0.0, show_default=True)
@click.option("--n", "n", type=int, required=True, help="Number of nodes (= edges)")
@click.option("--seed", type=int, default=0, show_default=True)
@click.option("--degrees", "degrees_out", type=click.Path(dir_okay=False), help="Write one degree per line")
@click.option("--edges", "edges_out", type=click.Path(dir_okay=False), help="Write the edge history CSV")
def generate(model, delta, n, seed, degrees_out, edges_out):
    """Grow one graph and write its degrees and/or edges"""
    try:
        params = PaParams(model=Model(model.upper()), delta=delta, n=n)
    except ValidationError as e:
        raise click.BadParameter(str(e))
    graph = grow(params, seed)
    if degrees_out:
        write_degree_file(graph.degrees, degrees_out)
    if edges_out:
        write_edge_csv(graph, edges_out)
    _emit({"model": params.model.value, "delta": delta, "n": n, "seed": seed,
           "max_degree": graph.max_degree})


@main.command()
@click.option("--model", type=MODEL_CHOICE, default="A", show_default=True)
@click.option("--delta", type=float, default=0.0, show_default=True)
@click.option("--kmax", type=int, default=20, show_default=True)
@click.option("--n", "n", type=int, default=None, help="Also tabulate expected tail counts up to n")
@click.option("--every", type=int, default=1, show_default=True, help="Row stride of the expected-count table")
@click.option("--out", type=click.Path(dir_okay=False), default=None, help="CSV for the p_k table")
@click.option("--mu-out", type=click.Path(dir_okay=False), default=None, help="CSV for the mu_{>k}(m) table")
@click.option("--bound", is_flag=True, help="Report sup |eps| against max{1, C_p} (Model A)")
def theory(model, delta, kmax, n, every, out, mu_out, bound):
    """Tabulate p_k, p_{>k} and, with --n, mu_{>k}(m)"""
    if delta <= -1:
        raise click.BadParameter("delta must be > -1")
    tables = [(TheoreticalLaw(delta=delta).table(kmax), out)]
    if n is not None:
        tables.append((expected_tail_counts(model.upper(), delta, n, kmax).to_frame(every), mu_out))
    printed = 0
    for table, path in tables:
        if path:
            table.to_csv(path, index=False)
            continue
        if printed:
            click.echo()
        click.echo(table.to_csv(index=False), nl=False)
        printed += 1
    if bound and n is not None:
        _emit(epsilon_bound_report(delta, n, kmax))


@main.command()
@click.argument("degree_file", type=click.Path(exists=True, dir_okay=False))
@click.option("--method", type=click.Choice(["hill", "mindist"]), default="mindist", show_default=True)
@click.option("--k", "k", type=int, default=None, help="Order statistic count for --method hill")
@click.option("--kn-auto", is_flag=True, help="Use k = ceil(sqrt(n log n))")
@click.option("--kmin", type=int, default=DEFAULT_K_MIN, show_default=True)
@click.option("--curve", type=click.Path(dir_okay=False), default=None,
              help="d_k and Hill per k (.xlsx for Excel, otherwise CSV)")
def estimate(degree_file, method, k, kn_auto, kmin, curve):
    """Estimate the tail index of a degree file"""
    sample = SortedSample.from_values(read_degree_file(degree_file))
    try:
        if method == "hill":
            if kn_auto:
                k = kn_default(sample.n)
            if k is None:
                raise click.UsageError("--method hill needs --k or --kn-auto")
            payload = {"n": sample.n, "k": k, "hill": hill(sample, k),
                       "alpha_hat": alpha_hat(sample, k), "d_k": ks_distance(sample, k)}
        else:
            fit = min_distance_select(sample, kmin)
            payload = {"n": sample.n, "k": fit.k_star, "alpha_hat": fit.alpha_hat, "d_k": fit.d_min}
            if curve and curve.endswith(".xlsx"):
                Path(curve).write_bytes(create_simple_export(fit.to_frame(), "Curve"))
            elif curve:
                fit.to_frame().to_csv(curve, index=False)
    except DegenerateTailError as e:
        raise click.ClickException(str(e))
    except ValueError as e:
        raise click.BadParameter(str(e))
    _emit(payload)


@main.command()
@click.option("--model", type=MODEL_CHOICE, default="A", show_default=True)
@click.option("--delta", type=float, default=0.0, show_default=True)
@click.option("--n", "n", type=int, default=10_000, show_default=True)
@click.option("--reps", type=int, default=1_000, show_default=True)
@click.option("--seed", type=int, default=0, show_default=True)
@click.option("--out", type=click.Path(dir_okay=False), default=None)
@click.option("--check", is_flag=True, help="Run KS tests of w_hat and sigma_hat_1 against their limit laws")
def embed(model, delta, n, reps, seed, out, check):
    """Embedded runs: rep,T_n,w_hat,sigma_hat_1,max_scaled_degree"""
    if delta <= -1 or n < 2 or reps < 1:
        raise click.BadParameter("need delta > -1, n >= 2 and reps >= 1")
    table = embedding_batch(model.upper(), delta, n, reps, seed)
    if out:
        table.to_csv(out, index=False)
    else:
        click.echo(table.to_csv(index=False), nl=False)
    if check:
        click.echo(limit_law_checks(table, model.upper(), delta).to_string(index=False))


@main.command("replicate")
@click.option("--config", "config_path", type=click.Path(exists=True, dir_okay=False), default=None)
@click.option("--reps", type=int, default=None)
@click.option("--workers", type=int, default=None)
@click.option("--seed", "master_seed", type=int, default=None)
@click.option("--output-dir", default=None)
@click.option("--excel", is_flag=True, help="Also write report.xlsx")
def replicate_cmd(config_path, reps, workers, master_seed, output_dir, excel):
    """Replicated minimum-distance estimation over a (delta, n) grid"""
    try:
        config = load_experiment_config(config_path or default_config_path(), reps=reps, workers=workers,
                                        master_seed=master_seed, output_dir=output_dir)
    except (ValueError, FileNotFoundError) as e:
        raise click.UsageError(f"invalid config: {e}")

    result = replicate(config)
    compared = compare_with_reference(result.summary)
    if excel:
        report = create_experiment_report(result.records, result.summary, config.model_dump(mode="json"),
                                          config.config_hash(), compared)
        (Path(config.output_dir) / "report.xlsx").write_bytes(report)
    click.echo(compared.to_string(index=False))


@main.command()
@click.option("--deltas", default="0,1", show_default=True, help="Comma-separated offsets")
@click.option("--ns", default="10000,100000", show_default=True, help="Comma-separated sizes")
@click.option("--reps", type=int, default=20, show_default=True)
@click.option("--seed", type=int, default=2019, show_default=True)
@click.option("--workers", type=int, default=1, show_default=True)
@click.option("--output-dir", default=None)
def consistency(deltas, ns, reps, seed, workers, output_dir):
    """Model A Hill estimates at k_n = ceil(sqrt(n log n))"""
    try:
        delta_list = [float(d) for d in deltas.split(",")]
        n_list = [int(float(n)) for n in ns.split(",")]
    except ValueError as e:
        raise click.BadParameter(str(e))
    table = consistency_sweep(delta_list, n_list, reps, seed, workers=workers, output_dir=output_dir)
    click.echo(table.to_string(index=False))


@main.command()
@click.argument("records_file", type=click.Path(exists=True, dir_okay=False))
@click.option("--delta", type=float, required=True)
@click.option("--n", "n", type=int, required=True)
@click.option("--out", type=click.Path(dir_okay=False), default=None)
def qq(records_file, delta, n, out):
    """QQ pairs of alpha_hat for one cell of a records.csv"""
    records = pd.read_csv(records_file)
    cell = records[np.isclose(records["delta"], delta) & (records["n"] == n) & records["error"].isna()]
    try:
        data = qq_data(cell["alpha_hat"].to_numpy(dtype=float))
    except ValueError as e:
        raise click.UsageError(str(e))
    if out:
        data.frame.to_csv(out, index=False)
    _emit(data.line())


@main.command()
@click.option("--output-dir", default="results", show_default=True)
@click.option("--event-type", default=None, help="replicate or consistency")
@click.option("--limit", type=int, default=20, show_default=True)
def runs(output_dir, event_type, limit):
    """Run log of an output directory, newest first"""
    table = format_run_log_df(get_run_log(output_dir, event_type, limit))
    if table.empty:
        click.echo(f"no runs logged in {output_dir}")
        return
    click.echo(table.to_string(index=False))


if __name__ == "__main__":
    sys.exit(main())

"""Command-line front end: a thin client over the service operations.

Each command reads JSON spec files exactly (number literals become
rationals before any float conversion), builds the same request models
the HTTP service accepts, runs the operation in process (or against a
remote server via --server), and writes its outputs plus exactly one
``manifest.json`` into the output directory.

Exit codes: 0 success, 2 validation error, 3 infeasible parameters,
4 resource limit.
"""

from __future__ import annotations

import json
import sys
import urllib.error
import urllib.request
from pathlib import Path

import click
from pydantic import ValidationError

from . import __version__
from .errors import (
    DegenerateControllerError,
    DegeneratePayoffError,
    InfeasibleParametersError,
    InvalidGameError,
    InvalidInputError,
    NonConvergenceError,
    ResourceLimitError,
    SearchBoundExceededError,
    SingularMonitoringError,
    ZdError,
)
from .rational import as_fraction, frac_str
from .service import models, ops
from .simulate import RNG_ID
from .specio import dump_json_file, load_json_file

EXIT_VALIDATION = 2
EXIT_INFEASIBLE = 3
EXIT_RESOURCE = 4

_EXIT_CODES = {
    InvalidGameError: EXIT_VALIDATION,
    InvalidInputError: EXIT_VALIDATION,
    InfeasibleParametersError: EXIT_INFEASIBLE,
    DegeneratePayoffError: EXIT_INFEASIBLE,
    DegenerateControllerError: EXIT_INFEASIBLE,
    SingularMonitoringError: EXIT_INFEASIBLE,
    ResourceLimitError: EXIT_RESOURCE,
    SearchBoundExceededError: EXIT_RESOURCE,
    NonConvergenceError: EXIT_RESOURCE,
}

_STATUS_EXIT = {422: EXIT_VALIDATION, 400: EXIT_INFEASIBLE, 413: EXIT_RESOURCE}


class _RemoteError(ZdError):
    def __init__(self, message, exit_code):
        super().__init__(message)
        self.exit_code = exit_code


def _exit_code_for(exc) -> int:
    if isinstance(exc, _RemoteError):
        return exc.exit_code
    if isinstance(exc, (ValidationError, FileNotFoundError, OSError)):
        return EXIT_VALIDATION
    return _EXIT_CODES.get(type(exc), EXIT_VALIDATION)


def _call(server, endpoint, request_model, response_cls):
    """Run an operation in process, or POST it to a remote service."""
    if server is None:
        return getattr(ops, endpoint)(request_model)
    url = server.rstrip("/") + "/" + endpoint
    data = request_model.model_dump_json().encode()
    req = urllib.request.Request(url, data=data, headers={"Content-Type": "application/json"})
    try:
        with urllib.request.urlopen(req) as resp:
            return response_cls.model_validate_json(resp.read())
    except urllib.error.HTTPError as exc:
        detail = exc.read().decode(errors="replace")
        raise _RemoteError(
            f"server returned {exc.code}: {detail}",
            _STATUS_EXIT.get(exc.code, EXIT_VALIDATION),
        ) from None
    except urllib.error.URLError as exc:
        raise _RemoteError(f"cannot reach server {server}: {exc.reason}", EXIT_VALIDATION) from None


class _Run:
    """Collects inputs/outputs and writes the run manifest exactly once."""

    def __init__(self, command: str, out_dir: str, params: dict):
        self.command = command
        self.out_dir = Path(out_dir)
        self.params = {k: v for k, v in params.items() if v not in (None, (), [])}
        self.inputs = []
        self.outputs = []

    def read_json(self, path):
        self.inputs.append(str(path))
        return load_json_file(path)

    def write_json(self, name, obj):
        self.out_dir.mkdir(parents=True, exist_ok=True)
        path = self.out_dir / name
        dump_json_file(path, obj)
        self.outputs.append(str(path))
        return path

    def write_text(self, name, text):
        self.out_dir.mkdir(parents=True, exist_ok=True)
        path = self.out_dir / name
        path.write_text(text, encoding="utf-8")
        self.outputs.append(str(path))
        return path

    def finish(self, status="ok", error=None):
        self.out_dir.mkdir(parents=True, exist_ok=True)
        manifest = {
            "command": self.command,
            "version": __version__,
            "parameters": self.params,
            "inputs": self.inputs,
            "outputs": self.outputs,
            "status": status,
        }
        if error is not None:
            manifest["error"] = {"type": type(error).__name__, "message": str(error)}
        dump_json_file(self.out_dir / "manifest.json", manifest)


def _run_command(run: _Run, body):
    """Execute a command body with manifest and exit-code handling."""
    try:
        text = body()
    except (ZdError, ValidationError, OSError, ValueError) as exc:
        run.finish(status="error", error=exc)
        click.echo(f"error: {exc}", err=True)
        sys.exit(_exit_code_for(exc))
    run.finish()
    if text is not None:
        click.echo(text)


def _format_option(fn):
    fn = click.option("--format", "fmt", type=click.Choice(["text", "json"]),
                      default="text", show_default=True, help="Report format.")(fn)
    return fn


def _common_options(fn):
    fn = click.option("--out", "out_dir", default=".", show_default=True,
                      help="Directory for outputs and the run manifest.")(fn)
    fn = click.option("--server", default=None, metavar="URL",
                      help="Run against a remote zdgames service instead of in process.")(fn)
    return _format_option(fn)


def _game_model(run: _Run, game_path) -> models.GameModel:
    return models.GameModel(**run.read_json(game_path))


def _strategy_models(run: _Run, strategy_paths):
    return [models.StrategyModel(**run.read_json(p)) for p in strategy_paths]


def _monitoring_model(run: _Run, monitoring_path):
    if monitoring_path is None:
        return None
    return models.MonitoringModel(**run.read_json(monitoring_path))


def _parse_state(text):
    if text is None:
        return None
    return [int(x) for x in text.split(",")]


@click.group()
@click.version_option(version=__version__, prog_name="zd")
def main():
    """Zero-determinant strategy analysis for repeated games."""


@main.command()
@click.argument("game", type=click.Path(exists=True, dir_okay=False))
@click.option("--strategy", "-s", "strategies", multiple=True, required=True,
              type=click.Path(exists=True, dir_okay=False),
              help="Strategy spec file; repeat once per player.")
@click.option("--monitoring", "-m", "monitoring_path", default=None,
              type=click.Path(exists=True, dir_okay=False),
              help="Monitoring spec (default: embedded in the game, else perfect).")
@click.option("--initial-state", default=None, metavar="A1,A2,...",
              help="Joint state for the stationary solve (default uniform).")
@_common_options
def analyze(game, strategies, monitoring_path, initial_state, fmt, out_dir, server):
    """Detect ZD structure and Akin residuals for a full strategy profile."""
    run = _Run("analyze", out_dir, {
        "game": game, "strategies": list(strategies), "monitoring": monitoring_path,
        "initial_state": initial_state, "format": fmt,
    })

    def body():
        req = models.AnalyzeRequest(
            game=_game_model(run, game),
            strategies=_strategy_models(run, strategies),
            monitoring=_monitoring_model(run, monitoring_path),
            initial_state=_parse_state(initial_state),
        )
        resp = _call(server, "analyze", req, models.AnalyzeResponse)
        run.write_json("analyze-report.json", resp.model_dump())
        if fmt == "json":
            return resp.model_dump_json(indent=2)
        lines = []
        for report in resp.players:
            if report.is_zd:
                eqs = "; ".join(report.certificate.equations)
                note = " (relations modulo payoff kernel)" if report.certificate.kernel_relations else ""
                lines.append(
                    f"player {report.player}: ZD, dim {report.certificate.dimension}, {eqs}{note}"
                )
            else:
                lines.append(f"player {report.player}: not ZD")
            lines.append(f"  akin residuals: {report.akin_residuals}")
        st = resp.stationary
        lines.append(f"stationary method: {st.method} (residual {st.residual})")
        lines.append(f"expected payoffs: {st.expected_payoffs}")
        lines.append(f"combined enforced dimension: {resp.combined_span_dimension}")
        return "\n".join(lines)

    _run_command(run, body)


@main.command()
@click.argument("certificates", nargs=-1, required=True,
                type=click.Path(exists=True, dir_okay=False))
@_common_options
def check(certificates, fmt, out_dir, server):
    """Consistency and independence of stored certificates."""
    run = _Run("check", out_dir, {"certificates": list(certificates), "format": fmt})

    def body():
        req = models.CheckRequest(
            certificates=[models.CertificateModel(**run.read_json(p)) for p in certificates]
        )
        resp = _call(server, "check", req, models.CheckResponse)
        run.write_json("check-report.json", resp.model_dump())
        if fmt == "json":
            return resp.model_dump_json(indent=2)
        lines = [f"relations: {'; '.join(resp.equations)}"]
        if resp.consistent:
            lines.append(
                f"consistent: solution point ({', '.join(resp.solution_point)}), "
                f"affine dimension {resp.solution_dimension}"
            )
        else:
            lines.append("inconsistent: the relation system has no solution")
        lines.append(f"independence: {resp.independence_status}")
        for witness in resp.dependence_witness:
            lines.append(f"  player {witness.player} contributes ({', '.join(witness.vector)})")
        return "\n".join(lines)

    _run_command(run, body)


@main.command()
@click.argument("family", type=click.Choice([
    "tft", "equalizer-imperfect", "controller", "controller-imperfect", "zero-sum-controller",
]))
@click.option("--payoffs", default=None, metavar="R,S,T,P",
              help="Payoff values for the 2x2 families.")
@click.option("--r1", default=None, help="Controller payoff r1.")
@click.option("--r2", default=None, help="Controller payoff r2.")
@click.option("--r", default=None, help="Zero-sum payoff scale r.")
@click.option("--w", default=None, help="Monitoring parameter w.")
@click.option("--beta", default=None, help="Equalizer coefficient beta.")
@click.option("--gamma", default=None, help="Equalizer coefficient gamma.")
@click.option("--p", default=None)
@click.option("--q", default=None)
@click.option("--pp", "p_prime", default=None, help="p' controller parameter.")
@click.option("--qp", "q_prime", default=None, help="q' controller parameter.")
@_common_options
def construct(family, payoffs, r1, r2, r, w, beta, gamma, p, q, p_prime, q_prime,
              fmt, out_dir, server):
    """Build a named strategy family and write its spec + certificate files."""
    run = _Run("construct", out_dir, {
        "family": family, "payoffs": payoffs, "r1": r1, "r2": r2, "r": r, "w": w,
        "beta": beta, "gamma": gamma, "p": p, "q": q, "pp": p_prime, "qp": q_prime,
        "format": fmt,
    })

    def body():
        req = models.ConstructRequest(
            family=family,
            payoffs=payoffs.split(",") if payoffs else None,
            r1=r1, r2=r2, r=r, w=w, beta=beta, gamma=gamma,
            p=p, q=q, p_prime=p_prime, q_prime=q_prime,
        )
        resp = _call(server, "construct", req, models.ConstructResponse)
        run.write_json("game.json", resp.game.model_dump())
        run.write_json("monitoring.json", resp.monitoring.model_dump())
        run.write_json("strategy.json", resp.strategy.model_dump())
        run.write_json("certificate.json", resp.certificate.model_dump())
        if fmt == "json":
            return resp.model_dump_json(indent=2)
        return (
            f"{resp.family}: enforced relations: {'; '.join(resp.equations)}\n"
            f"wrote game.json, monitoring.json, strategy.json, certificate.json in {run.out_dir}"
        )

    _run_command(run, body)


@main.command()
@click.argument("game", type=click.Path(exists=True, dir_okay=False))
@click.option("--strategy", "-s", "strategies", multiple=True, required=True,
              type=click.Path(exists=True, dir_okay=False))
@click.option("--monitoring", "-m", "monitoring_path", default=None,
              type=click.Path(exists=True, dir_okay=False))
@click.option("--steps", type=int, required=True, help="Episode length t_max.")
@click.option("--seed", "seeds", type=int, multiple=True, required=True,
              help="Episode seed; repeat for a batch.")
@click.option("--record-every", type=int, default=None,
              help="Recording stride (must divide steps; default steps/100).")
@click.option("--initial-state", default=None, metavar="A1,A2,...",
              help="Fixed initial joint state (default: uniform product draw).")
@_common_options
def simulate(game, strategies, monitoring_path, steps, seeds, record_every,
             initial_state, fmt, out_dir, server):
    """Monte Carlo episodes; writes one CSV + metadata sidecar per seed."""
    run = _Run("simulate", out_dir, {
        "game": game, "strategies": list(strategies), "monitoring": monitoring_path,
        "steps": steps, "seeds": list(seeds), "record_every": record_every,
        "initial_state": initial_state, "format": fmt,
    })

    def body():
        req = models.SimulateRequest(
            game=_game_model(run, game),
            strategies=_strategy_models(run, strategies),
            monitoring=_monitoring_model(run, monitoring_path),
            steps=steps,
            seeds=list(seeds),
            record_every=record_every,
            initial_state=_parse_state(initial_state),
        )
        resp = _call(server, "simulate", req, models.SimulateResponse)
        n_players = req.game.players
        header = "t," + ",".join(f"avg_payoff_{n}" for n in range(1, n_players + 1))
        for traj in resp.trajectories:
            rows = [header]
            for t, avgs in zip(traj.t, traj.averages):
                rows.append(f"{t}," + ",".join(f"{v:.12g}" for v in avgs))
            run.write_text(f"trajectory-{traj.seed}.csv", "\n".join(rows) + "\n")
            run.write_json(f"trajectory-{traj.seed}.meta.json", {
                "seed": traj.seed,
                "rng": resp.rng,
                "steps": resp.steps,
                "record_every": resp.record_every,
                "initial_state": req.initial_state,  # null means a uniform product draw
                "final_state": traj.final_state,
                "final_averages": traj.averages[-1],
            })
        if fmt == "json":
            return resp.model_dump_json(indent=2)
        lines = [f"rng: {resp.rng}; steps: {resp.steps}; stride: {resp.record_every}"]
        for traj in resp.trajectories:
            lines.append(f"seed {traj.seed}: final averages {traj.averages[-1]}")
        lines.append(f"batch mean final: {resp.mean_final}; stddev: {resp.stddev_final}")
        return "\n".join(lines)

    _run_command(run, body)


@main.command()
@click.argument("game", type=click.Path(exists=True, dir_okay=False))
@click.option("--monitoring", "-m", "monitoring_path", default=None,
              type=click.Path(exists=True, dir_okay=False))
@click.option("--player", type=int, default=1, show_default=True)
@click.option("--family", type=click.Choice(["grid", "zero-intercept", "equalizer"]),
              default="grid", show_default=True, help="Candidate relation family.")
@click.option("--grid-max", "grid_max", type=int, default=1, show_default=True,
              help="Largest numerator in the candidate grid.")
@click.option("--grid-denominator", type=int, default=1, show_default=True)
@click.option("--target", "targets", multiple=True,
              help="Equalizer target value; repeatable.")
@click.option("--max-candidates", type=int, default=20_000, show_default=True)
@_common_options
def search(game, monitoring_path, player, family, grid_max, grid_denominator,
           targets, max_candidates, fmt, out_dir, server):
    """Existence search over a finite family of candidate payoff relations."""
    run = _Run("search", out_dir, {
        "game": game, "monitoring": monitoring_path, "player": player,
        "family": family, "grid_max": grid_max, "grid_denominator": grid_denominator,
        "targets": list(targets), "max_candidates": max_candidates, "format": fmt,
    })

    def body():
        req = models.SearchRequest(
            game=_game_model(run, game),
            monitoring=_monitoring_model(run, monitoring_path),
            player=player,
            family=family,
            grid_max_numerator=grid_max,
            grid_denominator=grid_denominator,
            equalizer_targets=[str(as_fraction(t)) for t in targets] or None,
            max_candidates=max_candidates,
        )
        resp = _call(server, "search", req, models.SearchResponse)
        run.write_json("search-report.json", resp.model_dump())
        if resp.status == "found":
            run.write_json("strategy.json", resp.strategy.model_dump())
            run.write_json("certificate.json", resp.certificate.model_dump())
        if fmt == "json":
            return resp.model_dump_json(indent=2)
        lines = [f"status: {resp.status} "
                 f"({resp.candidates_examined} candidates examined, "
                 f"{resp.vacuous_skipped} vacuous skipped)"]
        if resp.status == "found":
            lines.append(f"relation {resp.equation} is enforceable; wrote strategy.json")
        elif resp.status == "pruned-nonexistence":
            lines.append(
                f"every candidate fails the sign condition on all action pairs "
                f"({len(resp.pruned)} candidates pruned); see search-report.json"
            )
        else:
            lines.append("sign condition passed somewhere but no table was found "
                         "(search is sound, not complete)")
        return "\n".join(lines)

    _run_command(run, body)


@main.command()
@click.option("--host", default="127.0.0.1", show_default=True)
@click.option("--port", type=int, default=8000, show_default=True)
def serve(host, port):
    """Run the HTTP service."""
    import uvicorn

    from .service.app import app

    click.echo(f"zdgames {__version__} service (rng {RNG_ID}) on {host}:{port}")
    uvicorn.run(app, host=host, port=port)


if __name__ == "__main__":
    main()

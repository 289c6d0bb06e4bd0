# MIT License
# Copyright (c) 2026 BlackwellLab
# 
# Permission is hereby granted, free of charge, to any person obtaining a copy
# of this software and associated documentation files (the "Software"), to deal
# in the Software without restriction, including without limitation the rights
# to use, copy, modify, merge, publish, distribute, sublicense, and/or sell
# copies of the Software, and to permit persons to whom the Software is
# furnished to do so, subject to the following conditions:
# 
# The above copyright notice and this permission notice shall be included in all
# copies or substantial portions of the Software.
# 
# THE SOFTWARE IS PROVIDED "AS IS", WITHOUT WARRANTY OF ANY KIND, EXPRESS OR
# IMPLIED, INCLUDING BUT NOT LIMITED TO THE WARRANTIES OF MERCHANTABILITY,
# FITNESS FOR A PARTICULAR PURPOSE AND NONINFRINGEMENT. IN NO EVENT SHALL THE
# AUTHORS OR COPYRIGHT HOLDERS BE LIABLE FOR ANY CLAIM, DAMAGES OR OTHER
# LIABILITY, WHETHER IN AN ACTION OF CONTRACT, TORT OR OTHERWISE, ARISING FROM,
# OUT OF OR IN CONNECTION WITH THE SOFTWARE OR THE USE OR OTHER DEALINGS IN THE
# SOFTWARE.

"""
BlackwellLab - Interfaz de Línea de Comandos
Subcomandos simulate, peel, force, lp, stochastic, classify y scenario.
Códigos de salida: 0 PASS, 2 fallo de una verificación, 1 error.
"""


import argparse
import json
import sys
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from src import __version__
from src.core.artifacts import ArtifactManager
from src.core.config import load_config, merge_config, section
from src.core.errors import (
    ApproachabilityError, ParseError, StageBudgetExceeded, ValidationError
)
from src.core.logger import get_logger, init_logger
from src.solvers.matrix_game import matrix_game
from src.solvers.simplex import LinearProgram, dual_of, solve_lp
from src.games.forcing import (
    forcing_dualities_check, g_s_gap, halfspace_minimax_check, x_one_forces_halfspace,
    x_two_forces_halfspace, x_two_forces_set, y_one_forces_complement, y_two_forces_complement
)
from src.games.game import action_set, game_from_dict
from src.geometry.operations import direction_grid
from src.geometry.sets import Halfspace
from src.approach.adversaries import BestResponseApproacher, MaximinPlayer, make_adversary
from src.approach.gstar import GStar
from src.approach.runner import (
    ORDERS, force_audit, potential_audit, rate_check, rate_horizon, run_game
)
from src.approach.trajectory import Trajectory
from src.avoid.classify import classify
from src.avoid.hstar import HStar
from src.avoid.onion import OnionDecomposition, peel, stage_hausdorff
from src.stochastic.horizon import deviation_audit, hoeffding_horizon
from src.stochastic.sampling import SeededSource, empirical_deviation, run_stochastic
from src.cli.batch import run_jobs
from src.cli.reports import EXIT_ERROR, EXIT_PASS, ResourceProbe, RunReport
from src.cli.scenarios import Scenario, build_target, list_scenarios, load_scenario


class _Parser(argparse.ArgumentParser):
    """argparse sale con 2 ante errores de uso; aquí 2 es fallo de verificación."""

    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_ERROR, f"{self.prog}: error: {message}\n")


def parse_seeds(text: str) -> List[int]:
    """'7' -> [7]; '0..9' -> [0, ..., 9] (ambos extremos incluidos)."""
    try:
        if ".." in text:
            a, b = text.split("..", 1)
            first, last = int(a), int(b)
            if last < first:
                raise ValueError
            return list(range(first, last + 1))
        return [int(text)]
    except ValueError:
        raise ValidationError(f"Rango de semillas inválido: {text}", invariant="seed-range")


def parse_vector(text: str) -> List[float]:
    try:
        return [float(v) for v in text.split(",")]
    except ValueError:
        raise ValidationError(f"Vector inválido: {text}", invariant="vector-format")


def parse_matrix(text: str) -> List[List[float]]:
    """'1,-1;-1,1' -> [[1,-1],[-1,1]]."""
    return [parse_vector(row) for row in text.split(";")]


# --- Contexto de ejecución ---

class Context:
    """Configuración efectiva, artefactos y escenario de una invocación."""

    def __init__(self, args: argparse.Namespace, scenario: Optional[Scenario] = None):
        base = load_config(args.config)
        if args.output:
            base["system"]["output_folder"] = args.output
        if args.log_level:
            base["system"]["log_level"] = args.log_level
        self.scenario = scenario
        self.config = scenario.apply(base) if scenario is not None else base
        self.system = section(self.config, "system")
        self.progress = bool(self.system["show_progress"]) and not args.quiet
        self.artifacts = ArtifactManager(self.config)
        self.logger = init_logger(self.config) if self.system["enable_logs"] else get_logger()
        self.folder = args.run_name or self._default_folder(args)

    def _default_folder(self, args) -> str:
        parts = [self.scenario.name if self.scenario is not None else "blackwell", args.command]
        action = getattr(args, "action", None)
        if action:
            parts.append(action)
        return "-".join(parts)

    def path(self, name: str):
        return self.artifacts.create_safe_path(self.folder, name)

    def finish(self, report: RunReport, probe: ResourceProbe) -> int:
        report.resources = probe.to_dict()
        report.add_artifact(report.write(self.artifacts, self.folder))
        print(json.dumps(report.to_dict(), indent=2, sort_keys=True, ensure_ascii=False,
                         default=_jsonable))
        status = "PASS" if report.passed else "FAIL"
        self.logger.info(f"{report.mode} {report.scenario}: {status} ({probe.wall_clock:.2f} s)")
        return report.exit_code


def _jsonable(value):
    if hasattr(value, "tolist"):
        return value.tolist()
    return str(value)


def _number_cell(value) -> object:
    """None o NaN se escriben como celda vacía."""
    if value is None or not np.isfinite(value):
        return ""
    return value


def trajectory_rows(traj: Trajectory) -> Tuple[List[str], List[List]]:
    """
    Cabecera fija: t, phi_*, dist, tau_t, example_found, slack y, a
    continuación, x_*, y_* y rind. Los campos que el jugador no informa
    quedan vacíos.
    """
    g = traj.game
    header = (["t"] + [f"phi_{k}" for k in range(g.d)]
              + ["dist", "tau_t", "example_found", "slack"]
              + [f"x_{i}" for i in range(g.m)] + [f"y_{j}" for j in range(g.n)] + ["rind"])
    rows = []
    for r in traj.rounds:
        example = r.info.get("example_found")
        rows.append([r.t] + list(r.phi)
                    + [r.dist, _number_cell(r.info.get("tau_t")),
                       "" if example is None else bool(example),
                       _number_cell(r.info.get("slack"))]
                    + list(r.x.distribution(g.m)) + list(r.y.distribution(g.n))
                    + ["" if r.rind is None else r.rind])
    return header, rows


# --- simulate ---

def _approach_job(scenario: Scenario, config: Dict, adversary: str, seed: int, T: int,
                  epsilon: float, order: str, decomposition: Optional[OnionDecomposition]):
    def job():
        g = scenario.build_game()
        S = scenario.target()
        schedule = scenario.build_schedule(g)
        run_id = f"{scenario.name}-{adversary}-{seed}"
        rng = SeededSource(seed).generator()
        if scenario.strategies.get("approach", "gstar") == "gstar":
            x_player = GStar(g, S, schedule, config, run_id)
        else:
            x_player = BestResponseApproacher(g, S, config)
        y_player = make_adversary(adversary, g, S, rng, config, decomposition, run_id)
        traj = run_game(g, x_player, y_player, T, order, S, config)
        audits = {
            "potential": potential_audit(traj, schedule, g.gamma),
            "force": force_audit(traj, g.gamma),
        }
        if T >= rate_horizon(epsilon, g.gamma):
            audits["rate"] = rate_check(traj, epsilon, g.gamma, run_id=run_id)
        else:
            audits["rate"] = {"skipped": True, "horizon": rate_horizon(epsilon, g.gamma),
                              "passed": True}
        return adversary, seed, traj, audits
    return job


def cmd_simulate_approach(args, ctx: Context) -> int:
    scenario = ctx.scenario
    g = scenario.build_game()
    adversaries = args.adversary or [scenario.strategies.get("adversary", "bestresponse")]
    seeds = parse_seeds(args.seeds)
    T = args.rounds or 2 * rate_horizon(args.epsilon, g.gamma)

    decomposition = None
    if "hstar" in adversaries:
        decomposition = peel(g, scenario.target(), ctx.config, run_id=scenario.name,
                             progress=ctx.progress)

    jobs = [_approach_job(scenario, ctx.config, adv, seed, T, args.epsilon, args.order,
                          decomposition)
            for adv in adversaries for seed in (seeds if adv == "random" else seeds[:1])]
    with ResourceProbe() as probe:
        results = run_jobs(jobs, ctx.system["max_concurrent_jobs"], ctx.progress, "simulate")
        probe.sample()

    report = RunReport(scenario.name, "simulate approach", {}, seeds=seeds)
    runs = []
    for adversary, seed, traj, audits in results:
        header, rows = trajectory_rows(traj)
        name = f"trajectory-{adversary.replace(':', '_')}-{seed}.csv"
        report.add_artifact(ctx.artifacts.write_csv(ctx.path(name), header, rows))
        passed = all(a["passed"] for a in audits.values())
        runs.append({"adversary": adversary, "seed": seed, "passed": passed,
                     "final_distance": traj.last.dist,
                     "potential_violations": len(audits["potential"]["violations"]),
                     "force_violations": len(audits["force"]["violations"]),
                     "rate": {k: v for k, v in audits["rate"].items() if k != "violations"}})
    report.outcome = {"rounds": T, "epsilon": args.epsilon, "runs": runs}
    report.passed = all(r["passed"] for r in runs)
    return ctx.finish(report, probe)


def cmd_simulate_avoid(args, ctx: Context) -> int:
    scenario = ctx.scenario
    g = scenario.build_game()
    S = scenario.target()
    schedule = scenario.build_schedule(g)
    run_id = f"{scenario.name}-avoid"

    with ResourceProbe() as probe:
        dec = None
        if scenario.strategies.get("avoid", "hstar") == "hstar":
            dec = peel(g, S, ctx.config, run_id=run_id, progress=ctx.progress)
            if not dec.is_empty:
                report = RunReport(scenario.name, "simulate avoid",
                                   {"classification": dec.classification,
                                    "message": "S contiene un A-conjunto: no hay 𝔥*"}, passed=False)
                return ctx.finish(report, probe)
            y_player = HStar(g, dec, ctx.config, run_id)
            T = args.rounds or dec.horizon + max(1000, dec.horizon // 10)
        else:
            y_player = MaximinPlayer(g, S, ctx.config)
            T = args.rounds or 10_000

        if args.approacher == "gstar":
            x_player = GStar(g, S, schedule, ctx.config, run_id)
        else:
            x_player = BestResponseApproacher(g, S, ctx.config)
        traj = run_game(g, x_player, y_player, T, args.order, S, ctx.config, ctx.progress)
        probe.sample()

    header, rows = trajectory_rows(traj)
    outcome: Dict = {"rounds": T, "approacher": args.approacher, "order": args.order,
                     "final_distance": traj.last.dist}
    if dec is not None:
        tail = [r for r in traj.rounds if r.t >= dec.horizon]
        escapes = [r.t for r in tail if r.dist > dec.delta]
        outcome.update({"delta": dec.delta, "horizon": dec.horizon, "N": dec.N,
                        "escapes": len(escapes), "first_escape": escapes[0] if escapes else None,
                        "max_tail_distance": max((r.dist for r in tail), default=None),
                        "certificate_misses": y_player.miss_count,
                        "drives": y_player.drives_started})
        passed = bool(escapes)
    else:
        checkpoints = list(range(args.checkpoint, T + 1, args.checkpoint))
        outside = [t for t in checkpoints if traj.rounds[t - 1].dist > 0.0]
        # 𝒳 sólo entra si responde a una 𝒴 que ya se comprometió
        responder = args.approacher == "bestresponse" and args.order == "y_first"
        expected = "inside" if responder else "outside"
        outcome.update({"checkpoints": len(checkpoints), "outside_checkpoints": len(outside),
                        "expected": expected})
        if responder:
            passed = bool(checkpoints) and not outside
        else:
            passed = any(t > T / 3 for t in outside)

    report = RunReport(scenario.name, "simulate avoid", outcome, passed=passed)
    report.add_artifact(ctx.artifacts.write_csv(ctx.path("trajectory.csv"), header, rows))
    return ctx.finish(report, probe)


# --- peel / classify ---

def cmd_peel(args, ctx: Context) -> int:
    scenario = ctx.scenario
    g = scenario.build_game()
    S = scenario.target()
    config = ctx.config
    if args.grid:
        config = merge_config(config, {"geometry": {"grid_2d": args.grid, "grid_3d": args.grid}})

    passed = True
    with ResourceProbe() as probe:
        try:
            dec = peel(g, S, config, stage_budget=args.stages, run_id=scenario.name,
                       progress=ctx.progress)
        except StageBudgetExceeded as e:
            ctx.logger.warning(str(e))
            dec = e.partial
            passed = False
        probe.sample()

    report = RunReport(scenario.name, "peel", {k: v for k, v in dec.to_dict().items()
                                               if k != "stages"}, passed=passed)
    report.add_artifact(ctx.artifacts.write_json(ctx.path("decomposition.json"), dec.to_dict()))
    gaps = stage_hausdorff(dec)
    report.add_artifact(ctx.artifacts.write_csv(ctx.path("hausdorff.csv"), ["stage", "hausdorff"],
                                                [[i, gap] for i, gap in enumerate(gaps)]))
    return ctx.finish(report, probe)


def cmd_classify(args, ctx: Context) -> int:
    scenario = ctx.scenario
    with ResourceProbe() as probe:
        result = classify(scenario.build_game(), scenario.target(), ctx.config,
                          run_id=scenario.name, progress=ctx.progress)
    report = RunReport(scenario.name, "classify", result.to_dict())
    return ctx.finish(report, probe)


# --- force / lp ---

def _json_argument(text: str, flag: str) -> Dict:
    """JSON en línea ('{...}') o ruta a un archivo JSON."""
    if text.lstrip().startswith(("{", "[")):
        try:
            return json.loads(text)
        except json.JSONDecodeError as e:
            raise ParseError(f"JSON inválido en {flag}: {e.msg}", location=f"{flag}:{e.colno}")
    try:
        with open(text, "r", encoding="utf-8") as f:
            return json.load(f)
    except json.JSONDecodeError as e:
        raise ParseError(f"JSON inválido en {flag}: {e.msg}",
                         location=f"{text}:{e.lineno}:{e.colno}")
    except OSError as e:
        raise ParseError(f"No se pudo leer {flag}: {e}", location=text)


def _force_halfspace(args, d: int) -> Optional[Halfspace]:
    """--halfspace 'λ1,..,λd,c' o el par --normal/--offset."""
    if args.halfspace is not None:
        values = parse_vector(args.halfspace)
        if len(values) != d + 1:
            raise ValidationError(f"--halfspace espera {d + 1} valores (λ y c), recibió "
                                  f"{len(values)}", invariant="vector-format")
        return Halfspace(values[:-1], values[-1])
    if args.normal is not None or args.offset is not None:
        if args.normal is None or args.offset is None:
            raise ValidationError("--normal y --offset van juntos", invariant="vector-format")
        return Halfspace(parse_vector(args.normal), args.offset)
    return None


FORCE_GRID_STEPS = 10
FORCE_SLACK = 1e-9

HALFSPACE_ORACLES = {
    ("x", 1): ("x_one_forces", x_one_forces_halfspace),
    ("x", 2): ("x_two_forces", x_two_forces_halfspace),
    ("y", 1): ("y_one_forces_complement", y_one_forces_complement),
    ("y", 2): ("y_two_forces_complement", y_two_forces_complement),
}


def _check_halfspace(g, H: Halfspace, args, config: Dict) -> Tuple[Dict, bool]:
    selected = [key for key in HALFSPACE_ORACLES
                if (args.player is None or key[0] == args.player)
                and (args.order is None or key[1] == args.order)]
    certificates = {}
    for key in selected:
        name, oracle = HALFSPACE_ORACLES[key]
        certificates[name] = oracle(g, H, config)
    minimax = halfspace_minimax_check(g, H, config)
    outcome: Dict = {"halfspace": H.to_dict(), "minimax": minimax,
                     "certificates": {k: (c.to_dict() if c is not None else None)
                                      for k, c in certificates.items()}}
    # x 1-fuerza H exactamente cuando y no 2-fuerza H^c
    consistent = (x_one_forces_halfspace(g, H, config) is None) == (
        y_two_forces_complement(g, H, config) is not None)
    if g.mode == "pure":
        dualities = forcing_dualities_check(g, H)
        outcome["dualities"] = dualities
        consistent = consistent and dualities["consistent"]
    else:
        consistent = consistent and minimax["consistent"]
    return outcome, consistent


def _check_set(g, S, args, config: Dict) -> Tuple[Dict, bool]:
    if args.player == "y" or args.order == 1:
        raise ValidationError("Para conjuntos sólo se certifica 𝒳 2-fuerza S (--player x "
                              "--order 2)", invariant="force-query")
    h = section(config, "geometry")["resolution"]
    steps = FORCE_GRID_STEPS
    grid = action_set(g, steps)[1] if g.mode == "mixed" else None
    certificate = x_two_forces_set(g, S, h, opponent_grid=grid)
    directions = direction_grid(g.d, generators=g.vertices, config=config)
    gap = g_s_gap(g, S, directions, steps)
    outcome: Dict = {"set": S.to_dict(), "tolerance": h, "g_s_gap": gap,
                     "certificates": {"x_two_forces": (certificate.to_dict()
                                                       if certificate is not None else None)}}
    # con respuesta dentro de S, g_S no pasa de h·|λ| = h
    consistent = gap["gap"] >= -FORCE_SLACK and (
        certificate is None or gap["sup_inf"] <= h + FORCE_SLACK)
    if g.mode == "pure":
        dualities = forcing_dualities_check(g, S, h)
        outcome["dualities"] = dualities
        consistent = consistent and dualities["consistent"]
    return outcome, consistent


def cmd_force_check(args, ctx: Context) -> int:
    scenario = ctx.scenario
    if args.game is not None:
        g = game_from_dict(_json_argument(args.game, "--game"))
    elif scenario is not None:
        g = scenario.build_game()
    else:
        raise ValidationError("force check necesita --scenario o --game", invariant="force-query")
    name = scenario.name if scenario is not None else "blackwell"

    H = _force_halfspace(args, g.d)
    with ResourceProbe() as probe:
        if H is not None:
            outcome, consistent = _check_halfspace(g, H, args, ctx.config)
        else:
            if args.set is not None:
                S = build_target(_json_argument(args.set, "--set"),
                                 section(ctx.config, "geometry")["link_factor"])
            elif scenario is not None:
                S = scenario.target()
            else:
                raise ValidationError("Indique --halfspace, --normal/--offset o --set",
                                      invariant="force-query")
            if S.dim != g.d:
                raise ValidationError(f"El conjunto vive en ℝ^{S.dim} y el juego en ℝ^{g.d}",
                                      invariant="target-dimension")
            outcome, consistent = _check_set(g, S, args, ctx.config)
    report = RunReport(name, "force check", outcome, passed=consistent)
    return ctx.finish(report, probe)


def cmd_lp_solve(args, ctx: Context) -> int:
    with open(args.file, "r", encoding="utf-8") as f:
        program = LinearProgram.from_dict(json.load(f))
    with ResourceProbe() as probe:
        primal = solve_lp(program, ctx.config)
        dual = solve_lp(dual_of(program), ctx.config)
    gap = abs(primal.value - dual.value)
    outcome = {"value": primal.value, "x": primal.x, "pivots": primal.pivots,
               "dual_value": dual.value, "duality_gap": gap}
    report = RunReport(args.file, "lp solve", outcome, passed=gap <= args.tolerance)
    return ctx.finish(report, probe)


def cmd_lp_game(args, ctx: Context) -> int:
    G = np.array(parse_matrix(args.matrix), dtype=float)
    with ResourceProbe() as probe:
        solution = matrix_game(G, ctx.config)
    report = RunReport("matrix", "lp game", solution.to_dict())
    return ctx.finish(report, probe)


# --- stochastic ---

def _stochastic_job(scenario: Scenario, config: Dict, seed: int, T: int, adversary: str,
                    order: str, decomposition: Optional[OnionDecomposition], check_determinism: bool):
    def job():
        g = scenario.build_game()
        S = scenario.target()
        run_id = f"{scenario.name}-stochastic-{seed}"
        sampler, adversary_source = SeededSource(seed, section(config, "stochastic")["algorithm"]).spawn(2)

        def players():
            x = GStar(g, S, scenario.build_schedule(g), config, run_id)
            y = make_adversary(adversary, g, S, adversary_source.generator(), config,
                               decomposition, run_id)
            return x, y

        x_player, y_player = players()
        rounds = run_stochastic(g, S, x_player, y_player, T, sampler, order, config)
        identical = None
        if check_determinism:
            x_player, y_player = players()
            traj = run_game(g, x_player, y_player, T, order, S, config)
            identical = all(np.array_equal(r.expected_mean, rec.phi)
                            for r, rec in zip(rounds, traj.rounds))
        return seed, rounds, identical
    return job


def cmd_stochastic_run(args, ctx: Context) -> int:
    scenario = ctx.scenario
    g = scenario.build_game()
    seeds = parse_seeds(args.seeds)
    N = hoeffding_horizon(args.epsilon, g.gamma, g.d)
    T = args.rounds or N
    adversary = args.adversary or scenario.strategies.get("adversary", "bestresponse")
    decomposition = None
    if adversary == "hstar":
        decomposition = peel(g, scenario.target(), ctx.config, run_id=scenario.name)

    jobs = [_stochastic_job(scenario, ctx.config, seed, T, adversary, args.order,
                            decomposition, i == 0)
            for i, seed in enumerate(seeds)]
    with ResourceProbe() as probe:
        results = run_jobs(jobs, ctx.system["max_concurrent_jobs"], ctx.progress, "stochastic")
        probe.sample()

    header = (["run", "t"] + [f"emp_{k}" for k in range(g.d)] + [f"exp_{k}" for k in range(g.d)]
              + ["emp_dev"])
    rows = []
    for seed, rounds, _ in results:
        deviation = empirical_deviation(rounds)
        for r, dev in zip(rounds, deviation):
            rows.append([seed, r.t] + list(r.empirical_mean) + list(r.expected_mean) + [dev])

    band_sigma = section(ctx.config, "stochastic")["band_sigma"]
    audit = deviation_audit([rounds for _, rounds, _ in results], args.epsilon, min(N, T),
                            band_sigma, alpha=args.alpha)
    identical = results[0][2]
    report = RunReport(scenario.name, "stochastic run",
                       {"horizon": N, "rounds": T, "adversary": adversary, "audit": audit,
                        "expected_matches_deterministic": identical},
                       passed=audit["passed"] and bool(identical), seeds=seeds)
    if T < N:
        ctx.logger.warning(f"T = {T} < horizonte {N}: la cota aún no rige")
    report.add_artifact(ctx.artifacts.write_csv(ctx.path("stochastic.csv"), header, rows))
    return ctx.finish(report, probe)


def cmd_stochastic_horizon(args, ctx: Context) -> int:
    N = hoeffding_horizon(args.epsilon, args.gamma, args.d)
    print(N)
    return EXIT_PASS


# --- scenario ---

def cmd_scenario_list(args, ctx: Context) -> int:
    for entry in list_scenarios():
        print(f"{entry['name']:<24} {entry['description']}")
    return EXIT_PASS


def cmd_scenario_show(args, ctx: Context) -> int:
    print(json.dumps(ctx.scenario.to_dict(), indent=2, sort_keys=True, ensure_ascii=False))
    return EXIT_PASS


# --- parser ---

def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="blackwell", description="Aproximabilidad de Blackwell en juegos repetidos")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    parser.add_argument("--config", default="config.json", help="Archivo de configuración")
    parser.add_argument("--output", help="Carpeta de resultados (o BLACKWELL_OUTPUT_DIR)")
    parser.add_argument("--log-level", choices=["DEBUG", "INFO", "WARNING", "ERROR"])
    parser.add_argument("--run-name", help="Subcarpeta de la corrida")
    parser.add_argument("--quiet", action="store_true", help="Sin barras de progreso")
    commands = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def with_scenario(p, required=True):
        p.add_argument("--scenario", required=required, help="Nombre integrado o archivo JSON")
        return p

    simulate = commands.add_parser("simulate", help="Corridas de 𝔤* o 𝔥*")
    sim = simulate.add_subparsers(dest="action", required=True, parser_class=_Parser)
    p = with_scenario(sim.add_parser("approach"))
    p.add_argument("--epsilon", type=float, default=0.1)
    p.add_argument("--rounds", type=int)
    p.add_argument("--adversary", action="append",
                   help="random | bestresponse | hstar | maximin | uniform | fixed:J | script:FILE")
    p.add_argument("--seeds", default="0")
    p.add_argument("--order", choices=ORDERS, default="x_first")
    p.set_defaults(handler=cmd_simulate_approach)
    p = with_scenario(sim.add_parser("avoid"))
    p.add_argument("--rounds", type=int)
    p.add_argument("--approacher", choices=["gstar", "bestresponse"], default="gstar")
    p.add_argument("--order", choices=ORDERS, default="x_first")
    p.add_argument("--checkpoint", type=int, default=100)
    p.set_defaults(handler=cmd_simulate_avoid)

    p = with_scenario(commands.add_parser("peel", help="Descomposición en cáscaras"))
    p.add_argument("--stages", type=int)
    p.add_argument("--grid", type=int, help="Número de direcciones")
    p.set_defaults(handler=cmd_peel)

    p = with_scenario(commands.add_parser("classify", help="Aproximable / evitable / indeciso"))
    p.set_defaults(handler=cmd_classify)

    force = commands.add_parser("force", help="Oráculos de forzamiento")
    fs = force.add_subparsers(dest="action", required=True, parser_class=_Parser)
    p = with_scenario(fs.add_parser("check"), required=False)
    p.add_argument("--game", help="Juego en JSON (en línea o archivo); sustituye al del escenario")
    query = p.add_mutually_exclusive_group()
    query.add_argument("--halfspace", help="λ1,...,λd,c para H = {⟨λ,z⟩ <= c}")
    query.add_argument("--set", help="Descriptor de conjunto objetivo en JSON")
    query.add_argument("--normal", help="λ separado por comas (con --offset)")
    p.add_argument("--offset", type=float)
    p.add_argument("--order", type=int, choices=[1, 2], help="Orden de forzamiento")
    p.add_argument("--player", choices=["x", "y"], help="Jugador que fuerza")
    p.set_defaults(handler=cmd_force_check)

    lp = commands.add_parser("lp", help="Programas lineales y juegos matriciales")
    ls = lp.add_subparsers(dest="action", required=True, parser_class=_Parser)
    p = ls.add_parser("solve")
    p.add_argument("--file", required=True, help="Programa en JSON")
    p.add_argument("--tolerance", type=float, default=1e-7)
    p.set_defaults(handler=cmd_lp_solve)
    p = ls.add_parser("game")
    p.add_argument("--matrix", required=True, help="Filas separadas por ';'")
    p.set_defaults(handler=cmd_lp_game)

    stochastic = commands.add_parser("stochastic", help="Capa de muestreo")
    ss = stochastic.add_subparsers(dest="action", required=True, parser_class=_Parser)
    p = with_scenario(ss.add_parser("run"))
    p.add_argument("--rounds", type=int)
    p.add_argument("--seeds", default="0..199")
    p.add_argument("--epsilon", type=float, default=0.1)
    p.add_argument("--adversary")
    p.add_argument("--order", choices=ORDERS, default="x_first")
    p.add_argument("--alpha", type=float, help="Añade la cota de Clopper-Pearson")
    p.set_defaults(handler=cmd_stochastic_run)
    p = ss.add_parser("horizon")
    p.add_argument("--epsilon", type=float, required=True)
    p.add_argument("--gamma", type=float, default=1.0)
    p.add_argument("--d", type=int, default=2)
    p.set_defaults(handler=cmd_stochastic_horizon)

    scenario = commands.add_parser("scenario", help="Escenarios registrados")
    sc = scenario.add_subparsers(dest="action", required=True, parser_class=_Parser)
    sc.add_parser("list").set_defaults(handler=cmd_scenario_list)
    p = sc.add_parser("show")
    p.add_argument("name")
    p.set_defaults(handler=cmd_scenario_show)
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        source = getattr(args, "scenario", None) or getattr(args, "name", None)
        scenario = load_scenario(source) if source else None
        ctx = Context(args, scenario)
        return args.handler(args, ctx)
    except ApproachabilityError as e:
        get_logger().log_error_with_context(e, {"command": args.command,
                                                "action": getattr(args, "action", None)})
        print(f"error: {type(e).__name__}: {e}", file=sys.stderr)
        if e.details:
            print(json.dumps(e.to_dict(), indent=2, ensure_ascii=False, default=_jsonable),
                  file=sys.stderr)
        return EXIT_ERROR
    except (OSError, json.JSONDecodeError) as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())

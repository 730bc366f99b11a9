//! `dm`: command-line surface for the distance matching toolkit.
//!
//! Verbs: `solve`, `approx`, `lp`, `regular`, `verify`, `gen`, `bench`,
//! `fixtures`. Reports go to stdout, diagnostics to stderr. Exit codes:
//! 0 success, 2 input error, 3 infeasible (or negative verdict), 4 resource
//! guard tripped. Reports are byte-stable for fixed inputs; wall-clock
//! timings are only emitted under `--timings`.

mod report;
mod resolve;

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};

use distmat::approx::{
    find_improvement, greedy, local_search, rho, s_greedy, t_greedy, window_partition,
};
use distmat::core::{serialize_instance, serialize_matching, Instance, Matching, Mode, Variant};
use distmat::exact::{
    solve_bruteforce, solve_constant_t, solve_fpt, SolveOutcome, BRUTE_FORCE_EDGE_LIMIT,
};
use distmat::gen::{fixture, fixture_names, gen_random, gen_regular, RandomSpec, SplitMix64};
use distmat::lp::{
    build_lp, canonical_optimal, export_lp_text, flat_order, flatness_of, fractional_decompose,
    integrality_gap, solve_lp_exact, theta, LpOutcome,
};
use distmat::rational::{fmt_rat, rat, Rat};
use distmat::regular::{check_regular, regular_decompose, regular_perfect, Regularity};
use distmat::{Error, Result};

use report::Report;
use resolve::{load_instance, load_matching, load_order, LoadedInstance};

#[derive(Parser)]
#[command(
    name = "dm",
    version,
    about = "distance matching solvers and experiments"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum SolveAlgo {
    /// window dynamic program parameterized by d
    Fpt,
    /// cooldown dynamic program for small |T|
    Ct,
    /// exhaustive oracle
    Brute,
}

#[derive(Clone, Copy, ValueEnum)]
enum ApproxAlgo {
    Greedy,
    Sgreedy,
    Tgreedy,
    Window,
    Local,
}

#[derive(Clone, Copy, ValueEnum)]
enum LpAction {
    Solve,
    Order,
    Round,
    Gap,
    Decompose,
}

#[derive(Clone, Copy, ValueEnum)]
enum RegularAction {
    Check,
    Perfect,
    Decompose,
}

#[derive(Clone, Copy, ValueEnum)]
enum GenKind {
    Random,
    Regular,
}

#[derive(Clone, Copy, ValueEnum)]
enum ModeArg {
    Max,
    Perfect,
}

#[derive(Clone, Copy, ValueEnum)]
enum VariantArg {
    Line,
    Cycle,
}

#[derive(Subcommand)]
enum Command {
    /// Exact optimum of an instance.
    Solve {
        /// fixture name or instance file
        instance: String,
        #[arg(long, value_enum)]
        algo: SolveAlgo,
        #[arg(long)]
        timings: bool,
    },
    /// Approximation algorithms with certified guarantee factors.
    Approx {
        instance: String,
        #[arg(long, value_enum)]
        algo: ApproxAlgo,
        /// local-search depth (algo = local)
        #[arg(long, default_value_t = 2)]
        l: usize,
        /// explicit greedy edge order: fixture order name or file
        #[arg(long)]
        order: Option<String>,
        /// local-search start: fixture reference name or matching file
        #[arg(long)]
        init: Option<String>,
        /// also compute the exact optimum and the achieved ratio
        #[arg(long)]
        certify: bool,
        #[arg(long)]
        timings: bool,
    },
    /// LP relaxation experiments.
    Lp {
        instance: String,
        #[arg(long, value_enum)]
        action: LpAction,
        /// write the LP in text form to this path
        #[arg(long)]
        export: Option<PathBuf>,
        #[arg(long)]
        timings: bool,
    },
    /// Regularity checking and decomposition.
    Regular {
        instance: String,
        #[arg(long, value_enum)]
        action: RegularAction,
    },
    /// Feasibility (and optionally local optimality) of a matching.
    Verify {
        instance: String,
        /// fixture reference name or matching file
        matching: String,
        /// also test l-local optimality
        #[arg(long)]
        local: Option<usize>,
    },
    /// Write generated instance suites.
    Gen {
        #[arg(long, value_enum)]
        kind: GenKind,
        #[arg(long)]
        out: PathBuf,
        #[arg(long, default_value_t = 1)]
        count: usize,
        /// seed; defaults to DM_SEED or 0
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long, default_value_t = 6)]
        n: usize,
        #[arg(long, default_value_t = 3)]
        k: usize,
        #[arg(long, default_value_t = 2)]
        d: usize,
        /// edge probability as p/q
        #[arg(long, default_value = "1/2")]
        density: String,
        #[arg(long, default_value_t = 1)]
        weight_min: i64,
        #[arg(long, default_value_t = 10)]
        weight_max: i64,
        #[arg(long, default_value_t = 2)]
        weight_denom: u64,
        /// regularity degree (kind = regular)
        #[arg(long, default_value_t = 2)]
        r: usize,
        #[arg(long, value_enum)]
        mode: Option<ModeArg>,
        #[arg(long, value_enum)]
        variant: Option<VariantArg>,
    },
    /// Run algorithms over a seeded random grid and summarize.
    Bench {
        #[arg(long, default_value_t = 6)]
        n_max: usize,
        #[arg(long, default_value_t = 3)]
        k_max: usize,
        #[arg(long, default_value_t = 3)]
        d_max: usize,
        #[arg(long, default_value_t = 2)]
        per_cell: usize,
        #[arg(long)]
        seed: Option<u64>,
        /// comma-separated: greedy,sgreedy,tgreedy,window,lpround,local:L
        #[arg(long, default_value = "greedy,sgreedy,window,local:2")]
        algos: String,
        /// compute exact optima and ratios (slower)
        #[arg(long)]
        certify: bool,
        #[arg(long)]
        timings: bool,
        /// also write the generated instances here
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// List the built-in fixtures, or write them as files.
    Fixtures {
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            let code = match e {
                Error::TooLarge(_) => 4,
                Error::InvalidInput(_) | Error::Parse { .. } => 2,
            };
            ExitCode::from(code)
        }
    }
}

fn default_seed(seed: Option<u64>) -> u64 {
    seed.or_else(|| std::env::var("DM_SEED").ok().and_then(|v| v.parse().ok()))
        .unwrap_or(0)
}

fn run(command: Command) -> Result<u8> {
    match command {
        Command::Solve {
            instance,
            algo,
            timings,
        } => cmd_solve(&instance, algo, timings),
        Command::Approx {
            instance,
            algo,
            l,
            order,
            init,
            certify,
            timings,
        } => cmd_approx(
            &instance,
            algo,
            l,
            order.as_deref(),
            init.as_deref(),
            certify,
            timings,
        ),
        Command::Lp {
            instance,
            action,
            export,
            timings,
        } => cmd_lp(&instance, action, export.as_deref(), timings),
        Command::Regular { instance, action } => cmd_regular(&instance, action),
        Command::Verify {
            instance,
            matching,
            local,
        } => cmd_verify(&instance, &matching, local),
        Command::Gen {
            kind,
            out,
            count,
            seed,
            n,
            k,
            d,
            density,
            weight_min,
            weight_max,
            weight_denom,
            r,
            mode,
            variant,
        } => cmd_gen(GenParams {
            kind,
            out,
            count,
            seed: default_seed(seed),
            n,
            k,
            d,
            density,
            weight_min,
            weight_max,
            weight_denom,
            r,
            mode,
            variant,
        }),
        Command::Bench {
            n_max,
            k_max,
            d_max,
            per_cell,
            seed,
            algos,
            certify,
            timings,
            out,
        } => cmd_bench(BenchParams {
            n_max,
            k_max,
            d_max,
            per_cell,
            seed: default_seed(seed),
            algos,
            certify,
            timings,
            out,
        }),
        Command::Fixtures { out } => cmd_fixtures(out.as_deref()),
    }
}

fn finish_outcome(
    mut report: Report,
    loaded: &LoadedInstance,
    outcome: &SolveOutcome,
    started: Instant,
    timings: bool,
) -> Result<u8> {
    match outcome {
        SolveOutcome::Optimal { matching, value } => {
            report.kv("status", "optimal");
            report.kv_rat("value", value);
            debug_assert_eq!(&loaded.instance.weight(matching), value);
            report.matching(&loaded.instance, matching);
            if timings {
                report.kv("wall_ms", started.elapsed().as_millis());
            }
            report.print();
            Ok(0)
        }
        SolveOutcome::Infeasible => {
            report.kv("status", "infeasible");
            if timings {
                report.kv("wall_ms", started.elapsed().as_millis());
            }
            report.print();
            Ok(3)
        }
    }
}

fn cmd_solve(instance: &str, algo: SolveAlgo, timings: bool) -> Result<u8> {
    let loaded = load_instance(instance)?;
    let started = Instant::now();
    let (name, outcome) = match algo {
        SolveAlgo::Fpt => ("fpt", solve_fpt(&loaded.instance)?),
        SolveAlgo::Ct => ("ct", solve_constant_t(&loaded.instance)?),
        SolveAlgo::Brute => ("brute", solve_bruteforce(&loaded.instance)?),
    };
    let mut report = Report::new("solve");
    report.kv("algo", name);
    report.instance_block(&loaded.name, &loaded.digest(), &loaded.instance);
    finish_outcome(report, &loaded, &outcome, started, timings)
}

/// Exact optimum used by `--certify`: the oracle for small instances, the
/// window DP otherwise (line variant only, hence brute force for cycles).
fn certified_optimum(inst: &Instance) -> Result<Rat> {
    let outcome = if inst.edges().len() <= BRUTE_FORCE_EDGE_LIMIT {
        solve_bruteforce(inst)?
    } else {
        solve_fpt(inst)?
    };
    match outcome {
        SolveOutcome::Optimal { value, .. } => Ok(value),
        SolveOutcome::Infeasible => Err(Error::InvalidInput(
            "certification needs a feasible instance".into(),
        )),
    }
}

fn cmd_approx(
    instance: &str,
    algo: ApproxAlgo,
    l: usize,
    order: Option<&str>,
    init: Option<&str>,
    certify: bool,
    timings: bool,
) -> Result<u8> {
    let loaded = load_instance(instance)?;
    let inst = &loaded.instance;
    let started = Instant::now();

    let mut report = Report::new("approx");
    let (name, matching, guarantee, cardinality_metric) = match algo {
        ApproxAlgo::Greedy => {
            let order = order.map(|o| load_order(o, &loaded)).transpose()?;
            (
                String::from("greedy"),
                greedy(inst, order.as_deref())?,
                rat(3),
                false,
            )
        }
        ApproxAlgo::Sgreedy => (String::from("sgreedy"), s_greedy(inst), rat(2), true),
        ApproxAlgo::Tgreedy => (String::from("tgreedy"), t_greedy(inst), rat(2), true),
        ApproxAlgo::Window => {
            let factor = rat(2) - rat(1) / rat(inst.d() as i64);
            (
                String::from("window"),
                window_partition(inst)?,
                factor,
                false,
            )
        }
        ApproxAlgo::Local => {
            let init = init.map(|i| load_matching(i, &loaded)).transpose()?;
            let m = local_search(inst, l, init.as_ref())?;
            (format!("local{l}"), m, rho(l)?, true)
        }
    };

    report.kv("algo", &name);
    report.instance_block(&loaded.name, &loaded.digest(), inst);
    report.kv("status", "ok");
    let value = inst.weight(&matching);
    report.kv_rat("value", &value);
    report.kv_rat("guarantee", &guarantee);
    report.kv(
        "guarantee_metric",
        if cardinality_metric {
            "cardinality"
        } else {
            "weight"
        },
    );
    if certify {
        let (achieved, optimum) = if cardinality_metric {
            let unit = inst.unit_weights().with_mode(Mode::Maximum);
            (rat(matching.len() as i64), certified_optimum(&unit)?)
        } else {
            (
                value.clone(),
                certified_optimum(&inst.with_mode(Mode::Maximum))?,
            )
        };
        report.kv_rat("optimum", &optimum);
        let ratio = if optimum == rat(0) {
            rat(1)
        } else {
            optimum.clone() / achieved
        };
        report.kv_rat("ratio", &ratio);
    }
    report.matching(inst, &matching);
    if timings {
        report.kv("wall_ms", started.elapsed().as_millis());
    }
    report.print();
    Ok(0)
}

fn cmd_lp(instance: &str, action: LpAction, export: Option<&Path>, timings: bool) -> Result<u8> {
    let loaded = load_instance(instance)?;
    let inst = &loaded.instance;
    let started = Instant::now();
    let mut report = Report::new("lp");
    report.kv(
        "action",
        match action {
            LpAction::Solve => "solve",
            LpAction::Order => "order",
            LpAction::Round => "round",
            LpAction::Gap => "gap",
            LpAction::Decompose => "decompose",
        },
    );
    report.instance_block(&loaded.name, &loaded.digest(), inst);

    if let Some(path) = export {
        let lp = build_lp(inst)?;
        fs::write(path, export_lp_text(inst, &lp))
            .map_err(|e| Error::InvalidInput(format!("cannot write {}: {e}", path.display())))?;
        report.kv("exported", path.display());
    }

    let mut code = 0u8;
    match action {
        LpAction::Solve => {
            let lp = build_lp(inst)?;
            match solve_lp_exact(&lp)? {
                LpOutcome::Optimal { solution, value } => {
                    report.kv("status", "optimal");
                    report.kv_rat("lp_value", &value);
                    report.kv("integral", solution.is_integral());
                    for (id, v) in solution.x.iter().enumerate() {
                        if !v.eq(&rat(0)) {
                            let e = inst.edge(id);
                            report.kv(&format!("x_{}_{}", e.s, e.t), fmt_rat(v));
                        }
                    }
                }
                LpOutcome::Infeasible => {
                    report.kv("status", "infeasible");
                    code = 3;
                }
            }
        }
        LpAction::Order => {
            let (x, lp_value) = canonical_optimal(inst)?;
            let order = flat_order(inst, &x)?;
            let flatness = flatness_of(inst, &x, &order.order)?;
            report.kv("status", "ok");
            report.kv_rat("lp_value", &lp_value);
            report.kv_rat("flatness", &flatness);
            report.kv_rat("flatness_bound", &theta(inst.d()));
            for (i, &id) in order.order.iter().enumerate() {
                let e = inst.edge(id);
                let (a, b) = &order.slacks[i];
                report.kv(
                    &format!("order_{}", i + 1),
                    format!(
                        "s{} t{} x={} slack_s={} slack_t={}",
                        e.s,
                        e.t,
                        fmt_rat(&x.x[id]),
                        fmt_rat(a),
                        fmt_rat(b)
                    ),
                );
            }
        }
        LpAction::Round => {
            let rounding = distmat::lp::wdm_lp_apx(inst)?;
            report.kv("status", "ok");
            report.kv_rat("lp_value", &rounding.lp_value);
            report.kv_rat("factor", &rounding.factor);
            let value = inst.weight(&rounding.matching);
            report.kv_rat("value", &value);
            report.kv(
                "bound_ok",
                rounding.factor.clone() * value >= rounding.lp_value,
            );
            report.matching(inst, &rounding.matching);
        }
        LpAction::Gap => {
            let view = inst.with_mode(Mode::Maximum);
            let (_, lp_value) = solve_lp_exact(&build_lp(&view)?)?.expect_optimal("maximum LP");
            let gap = integrality_gap(inst)?;
            report.kv("status", "ok");
            report.kv_rat("lp_value", &lp_value);
            let ip = if lp_value == rat(0) {
                rat(0)
            } else {
                lp_value.clone() / gap.clone()
            };
            report.kv_rat("ip_value", &ip);
            report.kv_rat("gap", &gap);
            report.kv_rat("gap_bound", &theta(inst.d()));
        }
        LpAction::Decompose => {
            let (x, lp_value) = canonical_optimal(inst)?;
            let order = flat_order(inst, &x)?;
            let bound = theta(inst.d());
            let dec = fractional_decompose(inst, &x, &order, &bound)?;
            report.kv("status", "ok");
            report.kv_rat("lp_value", &lp_value);
            report.kv("denominator", &dec.denominator);
            report.kv("parts", dec.q);
            for (i, (lambda, part)) in dec.parts.iter().enumerate() {
                report.kv(
                    &format!("part_{}", i + 1),
                    format!(
                        "lambda={} weight={}",
                        fmt_rat(lambda),
                        fmt_rat(&inst.weight(part))
                    ),
                );
                for (s, t) in part.pairs(inst) {
                    report.kv(&format!("pm_{}", i + 1), format!("{s} {t}"));
                }
            }
        }
    }
    if timings {
        report.kv("wall_ms", started.elapsed().as_millis());
    }
    report.print();
    Ok(code)
}

fn cmd_regular(instance: &str, action: RegularAction) -> Result<u8> {
    let loaded = load_instance(instance)?;
    let inst = &loaded.instance;
    let mut report = Report::new("regular");
    report.instance_block(&loaded.name, &loaded.digest(), inst);
    match action {
        RegularAction::Check => {
            report.kv("action", "check");
            match check_regular(inst)? {
                Regularity::Regular { r } => {
                    report.kv("regular", true);
                    report.kv("r", r);
                }
                Regularity::DegreeViolation {
                    s,
                    observed,
                    expected,
                } => {
                    report.kv("regular", false);
                    report.kv(
                        "violation",
                        format!("degree s{s} observed {observed} expected {expected}"),
                    );
                }
                Regularity::WindowViolation {
                    t,
                    window_start,
                    observed,
                    expected,
                } => {
                    report.kv("regular", false);
                    report.kv(
                        "violation",
                        format!(
                            "window t{t} start {window_start} observed {observed} expected {expected}"
                        ),
                    );
                }
            }
            report.print();
            Ok(0)
        }
        RegularAction::Perfect => {
            report.kv("action", "perfect");
            let m = regular_perfect(inst)?;
            report.kv("status", "ok");
            report.kv_rat("value", &inst.weight(&m));
            report.matching(inst, &m);
            report.print();
            Ok(0)
        }
        RegularAction::Decompose => {
            report.kv("action", "decompose");
            let parts = regular_decompose(inst)?;
            report.kv("status", "ok");
            report.kv("parts", parts.len());
            for (i, part) in parts.iter().enumerate() {
                report.kv(&format!("part_{}", i + 1), format!("size={}", part.len()));
                for (s, t) in part.pairs(inst) {
                    report.kv(&format!("pm_{}", i + 1), format!("{s} {t}"));
                }
            }
            report.print();
            Ok(0)
        }
    }
}

fn cmd_verify(instance: &str, matching: &str, local: Option<usize>) -> Result<u8> {
    let loaded = load_instance(instance)?;
    let inst = &loaded.instance;
    let m = load_matching(matching, &loaded)?;
    let mut report = Report::new("verify");
    report.instance_block(&loaded.name, &loaded.digest(), inst);
    report.kv("matching_size", m.len());
    report.kv_rat("weight", &inst.weight(&m));
    let mut code = 0u8;
    match inst.feasibility(&m)? {
        distmat::core::Feasibility::Feasible => {
            report.kv("feasible", true);
        }
        distmat::core::Feasibility::Violated(v) => {
            report.kv("feasible", false);
            report.kv("violation", v.describe(inst));
            code = 3;
        }
    }
    if code == 0 {
        if let Some(l) = local {
            match find_improvement(inst, &m, l)? {
                None => {
                    report.kv("locally_optimal", true);
                    report.kv("local_level", l);
                }
                Some(witness) => {
                    report.kv("locally_optimal", false);
                    report.kv("local_level", l);
                    let adds: Vec<String> = witness
                        .additions
                        .iter()
                        .map(|&id| {
                            let e = inst.edge(id);
                            format!("s{}t{}", e.s, e.t)
                        })
                        .collect();
                    report.kv("witness_additions", adds.join(" "));
                    report.kv("witness_hit_count", witness.hit.len());
                    code = 3;
                }
            }
        }
    }
    report.print();
    Ok(code)
}

struct GenParams {
    kind: GenKind,
    out: PathBuf,
    count: usize,
    seed: u64,
    n: usize,
    k: usize,
    d: usize,
    density: String,
    weight_min: i64,
    weight_max: i64,
    weight_denom: u64,
    r: usize,
    mode: Option<ModeArg>,
    variant: Option<VariantArg>,
}

fn parse_density(text: &str) -> Result<(u64, u64)> {
    let bad = || Error::InvalidInput(format!("malformed density `{text}`, expected p/q"));
    let (num, den) = match text.split_once('/') {
        Some((p, q)) => (p.parse().map_err(|_| bad())?, q.parse().map_err(|_| bad())?),
        None => (text.parse().map_err(|_| bad())?, 1),
    };
    if den == 0 || num > den {
        return Err(Error::InvalidInput(format!(
            "density `{text}` must lie in [0, 1]"
        )));
    }
    Ok((num, den))
}

fn apply_overrides(
    inst: Instance,
    mode: Option<ModeArg>,
    variant: Option<VariantArg>,
) -> Result<Instance> {
    let mode = match mode {
        None => inst.mode(),
        Some(ModeArg::Max) => Mode::Maximum,
        Some(ModeArg::Perfect) => Mode::Perfect,
    };
    let variant = match variant {
        None => inst.variant(),
        Some(VariantArg::Line) => Variant::Line,
        Some(VariantArg::Cycle) => Variant::Cycle,
    };
    Instance::new(
        inst.n(),
        inst.k(),
        inst.d(),
        inst.edges().to_vec(),
        variant,
        mode,
    )
}

fn cmd_gen(params: GenParams) -> Result<u8> {
    fs::create_dir_all(&params.out)
        .map_err(|e| Error::InvalidInput(format!("cannot create {}: {e}", params.out.display())))?;
    let mut master = SplitMix64::new(params.seed);
    let mut report = Report::new("gen");
    report.kv("seed", params.seed);
    report.kv("count", params.count);
    for index in 0..params.count {
        let instance_seed = master.next_u64();
        let (inst, stem) = match params.kind {
            GenKind::Random => {
                let (density_num, density_den) = parse_density(&params.density)?;
                let spec = RandomSpec {
                    n: params.n,
                    k: params.k,
                    d: params.d,
                    density_num,
                    density_den,
                    weight_min: params.weight_min,
                    weight_max: params.weight_max,
                    weight_denom: params.weight_denom,
                };
                let inst = gen_random(&spec, instance_seed);
                (
                    inst,
                    format!(
                        "random-n{}-k{}-d{}-s{}-i{:04}",
                        params.n,
                        params.k,
                        params.d,
                        params.seed,
                        index + 1
                    ),
                )
            }
            GenKind::Regular => {
                let inst = gen_regular(params.n, params.d, params.r, instance_seed)?;
                (
                    inst,
                    format!(
                        "regular-n{}-d{}-r{}-s{}-i{:04}",
                        params.n,
                        params.d,
                        params.r,
                        params.seed,
                        index + 1
                    ),
                )
            }
        };
        let inst = apply_overrides(inst, params.mode, params.variant)?;
        let path = params.out.join(format!("{stem}.dm"));
        fs::write(&path, serialize_instance(&inst, &[], &[]))
            .map_err(|e| Error::InvalidInput(format!("cannot write {}: {e}", path.display())))?;
        report.kv("wrote", path.display());
    }
    report.print();
    Ok(0)
}

struct BenchParams {
    n_max: usize,
    k_max: usize,
    d_max: usize,
    per_cell: usize,
    seed: u64,
    algos: String,
    certify: bool,
    timings: bool,
    out: Option<PathBuf>,
}

#[derive(Clone, PartialEq, Eq)]
enum BenchAlgo {
    Greedy,
    SGreedy,
    TGreedy,
    Window,
    LpRound,
    Local(usize),
}

impl BenchAlgo {
    fn parse_list(text: &str) -> Result<Vec<BenchAlgo>> {
        text.split(',')
            .map(|token| match token.trim() {
                "greedy" => Ok(BenchAlgo::Greedy),
                "sgreedy" => Ok(BenchAlgo::SGreedy),
                "tgreedy" => Ok(BenchAlgo::TGreedy),
                "window" => Ok(BenchAlgo::Window),
                "lpround" => Ok(BenchAlgo::LpRound),
                other => match other.strip_prefix("local:") {
                    Some(level) => level
                        .parse()
                        .map(BenchAlgo::Local)
                        .map_err(|_| Error::InvalidInput(format!("bad local level in `{other}`"))),
                    None => Err(Error::InvalidInput(format!("unknown algorithm `{other}`"))),
                },
            })
            .collect()
    }

    fn name(&self) -> String {
        match self {
            BenchAlgo::Greedy => "greedy".into(),
            BenchAlgo::SGreedy => "sgreedy".into(),
            BenchAlgo::TGreedy => "tgreedy".into(),
            BenchAlgo::Window => "window".into(),
            BenchAlgo::LpRound => "lpround".into(),
            BenchAlgo::Local(l) => format!("local:{l}"),
        }
    }

    fn cardinality_metric(&self) -> bool {
        matches!(
            self,
            BenchAlgo::SGreedy | BenchAlgo::TGreedy | BenchAlgo::Local(_)
        )
    }

    fn run(&self, inst: &Instance) -> Result<Matching> {
        match self {
            BenchAlgo::Greedy => greedy(inst, None),
            BenchAlgo::SGreedy => Ok(s_greedy(inst)),
            BenchAlgo::TGreedy => Ok(t_greedy(inst)),
            BenchAlgo::Window => window_partition(inst),
            BenchAlgo::LpRound => Ok(distmat::lp::wdm_lp_apx(inst)?.matching),
            BenchAlgo::Local(l) => local_search(inst, *l, None),
        }
    }
}

fn cmd_bench(params: BenchParams) -> Result<u8> {
    let algos = BenchAlgo::parse_list(&params.algos)?;
    if let Some(dir) = &params.out {
        fs::create_dir_all(dir)
            .map_err(|e| Error::InvalidInput(format!("cannot create {}: {e}", dir.display())))?;
    }
    let mut master = SplitMix64::new(params.seed);
    println!("# dm bench");
    println!(
        "# params n_max={} k_max={} d_max={} per_cell={} seed={} certify={}",
        params.n_max, params.k_max, params.d_max, params.per_cell, params.seed, params.certify
    );
    println!(
        "# algos {}",
        algos.iter().map(|a| a.name()).collect::<Vec<_>>().join(",")
    );

    struct Agg {
        count: usize,
        worst: Rat,
        sum: Rat,
    }
    let mut aggregates: BTreeMap<String, Agg> = BTreeMap::new();
    let mut id = 0usize;
    for n in 1..=params.n_max {
        for k in 1..=params.k_max {
            for d in 1..=params.d_max {
                for _ in 0..params.per_cell {
                    id += 1;
                    let instance_seed = master.next_u64();
                    let spec = RandomSpec {
                        n,
                        k,
                        d,
                        density_num: 1,
                        density_den: 2,
                        weight_min: 1,
                        weight_max: 10,
                        weight_denom: 2,
                    };
                    let inst = gen_random(&spec, instance_seed);
                    if let Some(dir) = &params.out {
                        let path = dir.join(format!("bench-{id:05}.dm"));
                        fs::write(&path, serialize_instance(&inst, &[], &[])).map_err(|e| {
                            Error::InvalidInput(format!("cannot write {}: {e}", path.display()))
                        })?;
                    }
                    let opt_pair = if params.certify {
                        let weighted = certified_optimum(&inst)?;
                        let unit = certified_optimum(&inst.unit_weights())?;
                        Some((weighted, unit))
                    } else {
                        None
                    };
                    for algo in &algos {
                        let started = Instant::now();
                        let matching = algo.run(&inst)?;
                        let elapsed = started.elapsed().as_millis();
                        let achieved = if algo.cardinality_metric() {
                            rat(matching.len() as i64)
                        } else {
                            inst.weight(&matching)
                        };
                        let mut row = format!(
                            "row {id:05} n={n} k={k} d={d} seed={instance_seed} algo={} value={} size={}",
                            algo.name(),
                            fmt_rat(&achieved),
                            matching.len()
                        );
                        if let Some((weighted, unit)) = &opt_pair {
                            let optimum = if algo.cardinality_metric() {
                                unit
                            } else {
                                weighted
                            };
                            let ratio = if optimum == &rat(0) {
                                rat(1)
                            } else {
                                optimum.clone() / achieved.clone()
                            };
                            row.push_str(&format!(
                                " opt={} ratio={}",
                                fmt_rat(optimum),
                                fmt_rat(&ratio)
                            ));
                            let agg = aggregates.entry(algo.name()).or_insert_with(|| Agg {
                                count: 0,
                                worst: rat(0),
                                sum: rat(0),
                            });
                            agg.count += 1;
                            agg.sum += ratio.clone();
                            if ratio > agg.worst {
                                agg.worst = ratio;
                            }
                        }
                        if params.timings {
                            row.push_str(&format!(" ms={elapsed}"));
                        }
                        println!("{row}");
                    }
                }
            }
        }
    }
    for (name, agg) in &aggregates {
        let mean = agg.sum.clone() / rat(agg.count as i64);
        println!(
            "agg algo={name} count={} worst={} mean={}",
            agg.count,
            fmt_rat(&agg.worst),
            fmt_rat(&mean)
        );
    }
    Ok(0)
}

fn cmd_fixtures(out: Option<&Path>) -> Result<u8> {
    match out {
        None => {
            let mut report = Report::new("fixtures");
            for name in fixture_names() {
                let fx = fixture(name)?;
                report.kv(
                    name,
                    format!(
                        "n={} k={} d={} edges={} refs={}",
                        fx.instance.n(),
                        fx.instance.k(),
                        fx.instance.d(),
                        fx.instance.edges().len(),
                        fx.reference_names().join(",")
                    ),
                );
            }
            report.print();
        }
        Some(dir) => {
            fs::create_dir_all(dir).map_err(|e| {
                Error::InvalidInput(format!("cannot create {}: {e}", dir.display()))
            })?;
            let mut report = Report::new("fixtures");
            for name in fixture_names() {
                let fx = fixture(name)?;
                let path = dir.join(format!("{name}.dm"));
                fs::write(&path, serialize_instance(&fx.instance, &[], &[])).map_err(|e| {
                    Error::InvalidInput(format!("cannot write {}: {e}", path.display()))
                })?;
                report.kv("wrote", path.display());
                for ref_name in fx.reference_names() {
                    let m = fx.reference(ref_name)?;
                    let path = dir.join(format!("{name}.{ref_name}.m"));
                    fs::write(&path, serialize_matching(&fx.instance, m)).map_err(|e| {
                        Error::InvalidInput(format!("cannot write {}: {e}", path.display()))
                    })?;
                    report.kv("wrote", path.display());
                }
                if let Ok(order) = fx.order("adversarial") {
                    let mut text = String::new();
                    for &id in order {
                        let e = fx.instance.edge(id);
                        text.push_str(&format!("m {} {}\n", e.s, e.t));
                    }
                    let path = dir.join(format!("{name}.adversarial.order"));
                    fs::write(&path, text).map_err(|e| {
                        Error::InvalidInput(format!("cannot write {}: {e}", path.display()))
                    })?;
                    report.kv("wrote", path.display());
                }
            }
            report.print();
        }
    }
    Ok(0)
}

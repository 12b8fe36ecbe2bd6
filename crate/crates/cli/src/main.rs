mod args;

use std::fs;
use std::io::{self, Write};
use std::path::Path;
use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::Parser;
use latfactor::comparison::{compare, CompareConfig, Refinement};
use latfactor::instance::{build_instance, default_diag, random_diag, select_dimension, CvpInstance, Precision, Scheme};
use latfactor::ising::spectrum;
use latfactor::lattice::{default_delta, lll_reduce, Rational};
use latfactor::mgd::{minimize, MgdHyper};
use latfactor::pipeline::{prepare, Prepared};
use latfactor::postproc::{factor_with_relations, FactorConfig};
use latfactor::qsim::{landscape, QaoaObjective};
use latfactor::relations::{CollectConfig, DiagFamily, Strategy};
use latfactor::route::{kn_schedule, lnn_schedule, rsa_resources, rsa_table_csv, touch_size, Topology};
use num_bigint::BigInt;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Map, Value};

use args::*;

const VERSION: &str = env!("CARGO_PKG_VERSION");

enum Failure {
    Usage(String),
    Pipeline(latfactor::Error),
    Io(String),
}

impl From<latfactor::Error> for Failure {
    fn from(e: latfactor::Error) -> Self {
        Failure::Pipeline(e)
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure::Io(e.to_string())
    }
}

type Outcome<T> = std::result::Result<T, Failure>;

fn usage<T>(msg: impl Into<String>) -> Outcome<T> {
    Err(Failure::Usage(msg.into()))
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => ExitCode::SUCCESS,
                _ => ExitCode::from(1),
            };
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::Pipeline(e)) => {
            eprintln!("{}", diagnostic(&e));
            ExitCode::from(2)
        }
        Err(Failure::Io(msg)) => {
            eprintln!("{}", json!({ "version": VERSION, "error": "io", "message": msg }));
            ExitCode::from(2)
        }
    }
}

fn diagnostic(e: &latfactor::Error) -> Value {
    let kind = match e {
        latfactor::Error::Budget(_) => "budget",
        latfactor::Error::Domain(_) => "domain",
        latfactor::Error::Corrupt(_) => "corrupt",
        latfactor::Error::TooLarge { .. } => "too_large",
        latfactor::Error::Shape(_) => "shape",
        latfactor::Error::Parse(_) => "parse",
        _ => "other",
    };
    let mut out = json!({ "version": VERSION, "error": kind, "message": e.to_string() });
    if let latfactor::Error::Budget(detail) = e {
        if let Ok(v) = serde_json::from_str::<Value>(detail) {
            out["diagnostic"] = v;
        }
    }
    out
}

fn run(cli: Cli) -> Outcome<()> {
    if let Some(jobs) = cli.jobs {
        if jobs == 0 {
            return usage("--jobs must be at least 1");
        }
        #[cfg(feature = "parallel")]
        rayon::ThreadPoolBuilder::new()
            .num_threads(jobs)
            .build_global()
            .map_err(|e| Failure::Usage(e.to_string()))?;
    }
    match cli.command {
        Command::Factor(a) => cmd_factor(a),
        Command::Instance(a) => cmd_instance(a),
        Command::Spectrum(a) => cmd_spectrum(a),
        Command::Landscape(a) => cmd_landscape(a),
        Command::Optimize(a) => cmd_optimize(a),
        Command::Estimate(a) => cmd_estimate(a),
        Command::Schedule(a) => cmd_schedule(a),
        Command::Touch(a) => cmd_touch(a),
        Command::Compare(a) => cmd_compare(a),
        Command::Reduce(a) => cmd_reduce(a),
    }
}

fn emit(path: Option<&Path>, text: &str) -> Outcome<()> {
    match path {
        Some(p) => fs::write(p, text)?,
        None => io::stdout().lock().write_all(text.as_bytes())?,
    }
    Ok(())
}

fn emit_json(path: Option<&Path>, seed: Option<u64>, body: Value) -> Outcome<()> {
    let mut obj = Map::new();
    obj.insert("version".into(), json!(VERSION));
    obj.insert("seed".into(), json!(seed));
    if let Value::Object(m) = body {
        obj.extend(m);
    } else {
        obj.insert("result".into(), body);
    }
    let mut text = serde_json::to_string_pretty(&Value::Object(obj)).expect("json values serialize");
    text.push('\n');
    emit(path, &text)
}

fn parse_modulus(s: &str) -> Outcome<BigInt> {
    s.trim().parse().or_else(|_| usage(format!("invalid integer {s:?}")))
}

fn parse_precision(s: &str) -> Outcome<Precision> {
    s.parse().or_else(|e: latfactor::Error| usage(e.to_string()))
}

fn parse_delta(s: Option<&str>) -> Outcome<Rational> {
    match s {
        None => Ok(default_delta()),
        Some(s) => Ok(parse_precision(s)?.value().clone()),
    }
}

fn parse_range(s: Option<&str>, default: (f64, f64)) -> Outcome<(f64, f64)> {
    let Some(s) = s else { return Ok(default) };
    let parsed = s.split_once(':').and_then(|(a, b)| Some((a.trim().parse().ok()?, b.trim().parse().ok()?)));
    match parsed {
        Some(r) => Ok(r),
        None => usage(format!("invalid range {s:?}, expected a:b")),
    }
}

fn load_instance(path: &Path) -> Outcome<CvpInstance> {
    let text = fs::read_to_string(path).map_err(|e| Failure::Io(format!("{}: {e}", path.display())))?;
    Ok(CvpInstance::from_json(&text)?)
}

fn load_prepared(path: &Path, delta: Option<&str>) -> Outcome<Prepared> {
    let inst = load_instance(path)?;
    Ok(prepare(&inst, &parse_delta(delta)?)?)
}

fn rational_str(r: &Rational) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        r.to_string()
    }
}

fn cmd_factor(a: FactorArgs) -> Outcome<()> {
    let modulus = parse_modulus(&a.n)?;
    let dim = match a.dim {
        Some(d) => d,
        None => select_dimension(&modulus, Scheme::Experiment)?,
    };
    let precision = match &a.precision {
        Some(s) => parse_precision(s)?,
        None if dim <= 3 => parse_precision("1.5")?,
        None => Precision::integer(4),
    };
    let mut collect = match a.family {
        FamilyArg::Widened => {
            let mut c = CollectConfig::widened(dim, precision);
            c.family = DiagFamily::Uniform(a.weight_max);
            c
        }
        FamilyArg::Stated => CollectConfig::new(dim, precision),
    };
    if let Some(j) = a.jitter {
        collect.precision_jitter = j;
    }
    if let Some(b2) = a.b2_dim {
        collect.large_dim = b2;
    }
    collect.seed = a.seed;
    collect.strategy = match a.strategy {
        StrategyArg::Spectrum => match a.top_k {
            Some(k) => Strategy::SpectrumTopK(k),
            None => collect.strategy,
        },
        StrategyArg::Qaoa => Strategy::QaoaSample { layers: a.layers, shots: a.shots },
    };
    let mut cfg = FactorConfig::new(collect);
    cfg.batch = a.batch;
    cfg.max_instances = a.max_instances;
    cfg.dependency_limit = a.dependency_limit;
    let (report, store) = factor_with_relations(&modulus, &cfg)?;
    if let Some(path) = &a.relations {
        let mut file = io::BufWriter::new(fs::File::create(path)?);
        store.write_jsonl(&mut file)?;
        file.flush()?;
    }
    let mut body = serde_json::to_value(&report).expect("report serializes");
    if !a.timing {
        body.as_object_mut().expect("report is an object").remove("wall_time_ms");
    }
    body["dim"] = json!(dim);
    body["precision"] = json!(cfg.collect.precision.to_string());
    emit_json(a.output.as_deref(), Some(a.seed), body)
}

fn cmd_instance(a: InstanceArgs) -> Outcome<()> {
    let modulus = parse_modulus(&a.n)?;
    let precision = parse_precision(&a.precision)?;
    let diag = match (&a.diag, a.seed) {
        (Some(d), _) => d.clone(),
        (None, Some(seed)) => random_diag(a.dim, seed),
        (None, None) => default_diag(a.dim),
    };
    let inst = build_instance(&modulus, a.dim, &precision, &diag)?;
    let mut text = inst.to_json()?;
    text.push('\n');
    emit(a.output.as_deref(), &text)
}

fn cmd_spectrum(a: SpectrumArgs) -> Outcome<()> {
    let prep = load_prepared(&a.instance, a.delta.as_deref())?;
    let levels = spectrum(&prep.model, a.k)?;
    emit_json(a.output.as_deref(), None, json!({ "n": prep.n(), "levels": levels }))
}

fn cmd_landscape(a: LandscapeArgs) -> Outcome<()> {
    let prep = load_prepared(&a.instance, a.delta.as_deref())?;
    let obj = QaoaObjective::new(&prep.model)?;
    let gamma = parse_range(a.gamma.as_deref(), obj.gamma_range)?;
    let beta = parse_range(a.beta.as_deref(), obj.beta_range)?;
    let land = landscape(&prep.model, gamma, beta, a.steps)?;
    emit(a.output.as_deref(), &land.to_csv())?;
    if a.output.is_some() {
        let (g, b, e) = land.argmin();
        emit_json(None, None, json!({ "steps": a.steps, "gamma": g, "beta": b, "energy": e }))?;
    }
    Ok(())
}

fn cmd_optimize(a: OptimizeArgs) -> Outcome<()> {
    if a.layers == 0 {
        return usage("--layers must be at least 1");
    }
    let prep = load_prepared(&a.instance, a.delta.as_deref())?;
    let obj = QaoaObjective::new(&prep.model)?;
    let dim = 2 * a.layers;
    let mut hyper = MgdHyper::defaults(dim);
    if let Some(v) = a.lr {
        hyper.learning_rate = v;
    }
    if let Some(v) = a.radius {
        hyper.sample_radius = v;
    }
    if let Some(v) = a.samples {
        hyper.sample_count = v;
    }
    if let Some(v) = a.alpha {
        hyper.rate_decay = v;
    }
    if let Some(v) = a.stability {
        hyper.stability = v;
    }
    if let Some(v) = a.xi {
        hyper.radius_decay = v;
    }
    if let Some(v) = a.tol {
        hyper.tolerance = v;
    }
    if let Some(v) = a.max_evals {
        hyper.max_evals = v;
    }
    let mut rng = ChaCha8Rng::seed_from_u64(a.seed);
    let x0: Vec<f64> = (0..dim).map(|_| rng.random::<f64>()).collect();
    let res = minimize(|x| obj.eval(x), &x0, &hyper, a.seed)?;
    if let Some(path) = &a.trace {
        let mut file = io::BufWriter::new(fs::File::create(path)?);
        res.write_trace_jsonl(&mut file)?;
        file.flush()?;
    }
    let params = obj.params(&res.best);
    let state = obj.sim.state(&params);
    let mut body = json!({
        "layers": a.layers,
        "gammas": params.gammas,
        "betas": params.betas,
        "energy": obj.energy(&res.best),
        "iterations": res.iterations,
        "converged": res.converged,
        "evaluations": res.trace.len(),
        "hyper": hyper,
    });
    let ground = &spectrum(&prep.model, 1)?[0];
    body["ground"] = json!({
        "energy": rational_str(&ground.energy),
        "bits": ground.bits,
        "probability": state.probability(&ground.bits),
    });
    if a.shots > 0 {
        let counts: Map<String, Value> =
            state.sample(a.shots, a.seed)?.into_iter().map(|(b, c)| (b.to_string(), json!(c))).collect();
        body["counts"] = Value::Object(counts);
    }
    emit_json(a.output.as_deref(), Some(a.seed), body)
}

fn cmd_estimate(a: EstimateArgs) -> Outcome<()> {
    if a.table {
        return emit(None, &rsa_table_csv());
    }
    let bits = a.bits.expect("clap enforces one of --bits/--table");
    let r = rsa_resources(bits)?;
    emit_json(None, None, serde_json::to_value(&r).expect("estimate serializes"))
}

fn cmd_schedule(a: ScheduleArgs) -> Outcome<()> {
    let s = match a.topology {
        ScheduleTopology::Kn => kn_schedule(a.n)?,
        ScheduleTopology::Lnn => lnn_schedule(a.n)?,
    };
    let body = json!({
        "n": s.n,
        "kind": s.kind,
        "depth": s.rounds.len(),
        "pairs": s.pair_count(),
        "rounds": s.rounds,
    });
    emit_json(a.output.as_deref(), None, body)
}

fn cmd_touch(a: TouchArgs) -> Outcome<()> {
    let topology: Topology = a.topology.parse().or_else(|e: latfactor::Error| usage(e.to_string()))?;
    let (bits, depth) = touch_size(a.qubits, topology)?;
    emit_json(
        None,
        None,
        json!({ "qubits": a.qubits, "topology": topology.to_string(), "touch_size": bits, "depth": depth }),
    )
}

fn cmd_compare(a: CompareArgs) -> Outcome<()> {
    let precision = parse_precision(&a.precision)?;
    let mut cfg = CompareConfig::new(a.dim, precision, a.samples, a.seed);
    if let Some(b) = a.bits {
        cfg.bits = b;
    }
    cfg.refinement = match a.refinement {
        RefinementArg::Ideal => Refinement::Ideal,
        RefinementArg::Sampled => Refinement::Sampled { layers: a.layers, shots: a.shots },
    };
    let stats = compare(&cfg)?;
    if let Some(path) = &a.output {
        fs::write(path, stats.to_csv())?;
    }
    let mut body = stats.summary(&cfg);
    body["refinement"] = serde_json::to_value(&cfg.refinement).expect("refinement serializes");
    emit_json(None, Some(a.seed), body)
}

fn cmd_reduce(a: ReduceArgs) -> Outcome<()> {
    let inst = load_instance(&a.instance)?;
    let delta = parse_delta(a.delta.as_deref())?;
    let lll = lll_reduce(&inst.matrix(), &delta)?;
    let prep = prepare(&inst, &delta)?;
    let ints = |v: &[BigInt]| v.iter().map(BigInt::to_string).collect::<Vec<_>>();
    let rows: Vec<Vec<String>> = prep
        .reduced
        .integer_rows()
        .expect("reduction of an integer basis is integral")
        .iter()
        .map(|r| ints(r))
        .collect();
    let transform: Vec<Vec<String>> = lll.transform.iter().map(|c| ints(c)).collect();
    let model = &prep.model;
    let couplings: Vec<Value> =
        model.couplings().map(|(i, j, v)| json!({ "i": i, "j": j, "value": rational_str(v) })).collect();
    let body = json!({
        "delta": rational_str(&delta),
        "reduced": rows,
        "transform": transform,
        "babai": {
            "b_op": ints(&prep.babai.b_op),
            "coefficients": ints(&prep.babai.coeffs),
            "mu": prep.babai.mus.iter().map(rational_str).collect::<Vec<_>>(),
            "directions": prep.babai.directions,
            "residual_sq": prep.babai.residual_sq(&inst.target).to_string(),
        },
        "hamiltonian": {
            "constant": rational_str(&model.constant),
            "h": model.h.iter().map(rational_str).collect::<Vec<_>>(),
            "couplings": couplings,
        },
    });
    emit_json(a.output.as_deref(), None, body)
}

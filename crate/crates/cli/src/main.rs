use std::io::Write;
use std::path::PathBuf;

use anyhow::Context;
use clap::{Args, Parser, Subcommand};
use rayon::prelude::*;
use serde_json::{json, Value};

use gmebound::io::{pair_set_json, round_json, LoadedState};
use gmebound::observables::{DecompositionPlan, PartMode, Setting};
use gmebound::{
    auto_select_r, compare_with_wr, compile, dimensionality_certificate, em_bound_from_q, enumerate_bipartitions,
    gme_measure_pure, make_dicke_state, make_isotropic, noise_threshold, plan_settings, q_witness, AutoSelect, Bipartition,
    CompiledWitness, DickeWitnessSpec, IndexPair, NrVariant, PairSet, PureState,
};
use gmebound_cli::reproduce::{self, dicke_noise_threshold};
use gmebound_cli::source::{exit_code, input_error, load_pairs, load_state, parse_p_grid, Preset, Shape};

#[derive(Parser)]
#[command(name = "gmebound", version, about = "Certified lower bounds on genuine multipartite entanglement")]
struct Cli {
    /// Seed for randomized suites.
    #[arg(long, global = true, default_value_t = 2024)]
    seed: u64,
    /// Worker threads for sweeps (0 picks the rayon default).
    #[arg(long, global = true, env = "GMEBOUND_THREADS", default_value_t = 0)]
    threads: usize,
    /// Write the report here instead of stdout.
    #[arg(long, short, global = true)]
    output: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
struct StateArgs {
    /// State file (JSON).
    #[arg(long, conflicts_with = "preset")]
    state: Option<PathBuf>,
    /// Named state used instead of a file.
    #[arg(long, value_enum)]
    preset: Option<Preset>,
    #[arg(long)]
    n: Option<usize>,
    #[arg(long)]
    d: Option<usize>,
    /// Excitation count for Dicke states and witnesses.
    #[arg(long)]
    m: Option<usize>,
    /// Mix the preset with white noise at this visibility.
    #[arg(long)]
    p: Option<f64>,
}

impl StateArgs {
    fn shape(&self) -> Shape {
        Shape { n: self.n, d: self.d, m: self.m }
    }

    fn state(&self) -> anyhow::Result<LoadedState> {
        match (&self.state, self.preset) {
            (Some(path), _) => {
                if self.p.is_some() {
                    return Err(input_error("--p only applies to presets"));
                }
                load_state(path)
            }
            (None, Some(preset)) => {
                let psi = preset.state(self.shape())?;
                Ok(match self.p {
                    Some(p) => LoadedState::Mixed(make_isotropic(&psi, p)?),
                    None => LoadedState::Pure(psi),
                })
            }
            (None, None) => Err(input_error("give --state or --preset")),
        }
    }

    /// The pure target state: a preset without noise or a pure state file.
    fn target(&self) -> anyhow::Result<PureState> {
        match (&self.state, self.preset) {
            (Some(path), _) => load_state(path)?.as_pure().cloned().ok_or_else(|| input_error("the target must be a pure state")),
            (None, Some(preset)) => Ok(preset.state(self.shape())?),
            (None, None) => Err(input_error("give --state or --preset")),
        }
    }
}

#[derive(Args, Clone)]
struct WitnessArgs {
    /// Pair selection file: a JSON list of index-string pairs.
    #[arg(long)]
    pairs: Option<PathBuf>,
    /// Pure target used to auto-select pairs.
    #[arg(long)]
    target: Option<PathBuf>,
    /// Auto-select pairs even when a preset selection exists.
    #[arg(long)]
    auto: bool,
    /// Which N_R convention to use.
    #[arg(long, default_value = "min")]
    nr: NrVariant,
    /// Amplitude cutoff for auto-selection.
    #[arg(long, default_value_t = 0.1)]
    tau: f64,
    /// Cap on the number of auto-selected pairs.
    #[arg(long)]
    max_pairs: Option<usize>,
}

impl WitnessArgs {
    /// File selection, then the preset's own selection, then auto-selection.
    fn selection(&self, state: &StateArgs, fallback: Option<&PureState>) -> anyhow::Result<PairSet> {
        if let Some(path) = &self.pairs {
            let d = fallback.map(|psi| psi.space().d).or(state.d).unwrap_or(2);
            return load_pairs(path, d);
        }
        if let (Some(preset), false) = (state.preset, self.auto) {
            return Ok(preset.pairs(state.shape())?);
        }
        let options = AutoSelect { tau: self.tau, max_pairs: self.max_pairs };
        let target = match (&self.target, fallback) {
            (Some(path), _) => load_state(path)?.as_pure().cloned().ok_or_else(|| input_error("--target must be a pure state"))?,
            (None, Some(psi)) => psi.clone(),
            (None, None) => return Err(input_error("give --pairs, --target or a pure state to select pairs from")),
        };
        Ok(auto_select_r(&target, options)?)
    }

    fn compile(&self, state: &StateArgs, fallback: Option<&PureState>) -> anyhow::Result<CompiledWitness> {
        Ok(compile(&self.selection(state, fallback)?, self.nr)?)
    }
}

#[derive(Subcommand)]
enum Command {
    /// Linear entropy of every bipartition and E_m of a pure state.
    Entropy(StateArgs),
    /// Evaluate a witness on a state.
    Bound {
        #[command(flatten)]
        state: StateArgs,
        #[command(flatten)]
        witness: WitnessArgs,
        /// A value above this certifies genuine multipartite entanglement.
        #[arg(long, default_value_t = 1e-9)]
        tol: f64,
    },
    /// White-noise visibility at which the witness stops detecting the target.
    Threshold {
        #[command(flatten)]
        state: StateArgs,
        #[command(flatten)]
        witness: WitnessArgs,
        /// Also locate the zero of the Dicke witness Q_m^(d).
        #[arg(long)]
        compare_dicke: bool,
        /// Emit a CSV sweep over these visibilities (`lo:hi:count` or a list).
        #[arg(long)]
        p_grid: Option<String>,
    },
    /// Evaluate Q_m^(d), the dimensionality certificate and the implied E_m bound.
    Dicke {
        #[command(flatten)]
        state: StateArgs,
        #[arg(long, default_value = "min")]
        nr: NrVariant,
        #[arg(long, default_value_t = 1e-9)]
        tol: f64,
    },
    /// Compare the PPT witness with the single-pair witness term.
    PptCompare {
        #[command(flatten)]
        state: StateArgs,
        /// The pair as `eta1,eta2`, e.g. `000,111`.
        #[arg(long)]
        pair: String,
        /// Parties on one side, e.g. `1` or `1,3`; all bipartitions when omitted.
        #[arg(long)]
        gamma: Option<String>,
    },
    /// Local measurement settings needed for a witness.
    MeasurePlan {
        #[command(flatten)]
        state: StateArgs,
        #[command(flatten)]
        witness: WitnessArgs,
        /// Which parts of the off-diagonal elements to plan.
        #[arg(long, default_value = "modulus")]
        parts: PartMode,
    },
    /// Q and certificates for Dicke states of growing local dimension.
    Dimensionality {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        d: usize,
        #[arg(long)]
        m: usize,
        #[arg(long, default_value_t = 1e-9)]
        tol: f64,
    },
    /// Run the acceptance checks and print a pass/fail table.
    ReproducePaper {
        /// Run only these criteria.
        #[arg(long, value_delimiter = ',')]
        only: Vec<u8>,
        /// Print JSON instead of the table.
        #[arg(long)]
        json: bool,
    },
}

/// What a subcommand produced.
enum Report {
    Json(Value),
    Text(String),
}

fn setting_label(setting: &Setting) -> String {
    setting.iter().map(|k| k.to_string()).collect::<Vec<_>>().join("x")
}

fn witness_json(w: &CompiledWitness) -> Value {
    let n_eta: serde_json::Map<String, Value> = w.n_eta().iter().map(|(eta, k)| (eta.to_string(), json!(k))).collect();
    let terms: Vec<Value> = w
        .terms()
        .iter()
        .map(|t| {
            json!({
                "pair": [t.pair.first().to_string(), t.pair.second().to_string()],
                "gamma": t.gamma_set.iter().map(|g| g.to_string()).collect::<Vec<_>>(),
                "images": t.images.iter().map(|p| [p.first().to_string(), p.second().to_string()]).collect::<Vec<_>>(),
            })
        })
        .collect();
    json!({
        "n": w.space().n,
        "d": w.space().d,
        "variant": w.variant().to_string(),
        "pairs": pair_set_json(w.pairs()),
        "n_r": w.n_r(),
        "prefactor": w.prefactor(),
        "n_eta": n_eta,
        "terms": terms,
        "off_diagonal_elements": w.off_diagonal_elements().iter().map(|p| [p.first().to_string(), p.second().to_string()]).collect::<Vec<_>>(),
        "diagonal_elements": w.diagonal_elements().iter().map(|e| e.to_string()).collect::<Vec<_>>(),
    })
}

fn plan_json(plan: &DecompositionPlan) -> Value {
    let elements: Vec<Value> = plan
        .elements()
        .iter()
        .map(|e| {
            let terms: Vec<Value> = e
                .terms
                .iter()
                .map(|(s, c)| json!({ "operator": setting_label(s), "coefficient": c, "setting": plan.setting_for(s) }))
                .collect();
            json!({ "element": e.element.to_string(), "terms": terms })
        })
        .collect();
    json!({
        "setting_count": plan.setting_count(),
        "element_count": plan.element_count(),
        "settings": plan.settings().iter().map(setting_label).collect::<Vec<_>>(),
        "elements": elements,
    })
}

fn dicke_spec(state: &StateArgs, n: usize, d: usize) -> anyhow::Result<DickeWitnessSpec> {
    let m = state.m.unwrap_or(n / 2);
    Ok(DickeWitnessSpec::new(n, d, m)?)
}

fn run(cli: &Cli) -> anyhow::Result<(Report, bool)> {
    let report = match &cli.command {
        Command::Entropy(state) => {
            let loaded = state.state()?;
            let psi = loaded.as_pure().ok_or_else(|| input_error("entropy needs a pure state; mixed states are unsupported"))?;
            Report::Json(serde_json::to_value(gme_measure_pure(psi)?)?)
        }
        Command::Bound { state, witness, tol } => {
            let loaded = state.state()?;
            let w = witness.compile(state, loaded.as_pure())?;
            let value = w.evaluate(&loaded.density())?;
            Report::Json(json!({ "value": value, "gme": value > *tol, "tol": tol, "witness": witness_json(&w) }))
        }
        Command::Threshold { state, witness, compare_dicke, p_grid } => {
            let target = state.target()?;
            let w = witness.compile(state, Some(&target))?;
            let spec = if *compare_dicke { Some(dicke_spec(state, target.space().n, target.space().d)?) } else { None };
            if let Some(grid) = p_grid {
                let grid = parse_p_grid(grid)?;
                let rows = grid
                    .par_iter()
                    .map(|&p| {
                        let rho = make_isotropic(&target, p)?;
                        let q = spec.as_ref().map(|s| q_witness(s, &rho)).transpose()?;
                        Ok((p, w.evaluate(&rho)?, q))
                    })
                    .collect::<gmebound::Result<Vec<_>>>()?;
                let mut csv = String::from(if spec.is_some() { "p,witness,q\n" } else { "p,witness\n" });
                for (p, value, q) in rows {
                    let round = |x: f64| gmebound::io::round_significant(x, 12);
                    match q {
                        Some(q) => csv.push_str(&format!("{},{},{}\n", round(p), round(value), round(q))),
                        None => csv.push_str(&format!("{},{}\n", round(p), round(value))),
                    }
                }
                Report::Text(csv)
            } else {
                let p_star = noise_threshold(&w, &target)?;
                let mut out = json!({ "p_star": p_star, "witness": witness_json(&w) });
                if let Some(spec) = &spec {
                    out["dicke"] = match dicke_noise_threshold(spec, &target) {
                        Ok(p) => json!({ "m": spec.m(), "p_star": p, "sound_regime": spec.is_sound_regime() }),
                        Err(e) => json!({ "m": spec.m(), "error": e.to_string() }),
                    };
                }
                Report::Json(out)
            }
        }
        Command::Dicke { state, nr, tol } => {
            let (n, d) = match (state.n, state.d) {
                (Some(n), Some(d)) => (n, d),
                _ => return Err(input_error("dicke needs --n and --d")),
            };
            let spec = dicke_spec(state, n, d)?;
            let rho = if state.state.is_none() && state.preset.is_none() {
                make_dicke_state(n, d, spec.m())?.projector()
            } else {
                state.state()?.density()
            };
            let q = q_witness(&spec, &rho)?;
            let bound = em_bound_from_q(&spec, q, *nr)?;
            Report::Json(json!({
                "n": n, "d": d, "m": spec.m(), "q": q,
                "f_lb": dimensionality_certificate(q, *tol),
                "gme": q > *tol,
                "em_bound": bound,
                "sound_regime": spec.is_sound_regime(),
            }))
        }
        Command::PptCompare { state, pair, gamma } => {
            let loaded = state.state()?;
            let space = loaded.space();
            let (a, b) = pair.split_once(',').ok_or_else(|| input_error("--pair must look like 000,111"))?;
            let pair = IndexPair::parse(a.trim(), b.trim(), space)?;
            let gammas = match gamma {
                Some(g) => vec![Bipartition::parse(g, space.n)?],
                None => enumerate_bipartitions(space.n)?,
            };
            let rho = loaded.density();
            let rows = gammas
                .iter()
                .map(|g| {
                    let cmp = compare_with_wr(pair.first(), pair.second(), g, &rho)?;
                    Ok(json!({ "gamma": g.to_string(), "omega": cmp.omega, "minus_w": cmp.minus_w, "dominance": cmp.dominance }))
                })
                .collect::<gmebound::Result<Vec<_>>>()?;
            Report::Json(json!({ "pair": [pair.first().to_string(), pair.second().to_string()], "comparisons": rows }))
        }
        Command::MeasurePlan { state, witness, parts } => {
            let target = if state.state.is_some() || state.preset.is_some() { Some(state.target()?) } else { None };
            let w = witness.compile(state, target.as_ref())?;
            let mut out = plan_json(&plan_settings(&w, *parts)?);
            out["parts"] = json!(match parts {
                PartMode::RealOnly => "real",
                PartMode::Modulus => "modulus",
            });
            out["pairs"] = pair_set_json(w.pairs());
            Report::Json(out)
        }
        Command::Dimensionality { n, d, m, tol } => {
            let space = gmebound::Space::new(*n, *d)?;
            let spec = DickeWitnessSpec::new(*n, *d, *m)?;
            let mut rows = Vec::new();
            for f in 1..=*d {
                // f = 1 has no excited level; the all-zero product state stands in for it.
                let psi = if f == 1 {
                    PureState::new(space, [(gmebound::MultiIndex::from_rank(0, space), num_complex::Complex64::new(1.0, 0.0))])?
                } else {
                    make_dicke_state(*n, f, *m)?.embed(*d)?
                };
                let q = q_witness(&spec, &psi.projector())?;
                // The f-level witness on the state restricted to its own levels.
                let q_native = if f == 1 {
                    None
                } else {
                    Some(q_witness(&DickeWitnessSpec::new(*n, f, *m)?, &make_dicke_state(*n, f, *m)?.projector())?)
                };
                rows.push(json!({
                    "f": f,
                    "q": q,
                    "f_lb": dimensionality_certificate(q, *tol),
                    "q_native": q_native,
                    "f_lb_native": q_native.map(|q| dimensionality_certificate(q, *tol)),
                }));
            }
            Report::Json(json!({ "n": n, "d": d, "m": m, "rows": rows }))
        }
        Command::ReproducePaper { only, json } => {
            let ids: Vec<u8> = if only.is_empty() { reproduce::CRITERIA.to_vec() } else { only.clone() };
            let outcomes: Vec<_> = ids.iter().map(|&id| reproduce::run(id, cli.seed)).collect();
            let all_passed = outcomes.iter().all(|o| o.passed);
            let report = if *json {
                Report::Json(serde_json::to_value(&outcomes)?)
            } else {
                let mut text: String = outcomes.iter().map(|o| o.line() + "\n").collect();
                let passed = outcomes.iter().filter(|o| o.passed).count();
                text.push_str(&format!("{passed}/{} criteria passed\n", outcomes.len()));
                Report::Text(text)
            };
            return Ok((report, all_passed));
        }
    };
    Ok((report, true))
}

fn render(report: Report) -> anyhow::Result<String> {
    Ok(match report {
        Report::Json(v) => serde_json::to_string_pretty(&round_json(v))? + "\n",
        Report::Text(t) => t,
    })
}

fn emit(report: Report, output: Option<&PathBuf>) -> anyhow::Result<()> {
    let text = render(report)?;
    match output {
        Some(path) => std::fs::write(path, text).with_context(|| format!("cannot write {}", path.display())),
        None => {
            std::io::stdout().write_all(text.as_bytes())?;
            Ok(())
        }
    }
}

fn main() {
    let cli = Cli::parse();
    if cli.threads > 0 {
        // Only fails if a pool already exists, which cannot happen this early.
        let _ = rayon::ThreadPoolBuilder::new().num_threads(cli.threads).build_global();
    }
    let code = match run(&cli).and_then(|(report, ok)| emit(report, cli.output.as_ref()).map(|_| ok)) {
        Ok(true) => 0,
        Ok(false) => 1,
        Err(err) => {
            eprintln!("error: {err:#}");
            exit_code(&err)
        }
    };
    std::process::exit(code);
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Runs a command line in-process and returns the rendered report.
    fn invoke(args: &[&str]) -> anyhow::Result<(String, bool)> {
        let cli = Cli::try_parse_from(std::iter::once("gmebound").chain(args.iter().copied()))?;
        let (report, ok) = run(&cli)?;
        Ok((render(report)?, ok))
    }

    fn json(args: &[&str]) -> Value {
        let (text, ok) = invoke(args).unwrap_or_else(|e| panic!("{args:?}: {e:#}"));
        assert!(ok);
        serde_json::from_str(&text).expect("valid JSON")
    }

    /// Exit code the binary would use for a failing command.
    fn code(args: &[&str]) -> i32 {
        match Cli::try_parse_from(std::iter::once("gmebound").chain(args.iter().copied())) {
            Err(e) => e.exit_code(),
            Ok(cli) => match run(&cli) {
                Ok((_, true)) => 0,
                Ok((_, false)) => 1,
                Err(e) => exit_code(&e),
            },
        }
    }

    fn scratch(name: &str, body: &str) -> String {
        let dir = std::env::temp_dir().join(format!("gmebound-cli-{}", std::process::id()));
        std::fs::create_dir_all(&dir).unwrap();
        let path = dir.join(name);
        std::fs::write(&path, body).unwrap();
        path.to_string_lossy().into_owned()
    }

    fn close(v: &Value, want: f64, tol: f64) -> bool {
        (v.as_f64().expect("number") - want).abs() < tol
    }

    #[test]
    fn entropy_of_w_and_product_states() {
        assert!(close(&json(&["entropy", "--preset", "w"])["em"], 0.942809, 1e-6));
        let product = scratch("product.json", r#"{"n":2,"d":2,"kind":"pure","amplitudes":[{"index":"01","re":1}]}"#);
        assert!(close(&json(&["entropy", "--state", &product])["em"], 0.0, 1e-15));
    }

    #[test]
    fn input_errors_exit_with_two() {
        let broken = scratch("broken.json", "{\"n\": 2,");
        let err = invoke(&["entropy", "--state", &broken]).unwrap_err();
        assert!(format!("{err:#}").contains("parse error"));
        assert_eq!(code(&["entropy", "--state", &broken]), 2);
        assert_eq!(code(&["entropy", "--preset", "w", "--p", "0.5"]), 2);
        assert_eq!(code(&["entropy", "--state", "/nonexistent/state.json"]), 2);
        assert_eq!(code(&["bound", "--preset", "w", "--nr", "huge"]), 2);
        assert_eq!(code(&["entropy"]), 2);
    }

    #[test]
    fn bound_on_noisy_singlet() {
        let above = json(&["bound", "--preset", "singlet4", "--p", "0.8"]);
        assert!(above["value"].as_f64().unwrap() > 0.0 && above["gme"] == true);
        let below = json(&["bound", "--preset", "singlet4", "--p", "0.7"]);
        assert!(below["value"].as_f64().unwrap() <= 0.0 && below["gme"] == false);
    }

    #[test]
    fn bound_with_pair_file_and_auto_selection() {
        let pairs = scratch("w_pairs.json", r#"[["001","100"],["001","010"],["010","100"]]"#);
        let v = json(&["bound", "--preset", "w", "--pairs", &pairs]);
        assert!(close(&v["value"], std::f64::consts::FRAC_1_SQRT_2, 1e-10));
        assert_eq!(v["witness"]["n_r"], 1);
        let ghz = json(&["bound", "--preset", "ghz", "--auto"]);
        assert_eq!(ghz["witness"]["pairs"], json!([["000", "111"]]));
        assert!(close(&ghz["value"], 1.0, 1e-10));
    }

    #[test]
    fn thresholds() {
        let s4 = json(&["threshold", "--preset", "singlet4", "--compare-dicke"]);
        assert!(close(&s4["p_star"], 21.0 / 29.0, 1e-6));
        assert!(close(&s4["dicke"]["p_star"], 27.0 / 43.0, 1e-6));
        assert!(close(&json(&["threshold", "--preset", "isotropic"])["p_star"], 0.25, 1e-9));
    }

    #[test]
    fn undetected_target_is_an_analysis_error() {
        let pairs = scratch("product_pairs.json", r#"[["00","11"]]"#);
        let product = scratch("product2.json", r#"{"n":2,"d":2,"kind":"pure","amplitudes":[{"index":"00","re":1}]}"#);
        assert_eq!(code(&["threshold", "--state", &product, "--pairs", &pairs]), 1);
    }

    #[test]
    fn sweep_is_ordered_and_repeatable() {
        let args = ["threshold", "--preset", "singlet4", "--compare-dicke", "--p-grid", "0:1:21"];
        let (text, _) = invoke(&args).unwrap();
        assert_eq!(invoke(&args).unwrap().0, text);
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines[0], "p,witness,q");
        assert_eq!(lines.len(), 22);
        let ps: Vec<f64> = lines[1..].iter().map(|l| l.split(',').next().unwrap().parse().unwrap()).collect();
        assert!(ps.windows(2).all(|w| w[0] < w[1]));
        assert_eq!(code(&["threshold", "--preset", "w", "--p-grid", "0:2:3"]), 2);
    }

    #[test]
    fn dicke_report() {
        let v = json(&["dicke", "--n", "3", "--d", "2", "--m", "1"]);
        assert!(close(&v["q"], 1.0, 1e-9));
        assert_eq!(v["f_lb"], 2);
        assert!(close(&v["em_bound"]["weak"], 1.0 / 3f64.sqrt(), 1e-9));
        assert_eq!(json(&["dicke", "--n", "2", "--d", "3", "--m", "1"])["sound_regime"], false);
    }

    #[test]
    fn dimensionality_table() {
        let v = json(&["dimensionality", "--n", "3", "--d", "3", "--m", "1"]);
        let rows = v["rows"].as_array().unwrap();
        assert!(close(&rows[0]["q"], 0.0, 1e-12) && rows[0]["f_lb"] == 1);
        assert!(close(&rows[1]["q_native"], 1.0, 1e-9) && rows[1]["f_lb_native"] == 2);
        assert!(close(&rows[2]["q"], 2.0, 1e-9) && rows[2]["f_lb"] == 3);
        assert_eq!(code(&["dimensionality", "--n", "3", "--d", "3", "--m", "2"]), 2);
    }

    #[test]
    fn ppt_compare_on_ghz() {
        let v = json(&["ppt-compare", "--preset", "ghz", "--pair", "000,111"]);
        let rows = v["comparisons"].as_array().unwrap();
        assert_eq!(rows.len(), 3);
        for row in rows {
            assert!(close(&row["omega"], -0.5, 1e-12) && row["dominance"] == true);
        }
        assert_eq!(code(&["ppt-compare", "--preset", "ghz", "--pair", "000,110"]), 2);
    }

    #[test]
    fn measurement_plans() {
        let iso = json(&["measure-plan", "--preset", "isotropic", "--parts", "real"]);
        assert_eq!(iso["setting_count"], 10);
        assert_eq!(iso["element_count"], 9);
        assert_eq!(json(&["measure-plan", "--preset", "w"])["element_count"], 10);
    }

    #[test]
    fn output_is_deterministic_and_rounded() {
        let args = ["bound", "--preset", "dicke", "--n", "4", "--d", "3", "--p", "0.9"];
        let (a, _) = invoke(&args).unwrap();
        assert_eq!(invoke(&args).unwrap().0, a);
        let v: Value = serde_json::from_str(&a).unwrap();
        let digits = v["value"].to_string().trim_start_matches('-').replace('.', "").trim_start_matches('0').len();
        assert!(digits <= 12, "{}", v["value"]);
    }

    #[test]
    fn reproduce_subset() {
        let (text, ok) = invoke(&["reproduce-paper", "--only", "1,4"]).unwrap();
        assert!(ok && text.contains("PASS criterion 1") && text.contains("PASS criterion 4"));
        assert_eq!(code(&["reproduce-paper", "--only", "2"]), 1);
    }
}

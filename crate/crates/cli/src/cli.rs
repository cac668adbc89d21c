//! Command-line front end.

use std::fmt::Write as _;
use std::net::SocketAddr;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use clap::{Parser, Subcommand, ValueEnum};
use entwine_core::inference::{FrequencyTable, OutcomeDistribution};
use entwine_core::lie::GeneratorSet;
use entwine_core::scenario::{
    generate_seed, load_scenario_json, new_session, QuestionRef, Scenario, ScenarioInfo, Session,
    SessionSnapshot,
};
use serde::Serialize;

use crate::error::ApiError;
use crate::http::{cors, router, AppState};
use crate::service::{self, Catalogs, DecomposeRequest, FactorRef, PeekRequest, PeekResponse};
use crate::store::SessionStore;

#[derive(Debug, Parser)]
#[command(
    name = "entwine",
    version,
    about = "Questions as Lie algebra generators: inspect, decompose, ask and simulate"
)]
pub struct Cli {
    /// Built-in scenario name or path to a scenario JSON document.
    #[arg(long, global = true, default_value = "child-su2")]
    pub scenario: String,

    /// Session or simulation seed; generated when absent.
    #[arg(long, global = true)]
    pub seed: Option<u64>,

    #[arg(long, global = true, value_enum, default_value_t = Format::Human)]
    pub format: Format,

    /// Session snapshot file. `peek`, `ask` and `evolve` resume from it when
    /// it exists and `ask`/`evolve` write it back; `serve` loads it at start
    /// and saves all sessions on shutdown.
    #[arg(long, global = true)]
    pub snapshot: Option<PathBuf>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Human,
    Structured,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Algebra and representation metadata of the scenario.
    Info,
    /// Generator-set and Jacobi checks.
    Verify {
        /// Generator set JSON to check instead of the scenario representation.
        #[arg(long)]
        generators: Option<PathBuf>,
    },
    /// Splits a tensor product of irreps into irreducible blocks.
    Decompose {
        #[arg(long, default_value = "su3")]
        algebra: String,
        /// Irrep names of the factors, e.g. `8 8` or `3 3bar`.
        #[arg(long, num_args = 1.., required = true)]
        tensor: Vec<String>,
        #[arg(long)]
        with_isometries: bool,
    },
    /// Outcome distribution without changing the state. Several questions
    /// give their joint distribution and must commute.
    Peek {
        /// Question names or comma-separated generator coefficients.
        #[arg(required = true, allow_hyphen_values = true)]
        questions: Vec<String>,
    },
    /// Asks a question, collapsing the state.
    Ask {
        #[arg(allow_hyphen_values = true)]
        question: String,
    },
    /// Applies `exp(-i θ q)` to the state.
    Evolve {
        #[arg(allow_hyphen_values = true)]
        question: String,
        #[arg(long, allow_hyphen_values = true)]
        theta: f64,
    },
    /// Repeats a chain of asks from the initial state and tabulates the answers.
    Simulate {
        /// Comma-separated question names.
        #[arg(long)]
        chain: String,
        #[arg(long, default_value_t = 10_000)]
        trials: u64,
    },
    /// Runs the HTTP session service.
    Serve {
        #[arg(long, default_value = "127.0.0.1:8080")]
        bind: SocketAddr,
        /// Origin allowed by CORS; repeatable, `*` for any.
        #[arg(long)]
        allow_origin: Vec<String>,
    },
}

/// Result of one command in both output formats.
pub struct Output {
    pub structured: serde_json::Value,
    pub human: String,
}

impl Output {
    fn new<T: Serialize>(value: &T, human: String) -> Result<Self, ApiError> {
        Ok(Self {
            structured: serde_json::to_value(value)
                .map_err(|e| ApiError::internal(e.to_string()))?,
            human,
        })
    }

    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Human => self.human.clone(),
            Format::Structured => {
                serde_json::to_string_pretty(&self.structured).expect("values serialize")
            }
        }
    }
}

/// A question argument: comma-separated numbers are coefficients, anything else a name.
pub fn parse_question(arg: &str) -> QuestionRef {
    let parts: Option<Vec<f64>> = arg.split(',').map(|p| p.trim().parse().ok()).collect();
    match parts {
        Some(c) if arg.contains(',') || arg.trim().parse::<f64>().is_ok() => {
            QuestionRef::Coefficients(c)
        }
        _ => QuestionRef::Name(arg.trim().to_string()),
    }
}

pub fn load_scenario_arg(arg: &str) -> Result<Scenario, ApiError> {
    if entwine_core::scenario::BUILTIN_SCENARIOS.contains(&arg) {
        return Ok(entwine_core::scenario::builtin_scenario(arg)?);
    }
    let path = Path::new(arg);
    if !path.exists() {
        return Err(ApiError::new(
            crate::error::ErrorCode::UnknownName,
            format!("`{arg}` is neither a built-in scenario nor a file"),
        )
        .at("scenario"));
    }
    let text = read(path, "scenario")?;
    Ok(load_scenario_json(&text)?)
}

fn read(path: &Path, field: &str) -> Result<String, ApiError> {
    std::fs::read_to_string(path)
        .map_err(|e| ApiError::validation(field, format!("cannot read {}: {e}", path.display())))
}

fn open_session(cli: &Cli) -> Result<Session, ApiError> {
    if let Some(path) = cli.snapshot.as_deref().filter(|p| p.exists()) {
        let snap: SessionSnapshot = service::parse_json(read(path, "snapshot")?.as_bytes())?;
        return Session::restore("cli", &snap).map_err(ApiError::from);
    }
    let scenario = Arc::new(load_scenario_arg(&cli.scenario)?);
    Ok(new_session(
        scenario,
        "cli",
        cli.seed.unwrap_or_else(generate_seed),
    ))
}

fn save_session(cli: &Cli, session: &Session) -> Result<(), ApiError> {
    if let Some(path) = &cli.snapshot {
        let json = serde_json::to_vec_pretty(&session.snapshot())
            .map_err(|e| ApiError::internal(e.to_string()))?;
        std::fs::write(path, json)
            .map_err(|e| ApiError::internal(format!("cannot write {}: {e}", path.display())))?;
    }
    Ok(())
}

/// Runs every subcommand except `serve`.
pub fn run(cli: &Cli) -> Result<Output, ApiError> {
    match &cli.command {
        Command::Info => {
            let info = load_scenario_arg(&cli.scenario)?.info();
            Output::new(&info, human_info(&info))
        }
        Command::Verify { generators } => {
            let set = match generators {
                Some(path) => {
                    service::parse_json::<GeneratorSet>(read(path, "generators")?.as_bytes())?
                }
                None => load_scenario_arg(&cli.scenario)?.representation().clone(),
            };
            let out = service::verify(&set);
            let mut h = String::new();
            for c in &out.report.checks {
                let _ = writeln!(
                    h,
                    "{:<22}{:>12.3e}  (tol {:.1e})  {}",
                    c.name,
                    c.residual,
                    c.tolerance,
                    verdict(c.passed)
                );
            }
            match out.jacobi_residual {
                Some(r) => {
                    let ok = r <= out.jacobi_tolerance;
                    let _ = writeln!(
                        h,
                        "{:<22}{:>12.3e}  (tol {:.1e})  {}",
                        "jacobi",
                        r,
                        out.jacobi_tolerance,
                        verdict(ok)
                    );
                }
                None => h.push_str("jacobi                structure constants unavailable  FAIL\n"),
            }
            let _ = write!(
                h,
                "{}",
                if out.passed {
                    "verified"
                } else {
                    "verification failed"
                }
            );
            if !out.passed {
                println!("{}", Output::new(&out, h)?.render(cli.format));
                return Err(ApiError::validation(
                    "generators",
                    "generator set failed verification",
                ));
            }
            Output::new(&out, h)
        }
        Command::Decompose {
            algebra,
            tensor,
            with_isometries,
        } => {
            let req = DecomposeRequest {
                algebra: algebra.clone(),
                factors: tensor.iter().map(|t| FactorRef::Name(t.clone())).collect(),
                with_isometries: *with_isometries,
            };
            let out = service::decompose(&Catalogs::new(), &req)?;
            let mut h = format!("{} = {}\n", out.factors.join(" ⊗ "), out.decomposition);
            for p in &out.parts {
                let _ = writeln!(
                    h,
                    "  {:<6} x{}  dim {:<3} C2 {:>9.6}  C3 {:>10.6}  residual {:.1e}",
                    p.name, p.multiplicity, p.d_r, p.c2, p.c3, p.residual
                );
            }
            let _ = write!(h, "commutant dimension {}", out.commutant_dim);
            Output::new(&out, h)
        }
        Command::Peek { questions } => {
            let session = open_session(cli)?;
            let mut qs: Vec<QuestionRef> = questions.iter().map(|q| parse_question(q)).collect();
            let req = if qs.len() == 1 {
                PeekRequest {
                    question: qs.pop(),
                    questions: None,
                }
            } else {
                PeekRequest {
                    question: None,
                    questions: Some(qs),
                }
            };
            let out = service::peek(&session, req)?;
            let h = match &out {
                PeekResponse::Single {
                    question,
                    distribution,
                } => human_distribution(&question.to_string(), distribution),
                PeekResponse::Joint {
                    questions,
                    distribution,
                } => {
                    let names: Vec<String> = questions.iter().map(ToString::to_string).collect();
                    let mut h = format!("({})\n", names.join(", "));
                    for o in &distribution.outcomes {
                        let vals: Vec<String> =
                            o.eigenvalues.iter().map(|v| format!("{v:+.6}")).collect();
                        let _ = writeln!(h, "  ({})  p = {:.6}", vals.join(", "), o.probability);
                    }
                    h.trim_end().to_string()
                }
            };
            Output::new(&out, h)
        }
        Command::Ask { question } => {
            let mut session = open_session(cli)?;
            let q = parse_question(question);
            let out = service::ask(&mut session, &q)?;
            save_session(cli, &session)?;
            let h = format!(
                "{}\nanswer: {:+.6}  (step {}, seed {})",
                human_distribution(&q.to_string(), &out.distribution_before),
                out.outcome,
                out.event.step,
                out.event.seed
            );
            Output::new(&out, h)
        }
        Command::Evolve { question, theta } => {
            let mut session = open_session(cli)?;
            let q = parse_question(question);
            let out = service::evolve(&mut session, &q, *theta)?;
            save_session(cli, &session)?;
            let mut h = format!(
                "evolved along {q} by θ = {theta} (step {})\n",
                out.event.step
            );
            for (name, v) in &out.state_summary.expectations {
                let _ = writeln!(h, "  ⟨{name}⟩ = {v:+.6}");
            }
            Output::new(&out, h.trim_end().to_string())
        }
        Command::Simulate { chain, trials } => {
            let scenario = load_scenario_arg(&cli.scenario)?;
            let chain: Vec<QuestionRef> = chain
                .split(',')
                .map(|q| QuestionRef::Name(q.trim().to_string()))
                .collect();
            let table = service::simulate(
                &scenario,
                &chain,
                *trials,
                cli.seed.unwrap_or_else(generate_seed),
            )?;
            Output::new(&table, human_table(&table))
        }
        Command::Serve { .. } => Err(ApiError::internal("serve runs through `serve`, not `run`")),
    }
}

fn verdict(ok: bool) -> &'static str {
    if ok {
        "ok"
    } else {
        "FAIL"
    }
}

fn human_info(info: &ScenarioInfo) -> String {
    let mut h = format!("scenario  {}\nalgebra   {}\n", info.scenario, info.algebra);
    let rank = info.rank.map_or("-".to_string(), |r| r.to_string());
    let _ = writeln!(
        h,
        "rank {rank}   d {}   d_r {}   T {}",
        info.d, info.d_r, info.trace_index
    );
    match info.c2 {
        Some(c2) => {
            let _ = writeln!(h, "C2 = {c2:.6} · I");
        }
        None => {
            let spec: Vec<String> = info.c2_spectrum.iter().map(|v| format!("{v:.6}")).collect();
            let _ = writeln!(h, "C2 spectrum {{{}}} (reducible)", spec.join(", "));
        }
    }
    if let Some(w) = &info.weights {
        h.push_str("weights\n");
        for row in w {
            let vals: Vec<String> = row.iter().map(|v| format!("{v:+.6}")).collect();
            let _ = writeln!(h, "  ({})", vals.join(", "));
        }
    }
    let opts: Vec<String> = info
        .options
        .iter()
        .map(|o| format!("{}={}", o.name, o.index))
        .collect();
    let _ = writeln!(h, "options   {}", opts.join(" "));
    let _ = write!(h, "questions {}", info.questions.join(" "));
    for w in &info.warnings {
        let _ = write!(h, "\nwarning: {w}");
    }
    h
}

fn human_distribution(question: &str, d: &OutcomeDistribution) -> String {
    let mut h = format!("{question}\n");
    for o in &d.outcomes {
        let bar = "#".repeat((o.probability * 40.0).round() as usize);
        let _ = writeln!(h, "  {:+.6}  p = {:.6}  {bar}", o.eigenvalue, o.probability);
    }
    h.trim_end().to_string()
}

fn human_table(t: &FrequencyTable) -> String {
    let mut h = format!(
        "chain {}  trials {}  seed {}\n",
        t.chain.join(" → "),
        t.trials,
        t.seed
    );
    for e in &t.counts {
        let vals: Vec<String> = e.outcomes.iter().map(|v| format!("{v:+.3}")).collect();
        let _ = writeln!(
            h,
            "  ({})  {:>8}  {:.4}",
            vals.join(", "),
            e.count,
            e.count as f64 / t.trials as f64
        );
    }
    h.trim_end().to_string()
}

/// Runs the HTTP service until Ctrl-C, then saves sessions if `--snapshot` was given.
pub fn serve(cli: &Cli, bind: SocketAddr, allow_origin: &[String]) -> Result<(), ApiError> {
    let store = match cli.snapshot.as_deref().filter(|p| p.exists()) {
        Some(path) => SessionStore::load(path)?,
        None => SessionStore::new(),
    };
    let state = AppState::new(store);
    let mut app = router(state.clone());
    if !allow_origin.is_empty() {
        app = app.layer(cors(allow_origin)?);
    }
    let rt = tokio::runtime::Runtime::new().map_err(|e| ApiError::internal(e.to_string()))?;
    rt.block_on(async {
        let listener = tokio::net::TcpListener::bind(bind)
            .await
            .map_err(|e| ApiError::internal(format!("cannot bind {bind}: {e}")))?;
        eprintln!(
            "listening on http://{}",
            listener
                .local_addr()
                .map_err(|e| ApiError::internal(e.to_string()))?
        );
        axum::serve(listener, app)
            .with_graceful_shutdown(async {
                let _ = tokio::signal::ctrl_c().await;
            })
            .await
            .map_err(|e| ApiError::internal(e.to_string()))
    })?;
    if let Some(path) = &cli.snapshot {
        state.store.save(path)?;
        eprintln!("saved {} sessions to {}", state.store.len(), path.display());
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn question_arguments() {
        assert_eq!(parse_question("cola"), QuestionRef::Name("cola".into()));
        assert_eq!(
            parse_question("1,0,0"),
            QuestionRef::Coefficients(vec![1.0, 0.0, 0.0])
        );
        assert_eq!(
            parse_question("-0.6, 0.8"),
            QuestionRef::Coefficients(vec![-0.6, 0.8])
        );
        assert_eq!(parse_question("1"), QuestionRef::Coefficients(vec![1.0]));
    }

    #[test]
    fn flags_parse() {
        let cli = Cli::try_parse_from([
            "entwine",
            "decompose",
            "--tensor",
            "8",
            "8",
            "--format",
            "structured",
        ])
        .unwrap();
        assert_eq!(cli.format, Format::Structured);
        assert!(matches!(cli.command, Command::Decompose { ref tensor, .. } if tensor.len() == 2));
        let cli = Cli::try_parse_from(["entwine", "evolve", "water", "--theta", "-1.5"]).unwrap();
        assert!(matches!(cli.command, Command::Evolve { theta, .. } if theta == -1.5));
    }

    #[test]
    fn info_reports_the_fundamental() {
        let cli = Cli::try_parse_from(["entwine", "info", "--scenario", "adult-su3"]).unwrap();
        let out = run(&cli).unwrap();
        assert_eq!(out.structured["rank"], 2);
        assert_eq!(out.structured["d_r"], 3);
        assert!(out.human.contains("C2 = 1.333333"));
    }
}

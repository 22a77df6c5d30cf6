use std::collections::HashMap;
use std::fs::{self, File};
use std::io::{self, BufRead, BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{anyhow, Context};
use clap::{Args, Parser, Subcommand};
use rayon::prelude::*;
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

use nlrefute::datagen::{extract_training_samples, generate, generate_nlsat, DatagenError, GenConfig, Instance};
use nlrefute::engine::{HaltReason, RefuteConfig, Strategy, DEFAULT_BUDGET};
use nlrefute::eval::{check_proof, score, PredictedStep};
use nlrefute::judge::{check_sat, judge, Label};
use nlrefute::nl::{Lexicon, Sentence};
use nlrefute::proof::{format_proof, render_proof, RenderedStep};

/// Resolution refutation over template-English theories.
#[derive(Parser, Debug)]
#[command(name = "nlrefute", version)]
struct Cli {
    #[command(flatten)]
    global: Global,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug)]
struct Global {
    /// Maximum proof length per theory set [default: 100]
    #[arg(long, global = true)]
    budget: Option<usize>,
    /// Search strategy, sos-linear or unrestricted [default: sos-linear]
    #[arg(long, global = true)]
    strategy: Option<Strategy>,
    /// Lexicon file with [entities], [attributes] and [relations] sections
    #[arg(long, global = true)]
    lexicon: Option<PathBuf>,
    /// Generator seed, overriding the config file
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Emit JSON lines instead of text
    #[arg(long, global = true)]
    json: bool,
    /// Worker threads [default: available parallelism]
    #[arg(long, global = true)]
    jobs: Option<usize>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Label a hypothesis True, False or Unknown and print the refutation
    Prove {
        /// Theory file, one sentence per line
        #[arg(long, requires = "hypothesis", conflicts_with = "instances")]
        theory: Option<PathBuf>,
        /// Hypothesis sentence
        #[arg(long, requires = "theory")]
        hypothesis: Option<String>,
        /// Dataset JSONL; every line is judged
        #[arg(long, required_unless_present = "theory")]
        instances: Option<PathBuf>,
    },
    /// Decide whether a theory contradicts itself
    Sat {
        /// Theory file, one sentence per line
        #[arg(long, conflicts_with = "instances")]
        theory: Option<PathBuf>,
        /// Dataset JSONL; every line's theory is checked
        #[arg(long, required_unless_present = "theory")]
        instances: Option<PathBuf>,
    },
    /// Generate a labeled dataset
    Gen {
        /// TOML generator config; omitted fields take their defaults
        #[arg(long)]
        config: Option<PathBuf>,
        /// Output JSONL [default: stdout]
        #[arg(long)]
        out: Option<PathBuf>,
        /// Generate rule-only satisfiability instances with this fraction unsatisfiable
        #[arg(long)]
        nlsat: Option<f64>,
        /// Also write pre_s/post_s/kc training records to this JSONL file
        #[arg(long)]
        training_records: Option<PathBuf>,
        /// Number of instances, overriding the config file
        #[arg(long)]
        count: Option<usize>,
    },
    /// Score predictions against a gold dataset (entailment and full accuracy)
    Eval {
        /// Prediction JSONL: id, predicted_label, predicted_proof per line
        #[arg(long)]
        predictions: PathBuf,
        /// Gold dataset JSONL
        #[arg(long)]
        gold: PathBuf,
    },
    /// Check each predicted proof against its instance
    Check {
        /// Prediction JSONL: id, predicted_label, predicted_proof per line
        #[arg(long)]
        proofs: PathBuf,
        /// Gold dataset JSONL
        #[arg(long)]
        instances: PathBuf,
    },
}

enum Failure {
    Input(anyhow::Error),
    Config(anyhow::Error),
    Internal(anyhow::Error),
}

type Result<T> = std::result::Result<T, Failure>;

trait Classify<T> {
    fn input(self) -> Result<T>;
    fn config(self) -> Result<T>;
}

impl<T, E: Into<anyhow::Error>> Classify<T> for std::result::Result<T, E> {
    fn input(self) -> Result<T> {
        self.map_err(|e| Failure::Input(e.into()))
    }

    fn config(self) -> Result<T> {
        self.map_err(|e| Failure::Config(e.into()))
    }
}

struct Settings {
    lex: Lexicon,
    refute: RefuteConfig,
    json: bool,
    pool: rayon::ThreadPool,
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 4 } else { 0 });
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Input(e)) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
        Err(Failure::Config(e)) => {
            eprintln!("config error: {e:#}");
            ExitCode::from(4)
        }
        Err(Failure::Internal(e)) => {
            eprintln!("internal error: {e:#}");
            ExitCode::from(1)
        }
    }
}

fn run(cli: Cli) -> Result<()> {
    let g = &cli.global;
    let lex = match &g.lexicon {
        Some(p) => Lexicon::load(p).config()?,
        None => Lexicon::default(),
    };
    let budget = g.budget.unwrap_or(DEFAULT_BUDGET);
    if budget == 0 {
        return Err(Failure::Config(anyhow!("--budget must be at least 1")));
    }
    let mut pool = rayon::ThreadPoolBuilder::new();
    if let Some(j) = g.jobs {
        if j == 0 {
            return Err(Failure::Config(anyhow!("--jobs must be at least 1")));
        }
        pool = pool.num_threads(j);
    }
    let settings = Settings {
        lex,
        refute: RefuteConfig::new(g.strategy.unwrap_or_default(), budget),
        json: g.json,
        pool: pool.build().config()?,
    };
    match &cli.command {
        Command::Prove { theory, hypothesis, instances } => {
            prove(&settings, theory.as_deref(), hypothesis.as_deref(), instances.as_deref())
        }
        Command::Sat { theory, instances } => sat(&settings, theory.as_deref(), instances.as_deref()),
        Command::Gen { config, out, nlsat, training_records, count } => {
            gen(&settings, &cli.global, config.as_deref(), out.as_deref(), *nlsat, training_records.as_deref(), *count)
        }
        Command::Eval { predictions, gold } => eval(&settings, predictions, gold),
        Command::Check { proofs, instances } => check(&settings, proofs, instances),
    }
}

fn read_theory(path: &Path) -> Result<Vec<String>> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display())).input()?;
    Ok(text.lines().map(str::trim).filter(|l| !l.is_empty() && !l.starts_with('#')).map(str::to_string).collect())
}

fn read_jsonl<T: DeserializeOwned>(path: &Path) -> Result<Vec<T>> {
    let file = File::open(path).with_context(|| format!("opening {}", path.display())).input()?;
    let mut out = Vec::new();
    for (n, line) in BufReader::new(file).lines().enumerate() {
        let line = line.with_context(|| format!("reading {}", path.display())).input()?;
        if line.trim().is_empty() {
            continue;
        }
        let value = serde_json::from_str(&line).with_context(|| format!("{}:{}", path.display(), n + 1)).input()?;
        out.push(value);
    }
    Ok(out)
}

fn parse_all(texts: &[String], lex: &Lexicon, id: &str) -> Result<Vec<Sentence>> {
    texts.iter().map(|t| Sentence::parse(t, lex).with_context(|| format!("{id}: `{t}`")).input()).collect()
}

fn writer(path: Option<&Path>) -> Result<Box<dyn Write>> {
    Ok(match path {
        Some(p) => Box::new(BufWriter::new(File::create(p).with_context(|| format!("creating {}", p.display())).input()?)),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    })
}

fn write_json<T: Serialize>(out: &mut dyn Write, value: &T) -> Result<()> {
    let line = serde_json::to_string(value).map_err(|e| Failure::Internal(e.into()))?;
    writeln!(out, "{line}").input()
}

#[derive(Deserialize)]
struct TheoryInput {
    id: String,
    theory: Vec<String>,
    #[serde(default)]
    hypothesis: String,
}

#[derive(Serialize)]
struct ProveReport {
    id: String,
    predicted_label: Label,
    predicted_proof: Vec<RenderedStep>,
    steps_t1: usize,
    steps_t2: usize,
    halt_t1: HaltReason,
    halt_t2: HaltReason,
    tie_broken: bool,
}

fn prove(s: &Settings, theory: Option<&Path>, hypothesis: Option<&str>, instances: Option<&Path>) -> Result<()> {
    let inputs = match (theory, hypothesis, instances) {
        (Some(t), Some(h), None) => vec![TheoryInput { id: "input".into(), theory: read_theory(t)?, hypothesis: h.into() }],
        (None, None, Some(p)) => read_jsonl(p)?,
        _ => return Err(Failure::Config(anyhow!("prove needs --theory with --hypothesis, or --instances"))),
    };
    let reports: Vec<Result<ProveReport>> = s.pool.install(|| {
        inputs
            .par_iter()
            .map(|inp| {
                let theory = parse_all(&inp.theory, &s.lex, &inp.id)?;
                let hyp = parse_all(std::slice::from_ref(&inp.hypothesis), &s.lex, &inp.id)?.remove(0);
                let v = judge(&theory, &hyp, &s.refute).with_context(|| inp.id.clone()).input()?;
                Ok(ProveReport {
                    id: inp.id.clone(),
                    predicted_label: v.label,
                    predicted_proof: render_proof(&v.proof, &s.lex),
                    steps_t1: v.steps_t1,
                    steps_t2: v.steps_t2,
                    halt_t1: v.halt_t1,
                    halt_t2: v.halt_t2,
                    tie_broken: v.tie_broken,
                })
            })
            .collect()
    });
    let single = instances.is_none();
    let mut out = writer(None)?;
    for r in reports {
        let r = r?;
        if s.json {
            write_json(&mut out, &r)?;
        } else {
            if single {
                writeln!(out, "{}", r.predicted_label).input()?;
            } else {
                writeln!(out, "{}: {}", r.id, r.predicted_label).input()?;
            }
            write!(out, "{}", format_proof(&r.predicted_proof)).input()?;
        }
    }
    out.flush().input()
}

#[derive(Serialize)]
struct SatReport {
    id: String,
    predicted_label: Label,
    predicted_proof: Vec<RenderedStep>,
    halt_reason: HaltReason,
}

fn sat(s: &Settings, theory: Option<&Path>, instances: Option<&Path>) -> Result<()> {
    let inputs = match (theory, instances) {
        (Some(t), None) => vec![TheoryInput { id: "input".into(), theory: read_theory(t)?, hypothesis: String::new() }],
        (None, Some(p)) => read_jsonl(p)?,
        _ => return Err(Failure::Config(anyhow!("sat needs --theory or --instances"))),
    };
    let reports: Vec<Result<SatReport>> = s.pool.install(|| {
        inputs
            .par_iter()
            .map(|inp| {
                let theory = parse_all(&inp.theory, &s.lex, &inp.id)?;
                let v = check_sat(&theory, &s.refute).with_context(|| inp.id.clone()).input()?;
                Ok(SatReport {
                    id: inp.id.clone(),
                    predicted_label: v.label,
                    predicted_proof: render_proof(&v.proof, &s.lex),
                    halt_reason: v.halt_reason,
                })
            })
            .collect()
    });
    let single = instances.is_none();
    let mut out = writer(None)?;
    for r in reports {
        let r = r?;
        if s.json {
            write_json(&mut out, &r)?;
        } else {
            if single {
                writeln!(out, "{}", r.predicted_label).input()?;
            } else {
                writeln!(out, "{}: {}", r.id, r.predicted_label).input()?;
            }
            write!(out, "{}", format_proof(&r.predicted_proof)).input()?;
        }
    }
    out.flush().input()
}

fn gen(
    s: &Settings,
    g: &Global,
    config: Option<&Path>,
    out: Option<&Path>,
    nlsat: Option<f64>,
    training: Option<&Path>,
    count: Option<usize>,
) -> Result<()> {
    let mut cfg = match config {
        Some(p) => {
            let text = fs::read_to_string(p).with_context(|| format!("reading {}", p.display())).config()?;
            toml::from_str::<GenConfig>(&text).with_context(|| p.display().to_string()).config()?
        }
        None => GenConfig::default(),
    };
    if let Some(seed) = g.seed {
        cfg.seed = seed;
    }
    if let Some(b) = g.budget {
        cfg.budget = b;
    }
    if let Some(st) = g.strategy {
        cfg.strategy = st;
    }
    if let Some(n) = count {
        cfg.n_instances = n;
    }
    let stream = match nlsat {
        Some(f) => generate_nlsat(&cfg, f, &s.lex),
        None => generate(&cfg, &s.lex),
    }
    .config()?;

    let mut out = writer(out)?;
    let mut records = match training {
        Some(p) => Some(writer(Some(p))?),
        None => None,
    };
    for inst in stream {
        let inst = inst.map_err(|e| match e {
            DatagenError::EngineDisagreement { .. } => Failure::Internal(e.into()),
            e => Failure::Config(e.into()),
        })?;
        write_json(&mut out, &inst)?;
        if let Some(w) = records.as_mut() {
            if !inst.label.is_proofless() {
                for rec in extract_training_samples(&inst, &s.lex).map_err(|e| Failure::Internal(e.into()))? {
                    write_json(w, &rec)?;
                }
            }
        }
    }
    if let Some(w) = records.as_mut() {
        w.flush().input()?;
    }
    out.flush().input()
}

#[derive(Deserialize)]
struct PredictionLine {
    id: String,
    predicted_label: Label,
    #[serde(default)]
    predicted_proof: Vec<PredictedStep>,
}

fn paired(predictions: &Path, gold: &Path) -> Result<Vec<nlrefute::eval::PredictionRecord>> {
    let gold: Vec<Instance> = read_jsonl(gold)?;
    let preds: Vec<PredictionLine> = read_jsonl(predictions)?;
    let by_id: HashMap<&str, &Instance> = gold.iter().map(|i| (i.id.as_str(), i)).collect();
    preds
        .into_iter()
        .map(|p| match by_id.get(p.id.as_str()) {
            Some(inst) => Ok(inst.prediction(p.predicted_label, p.predicted_proof)),
            None => Err(Failure::Input(anyhow!("prediction for unknown instance `{}`", p.id))),
        })
        .collect()
}

#[derive(Serialize)]
struct CheckReport<'a> {
    id: &'a str,
    valid: bool,
}

fn eval(s: &Settings, predictions: &Path, gold: &Path) -> Result<()> {
    let records = paired(predictions, gold)?;
    let scores = s.pool.install(|| score(&records)).input()?;
    let mut out = writer(None)?;
    if s.json {
        write_json(&mut out, &scores)?;
    } else {
        writeln!(out, "EA: {:.4}", scores.entailment_accuracy).input()?;
        writeln!(out, "FA: {:.4}", scores.full_accuracy).input()?;
        writeln!(out, "n: {}", scores.n).input()?;
    }
    out.flush().input()
}

fn check(s: &Settings, proofs: &Path, instances: &Path) -> Result<()> {
    let records = paired(proofs, instances)?;
    let valid: Vec<bool> = s.pool.install(|| records.par_iter().map(check_proof).collect());
    let mut out = writer(None)?;
    for (r, ok) in records.iter().zip(&valid) {
        if s.json {
            write_json(&mut out, &CheckReport { id: &r.instance_id, valid: *ok })?;
        } else {
            writeln!(out, "{}\t{}", r.instance_id, if *ok { "valid" } else { "invalid" }).input()?;
        }
    }
    if !s.json {
        writeln!(out, "valid: {}/{}", valid.iter().filter(|v| **v).count(), valid.len()).input()?;
    }
    out.flush().input()
}

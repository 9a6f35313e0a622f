use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use bertini::harness::{
    emit_report, run_experiment, ExperimentConfig, ExperimentKind, MemberMode, ReportFormat,
};
use bertini::jets::VarietyFile;
use bertini::proj::PointsFile;
use bertini::{Error, Field, Result};

#[derive(Parser)]
#[command(name = "bertini", version, about = "Exact linear systems, jet ranks and smoothness checks")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Write the report here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[arg(long, global = true, default_value_t = ReportFormat::Json)]
    format: ReportFormat,
    /// Record wall-clock time in the report (breaks byte-identical reruns).
    #[arg(long, global = true)]
    timing: bool,
}

#[derive(Subcommand)]
enum Command {
    /// Basis of the degree-a forms through the given points.
    Linsys {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        degree: u32,
        #[arg(long)]
        points: PathBuf,
        #[arg(long)]
        field: Option<Field>,
    },
    /// Smoothness of X ∩ {form = 0} at the rational points over F_p.
    CheckMember {
        #[arg(long)]
        variety: PathBuf,
        #[arg(long)]
        form: String,
        #[arg(long)]
        field: Field,
    },
    /// Discriminant of a quadric, with a brute-force cross-check over F_p.
    Disc {
        #[arg(long, allow_hyphen_values = true)]
        form: String,
        #[arg(long, default_value_t = Field::Rational)]
        field: Field,
        /// Ambient dimension; defaults to the highest variable index.
        #[arg(long)]
        n: Option<usize>,
    },
    /// Jet-map ranks at base points and sampled points of X.
    JetSurvey {
        #[command(flatten)]
        setup: Setup,
        #[arg(long)]
        samples: usize,
        #[arg(long)]
        seed: u64,
    },
    /// Monte Carlo smoothness of sections by random members.
    BertiniSample {
        #[command(flatten)]
        setup: Setup,
        #[arg(long)]
        trials: usize,
        #[arg(long)]
        seed: u64,
        /// Draw members singular at a seeded point of X instead.
        #[arg(long)]
        tangent: bool,
    },
    /// Run an experiment described by a JSON config file.
    Run {
        #[arg(long)]
        config: PathBuf,
    },
}

#[derive(Args)]
struct Setup {
    #[arg(long)]
    variety: PathBuf,
    #[arg(long)]
    points: PathBuf,
    #[arg(long)]
    degree: u32,
    #[arg(long)]
    field: Field,
}

fn read_json<T: serde::de::DeserializeOwned>(path: &Path) -> Result<T> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
    Ok(serde_json::from_str(&text)?)
}

fn configure(kind: ExperimentKind, setup: &Setup) -> Result<ExperimentConfig> {
    let mut cfg = ExperimentConfig::new(kind, setup.field);
    cfg.variety = Some(read_json::<VarietyFile>(&setup.variety)?);
    cfg.points = Some(read_json::<PointsFile>(&setup.points)?);
    cfg.degree = setup.degree;
    Ok(cfg)
}

fn build_config(cli: &Cli) -> Result<ExperimentConfig> {
    let mut cfg = match &cli.command {
        Command::Linsys { n, degree, points, field } => {
            let file: PointsFile = read_json(points)?;
            let mut cfg = ExperimentConfig::new(ExperimentKind::Linsys, field.unwrap_or(file.field));
            cfg.n = Some(*n);
            cfg.degree = *degree;
            cfg.points = Some(file);
            cfg
        }
        Command::CheckMember { variety, form, field } => {
            let mut cfg = ExperimentConfig::new(ExperimentKind::CheckMember, *field);
            cfg.variety = Some(read_json(variety)?);
            cfg.form = Some(form.clone());
            cfg
        }
        Command::Disc { form, field, n } => {
            let mut cfg = ExperimentConfig::new(ExperimentKind::DiscDensity, *field);
            cfg.form = Some(form.clone());
            cfg.n = *n;
            cfg
        }
        Command::JetSurvey { setup, samples, seed } => {
            let mut cfg = configure(ExperimentKind::JetSurvey, setup)?;
            cfg.trials = *samples;
            cfg.seed = *seed;
            cfg
        }
        Command::BertiniSample { setup, trials, seed, tangent } => {
            let mut cfg = configure(ExperimentKind::BertiniSample, setup)?;
            cfg.trials = *trials;
            cfg.seed = *seed;
            if *tangent {
                cfg.member_mode = MemberMode::Tangent;
            }
            cfg
        }
        Command::Run { config } => ExperimentConfig::load(config)?,
    };
    cfg.timing |= cli.timing;
    Ok(cfg)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = build_config(&cli)
        .and_then(|cfg| run_experiment(&cfg))
        .and_then(|report| emit_report(&report, cli.format, cli.out.as_deref()));
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}

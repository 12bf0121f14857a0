mod commands;
mod report;
mod suites;

use clap::{Args, Parser, Subcommand, ValueEnum};
use report::{Failure, Outcome};
use serde::{Deserialize, Serialize};
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Parser, Debug)]
#[command(name = "yfclone", version, about = "Young-Fibonacci clone Schur functions: evaluation, verification and sampling")]
struct Cli {
    #[command(flatten)]
    common: Common,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Copy, Clone, Debug, Default, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    #[default]
    Json,
    Csv,
}

/// Flags shared by every subcommand. A `--config` JSON file with the same
/// keys overrides them.
#[derive(Args, Clone, Debug, Default, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Common {
    /// Specialization, e.g. `charlier:rho=1/2`.
    #[arg(long, global = true)]
    pub spec: Option<String>,
    /// JSON file whose keys override the flags.
    #[arg(long, global = true)]
    #[serde(skip_serializing)]
    pub config: Option<PathBuf>,
    #[arg(long, global = true)]
    pub n: Option<usize>,
    #[arg(long, global = true)]
    pub level: Option<usize>,
    /// Fibonacci words, comma separated or repeated.
    #[arg(long, global = true, value_delimiter = ',')]
    pub word: Vec<String>,
    #[arg(long, global = true)]
    pub samples: Option<usize>,
    #[arg(long, global = true, env = "YFCLONE_SEED")]
    pub seed: Option<u64>,
    #[arg(long, global = true)]
    pub streams: Option<usize>,
    #[arg(long, global = true)]
    pub horizon: Option<usize>,
    #[arg(long, global = true)]
    pub tol: Option<f64>,
    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
}

impl Common {
    fn merge_config(mut self) -> Result<Self, Failure> {
        let Some(path) = self.config.clone() else { return Ok(self) };
        let text = std::fs::read_to_string(&path).map_err(|e| Failure::usage(format!("reading {}: {e}", path.display())))?;
        let file: Common =
            serde_json::from_str(&text).map_err(|e| Failure::usage(format!("config {}: {e}", path.display())))?;
        macro_rules! take {
            ($($f:ident),*) => { $( if file.$f.is_some() { self.$f = file.$f.clone(); } )* };
        }
        take!(spec, n, level, samples, seed, streams, horizon, tol, format, out);
        if !file.word.is_empty() {
            self.word = file.word.clone();
        }
        Ok(self)
    }

    pub fn seed(&self) -> u64 {
        self.seed.unwrap_or(0)
    }
}

#[derive(Subcommand, Debug)]
enum Cmd {
    /// dim, s_w, h_w, φ(w) and M_n(w) for listed words or a whole level.
    Eval {
        #[arg(long, value_delimiter = ',', default_value = "dim,phi,measure")]
        what: Vec<commands::What>,
    },
    /// Fibonacci-positivity verdict with witnesses.
    Classify,
    /// Run identity suites; exits 1 if an exact identity fails.
    Verify {
        /// pieri, cauchy1, cauchy2, kostka, moments5way, coherence, scaling,
        /// typeI-normalization, or all.
        #[arg(long, value_delimiter = ',', default_value = "all")]
        suite: Vec<String>,
        #[arg(long, default_value_t = 3)]
        trials: usize,
    },
    /// Moment sequences along every applicable route.
    Moments {
        #[arg(long, value_delimiter = ',')]
        route: Vec<String>,
    },
    /// Monte Carlo scaling report, or raw sampled words with --raw.
    Sample {
        /// Alias of --spec for the scaling families.
        #[arg(long)]
        family: Option<String>,
        #[arg(long)]
        raw: bool,
    },
    /// Type-I masses of the limiting measure, up to suffix weight --level.
    #[command(name = "typeI", alias = "type-i")]
    TypeI,
    /// RS correspondence of one permutation, or random permutations/involutions.
    Rs {
        /// One-line notation, e.g. "2 7 1 5 6 4 3".
        #[arg(long)]
        perm: Option<String>,
        /// Sample from μ_n(·|π,φ,ψ) with π = --spec.
        #[arg(long)]
        random: bool,
        #[arg(long, default_value = "plancherel")]
        phi: String,
        #[arg(long, default_value = "plancherel")]
        psi: String,
        /// Sample from ν_n(·|π,φ) instead.
        #[arg(long)]
        involution: bool,
    },
}

fn run(cli: Cli) -> Result<Outcome, Failure> {
    let c = cli.common.merge_config()?;
    match cli.cmd {
        Cmd::Eval { what } => commands::eval(&c, &what),
        Cmd::Classify => commands::classify(&c),
        Cmd::Verify { suite, trials } => suites::verify(&c, &suite, trials),
        Cmd::Moments { route } => commands::moments(&c, &route),
        Cmd::Sample { family, raw } => commands::sample(&c, family.as_deref(), raw),
        Cmd::TypeI => commands::type_i(&c),
        Cmd::Rs { perm, random, phi, psi, involution } => {
            commands::rs(&c, perm.as_deref(), random, &phi, &psi, involution)
        }
    }
    .map(|o| o.with_config(&c))
    .and_then(|o| {
        o.emit(c.format.unwrap_or_default(), c.out.as_deref())?;
        Ok(o)
    })
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(o) if o.failed_exact => ExitCode::from(1),
        Ok(_) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("{}", serde_json::to_string(&f).expect("failure record serializes"));
            ExitCode::from(f.code)
        }
    }
}

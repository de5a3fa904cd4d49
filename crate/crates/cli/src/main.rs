use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

mod algebra;
mod logic;
mod output;
mod smc;

use output::{Format, Out};

const VERSION: &str = concat!(env!("CARGO_PKG_VERSION"), " (format 1)");

#[derive(Parser)]
#[command(name = "msml", version = VERSION, about = "Many-sorted polyadic modal logic toolkit")]
struct Cli {
    /// Report format.
    #[arg(long, value_enum, global = true, default_value = "text")]
    format: FormatArg,
    /// Seed for randomized spot checks.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum FormatArg {
    Text,
    Json,
}

#[derive(Subcommand)]
enum Command {
    /// Parse input files and print them back in canonical form.
    Parse(ParseArgs),
    /// Check a formula at a world or in every world of a model.
    ModelCheck(ModelCheckArgs),
    /// Check a proof against an axiom set.
    CheckProof(CheckProofArgs),
    /// Deduction-theorem transformations of checked proofs.
    Transform(TransformArgs),
    /// Print the closure Γ^k of a set of formulas under boxes.
    Gamma(GammaArgs),
    /// Generate proofs of the derived rules and theorems of K.
    Derive(DeriveArgs),
    /// Check the laws of a boolean algebra with operators.
    BaoCheck(AlgebraArgs),
    /// Build and verify the Jónsson–Tarski embedding of an algebra.
    Jt(AlgebraArgs),
    /// SMC machine tools.
    #[command(subcommand)]
    Smc(SmcCommand),
    /// Search small models for a countermodel.
    Enumerate(EnumerateArgs),
}

#[derive(Args)]
pub struct ParseArgs {
    /// Signature file (.msig).
    #[arg(long)]
    pub sig: Option<PathBuf>,
    /// Formula text; may be repeated.
    #[arg(long)]
    pub formula: Vec<String>,
    /// Formula list file (.mfm).
    #[arg(long)]
    pub formulas: Option<PathBuf>,
    /// Model file (.mmod).
    #[arg(long)]
    pub model: Option<PathBuf>,
    /// Axiom file (.max).
    #[arg(long)]
    pub axioms: Option<PathBuf>,
    /// Proof file (.mpf).
    #[arg(long)]
    pub proof: Option<PathBuf>,
    /// Algebra file (.mba).
    #[arg(long)]
    pub algebra: Option<PathBuf>,
    /// SMC program (.smc); needs no signature.
    #[arg(long)]
    pub program: Option<PathBuf>,
}

#[derive(Args)]
pub struct ModelCheckArgs {
    #[arg(long)]
    pub sig: PathBuf,
    #[arg(long)]
    pub model: PathBuf,
    #[arg(long)]
    pub formula: String,
    /// Check at this world only.
    #[arg(long, conflicts_with = "all_worlds")]
    pub world: Option<String>,
    /// Print the truth value at every world of the formula's sort.
    #[arg(long)]
    pub all_worlds: bool,
}

#[derive(Args)]
pub struct CheckProofArgs {
    #[arg(long)]
    pub sig: PathBuf,
    /// Axiom file (.max); the standard basis without extra schemes if omitted.
    #[arg(long)]
    pub axioms: Option<PathBuf>,
    #[arg(long)]
    pub proof: PathBuf,
}

#[derive(Clone, Copy, ValueEnum)]
pub enum TransformKind {
    /// Local deduction theorem: discharge the hypothesis `--phi`.
    DtLocal,
    /// From a global proof to a local proof from Γ_G witnesses.
    Globalize,
    /// Global deduction theorem: discharge the hypothesis `--phi`.
    DtGlobal,
}

#[derive(Args)]
pub struct TransformArgs {
    #[arg(value_enum)]
    pub kind: TransformKind,
    #[arg(long)]
    pub sig: PathBuf,
    #[arg(long)]
    pub axioms: Option<PathBuf>,
    #[arg(long)]
    pub proof: PathBuf,
    /// The hypothesis to discharge.
    #[arg(long)]
    pub phi: Option<String>,
    /// Write the transformed proof here instead of printing it.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Args)]
pub struct GammaArgs {
    #[arg(long)]
    pub sig: PathBuf,
    /// Formula list file (.mfm) holding Γ.
    #[arg(long)]
    pub hyps: Option<PathBuf>,
    /// Members of Γ given inline; may be repeated.
    #[arg(long)]
    pub formula: Vec<String>,
    /// Number of box layers.
    #[arg(long, default_value_t = 1)]
    pub depth: usize,
    /// Side formulas for the other argument positions; defaults to one variable per sort.
    #[arg(long)]
    pub side: Vec<String>,
}

#[derive(Clone, Copy, ValueEnum)]
pub enum DeriveKind {
    /// From ⊢ φ → φ′, σ□(…φ…) → σ□(…φ′…).
    Mono,
    /// σ□(…φ∧φ′…) ↔ σ□(…φ…) ∧ σ□(…φ′…).
    BoxConj,
    /// σ(…φ∨φ′…) ↔ σ(…φ…) ∨ σ(…φ′…).
    DiaDisj,
    /// From ⊢ φ ↔ φ′, σ(…φ…) ↔ σ(…φ′…).
    Cong,
}

#[derive(Args)]
pub struct DeriveArgs {
    #[arg(value_enum)]
    pub kind: DeriveKind,
    #[arg(long)]
    pub sig: PathBuf,
    #[arg(long)]
    pub op: String,
    /// 1-based argument position.
    #[arg(long, default_value_t = 1)]
    pub pos: usize,
    /// The other arguments, in order; may be repeated.
    #[arg(long)]
    pub side: Vec<String>,
    /// Premise proof (.mpf) for mono and cong.
    #[arg(long)]
    pub premise: Option<PathBuf>,
    /// Premise formula for mono and cong, proved as a tautology.
    #[arg(long, conflicts_with = "premise")]
    pub taut: Option<String>,
    /// φ for box-conj and dia-disj.
    #[arg(long)]
    pub phi: Option<String>,
    /// φ′ for box-conj and dia-disj.
    #[arg(long)]
    pub phi2: Option<String>,
}

#[derive(Args)]
pub struct AlgebraArgs {
    #[arg(long)]
    pub sig: PathBuf,
    /// Algebra file (.mba).
    #[arg(long)]
    pub algebra: PathBuf,
}

#[derive(Subcommand)]
enum SmcCommand {
    /// Run a program from `config(nil, mem)`.
    Run(SmcRunArgs),
    /// Check the execution proofs and the term-model coherence suite.
    Verify(SmcVerifyArgs),
    /// Print the axiom file.
    Axioms(SmcAxiomsArgs),
}

#[derive(Args)]
pub struct SmcRunArgs {
    /// Program file (.smc).
    pub program: PathBuf,
    /// Initial memory, e.g. `x=1,y=2`.
    #[arg(long, default_value = "")]
    pub mem: String,
    /// Interpreter step budget.
    #[arg(long, default_value_t = msml::smc::DEFAULT_BUDGET)]
    pub budget: usize,
}

#[derive(Args)]
pub struct SmcVerifyArgs {
    /// Program to verify instead of the built-in example.
    pub program: Option<PathBuf>,
    #[arg(long, default_value_t = msml::smc::DEFAULT_BUDGET)]
    pub budget: usize,
    /// Read `[π]γ` as the dual of `exec` applied verbatim.
    #[arg(long)]
    pub box_literal: bool,
}

#[derive(Args)]
pub struct SmcAxiomsArgs {
    #[arg(long)]
    pub box_literal: bool,
}

#[derive(Args)]
pub struct EnumerateArgs {
    #[arg(long)]
    pub sig: PathBuf,
    /// Formula to refute.
    #[arg(long)]
    pub refute: String,
    /// Largest number of worlds per sort.
    #[arg(long, default_value_t = 3)]
    pub max_worlds: usize,
}

/// Outcome of a command that ran to completion.
pub enum Status {
    Ok,
    /// Refuted, rejected or stuck.
    Failed,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let out = Out::new(match cli.format {
        FormatArg::Text => Format::Text,
        FormatArg::Json => Format::Json,
    });
    let seed = cli.seed;
    let result = match cli.command {
        Command::Parse(a) => logic::parse(&out, a),
        Command::ModelCheck(a) => logic::model_check(&out, a),
        Command::CheckProof(a) => logic::check_proof(&out, a),
        Command::Transform(a) => logic::transform(&out, a),
        Command::Gamma(a) => logic::gamma(&out, a),
        Command::Derive(a) => logic::derive(&out, a),
        Command::Enumerate(a) => logic::enumerate(&out, a),
        Command::BaoCheck(a) => algebra::bao_check(&out, a, seed),
        Command::Jt(a) => algebra::jt(&out, a, seed),
        Command::Smc(SmcCommand::Run(a)) => smc::run(&out, a),
        Command::Smc(SmcCommand::Verify(a)) => smc::verify(&out, a),
        Command::Smc(SmcCommand::Axioms(a)) => smc::axioms(&out, a),
    };
    match result {
        Ok(Status::Ok) => ExitCode::SUCCESS,
        Ok(Status::Failed) => ExitCode::from(1),
        Err(e) => {
            out.error(&format!("{e:#}"));
            ExitCode::from(2)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn version_names_the_format() {
        assert!(VERSION.ends_with(&format!("(format {})", msml::FORMAT_VERSION)));
    }

    #[test]
    fn cli_definition_is_consistent() {
        use clap::CommandFactory;
        Cli::command().debug_assert();
    }
}

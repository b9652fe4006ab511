use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use sgl_core::app::{self, AppError, CurveInput, CurveSource, Format, ScanFilters, ScanTarget};
use sgl_core::curve::{ShaAssumption, WeierstrassModel};
use sgl_core::field::{FieldSpec, LocalClassSpec};
use sgl_core::group::GroupKind;

#[derive(Parser, Debug)]
#[command(name = "sgl", version, about = "Tamagawa and regulator quotients for Brauer relations, with Sha growth certificates")]
struct Cli {
    /// Output format.
    #[arg(long, value_enum, default_value = "json", global = true)]
    format: OutFormat,
    /// Same as `--format pretty`.
    #[arg(long, global = true)]
    pretty: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum OutFormat {
    Json,
    Pretty,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Reduction data, local classes and hypothesis counts for one curve.
    Analyze {
        #[command(flatten)]
        curve: CurveArgs,
        #[arg(long, value_parser = parse_field)]
        field: Option<String>,
        #[arg(long)]
        group: Option<GroupKind>,
        #[arg(short = 'p', value_parser = app::parse_prime)]
        p: Option<u64>,
        #[arg(long = "local-class")]
        local_class: Vec<LocalClassSpec>,
    },
    /// Basis of the Brauer relation lattice of a group.
    Relations { group: GroupKind },
    /// Reproduce the local quotient table of a group with the double-coset oracle.
    Tables { group: GroupKind },
    /// Emit a growth certificate.
    Certify {
        #[command(flatten)]
        curve: CurveArgs,
        #[arg(long, value_parser = parse_field)]
        field: String,
        /// Group of the field; inferred for multiquadratic fields.
        #[arg(long)]
        group: Option<GroupKind>,
        #[arg(short = 'p', value_parser = app::parse_prime)]
        p: u64,
        #[arg(long = "local-class")]
        local_class: Vec<LocalClassSpec>,
    },
    /// List database curves satisfying the hypotheses.
    Scan {
        #[arg(long, env = "SGL_DATA")]
        data: PathBuf,
        /// Check one case; needs `--group` too. Without both, every case's rank inequality is required.
        #[arg(short = 'p', value_parser = app::parse_prime, requires = "group")]
        p: Option<u64>,
        #[arg(long, requires = "p")]
        group: Option<GroupKind>,
        /// Keep only curves with sha_an = 1.
        #[arg(long)]
        require_sha_trivial: bool,
        /// Keep only curves with trivial torsion.
        #[arg(long)]
        trivial_torsion: bool,
        /// Show only the first N matches.
        #[arg(long)]
        limit: Option<usize>,
    },
}

#[derive(Args, Debug)]
struct CurveArgs {
    /// a1,a2,a3,a4,a6
    #[arg(long, value_parser = app::parse_curve, allow_hyphen_values = true, conflicts_with = "label", required_unless_present = "label")]
    curve: Option<WeierstrassModel>,
    /// Look the curve up in the database.
    #[arg(long)]
    label: Option<String>,
    #[arg(long, env = "SGL_DATA")]
    data: Option<PathBuf>,
    #[arg(long)]
    rank: Option<u32>,
    #[arg(long)]
    torsion: Option<u64>,
    /// `all`, or primes at which Sha is assumed trivial.
    #[arg(long, value_parser = app::parse_sha_trivial)]
    sha_trivial: Option<ShaAssumption>,
}

impl CurveArgs {
    fn input(self) -> Result<CurveInput, AppError> {
        let source = match (self.curve, self.label) {
            (Some(m), _) => CurveSource::Model(m),
            (None, Some(label)) => {
                let data = self.data.ok_or_else(|| AppError::Usage("--label needs --data or SGL_DATA".into()))?;
                CurveSource::Label { label, data }
            }
            (None, None) => return Err(AppError::Usage("one of --curve or --label is required".into())),
        };
        Ok(CurveInput { source, rank: self.rank, torsion: self.torsion, sha: self.sha_trivial })
    }
}

// syntax only; the group is attached once `--group` is known
fn parse_field(s: &str) -> Result<String, String> {
    if s.starts_with("mq:") || s.starts_with("poly:") || s == "abstract" {
        Ok(s.to_string())
    } else {
        Err(format!("`{s}`: expected mq:d1,d2, poly:c_k,...,c_0 or abstract"))
    }
}

fn field_spec(s: &str, group: Option<GroupKind>) -> Result<FieldSpec, AppError> {
    Ok(FieldSpec::parse(s, group)?)
}

fn run(cli: Cli) -> Result<String, AppError> {
    let format = if cli.pretty { Format::Pretty } else { match cli.format {
        OutFormat::Json => Format::Json,
        OutFormat::Pretty => Format::Pretty,
    } };
    Ok(match cli.command {
        Command::Analyze { curve, field, group, p, local_class } => {
            let field = field.map(|f| field_spec(&f, group)).transpose()?;
            let out = app::analyze(&curve.input()?, field.as_ref(), group, p, &local_class)?;
            app::emit(&out, format)
        }
        Command::Relations { group } => app::emit(&app::relations(group)?, format),
        Command::Tables { group } => app::emit(&app::tables_cmd(group)?, format),
        Command::Certify { curve, field, group, p, local_class } => {
            let field = field_spec(&field, group)?;
            app::emit(&app::certify_cmd(&curve.input()?, &field, p, &local_class)?, format)
        }
        Command::Scan { data, p, group, require_sha_trivial, trivial_torsion, limit } => {
            let target = match (p, group) {
                (Some(p), Some(group)) => ScanTarget::Case { p, group },
                _ => ScanTarget::AllCases,
            };
            let filters = ScanFilters { sha_trivial: require_sha_trivial, trivial_torsion, limit };
            app::emit(&app::scan_cmd(&data, target, filters)?, format)
        }
    })
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(out) => {
            println!("{}", out.trim_end());
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}

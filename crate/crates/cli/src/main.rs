use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use hopf_qubit::cd::{self, CdElement};
use hopf_qubit::report::{self, ConformanceRow, EntanglementReport};
use hopf_qubit::{Error, QubitState, SedenionScheme};

/// Hopf-fibration entanglement analysis for 1-4 qubit pure states.
#[derive(Parser)]
#[command(name = "hopfq", version, about, long_about = None)]
struct Cli {
    /// State as bra-ket text, or a path to a bra-ket or JSON state file.
    #[arg(long, global = true)]
    state: Option<String>,

    /// Rescale the state to unit norm instead of rejecting it.
    #[arg(long, global = true)]
    normalize: bool,

    /// Qubit analysed against the rest (0 = A).
    #[arg(long, global = true, default_value_t = 0)]
    qubit: usize,

    #[arg(long, global = true, value_enum)]
    format: Option<Format>,

    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,

    /// Write output here instead of standard output.
    #[arg(long, global = true)]
    out: Option<PathBuf>,

    /// Exit with status 4 if any conformance row mismatches.
    #[arg(long, global = true)]
    strict: bool,

    /// Quaternion conjugation scheme for four-qubit states.
    #[arg(long, global = true, value_enum, default_value_t = Encoding::PhaseConsistent)]
    encoding: Encoding,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Full entanglement report for one state.
    Analyze,
    /// Evaluate the worked examples and print the conformance table.
    VerifyPaper,
    /// Measures for Haar-random states, one CSV row per sample.
    Sample {
        #[arg(short = 'n', long = "qubits")]
        qubits: usize,
        #[arg(long, default_value_t = 1000)]
        count: u64,
    },
    /// List basis zero divisors by algebra level.
    ZeroDivisors {
        /// Print the basis product table as `a,b,sign,index` instead.
        #[arg(long)]
        table: bool,
        /// Algebra level for `--table`.
        #[arg(long, default_value_t = 4)]
        level: u8,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Clone, Copy, ValueEnum)]
enum Encoding {
    PhaseConsistent,
    AsPrinted,
}

impl From<Encoding> for SedenionScheme {
    fn from(e: Encoding) -> Self {
        match e {
            Encoding::PhaseConsistent => SedenionScheme::PhaseConsistent,
            Encoding::AsPrinted => SedenionScheme::AsPrinted,
        }
    }
}

struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn new(code: u8, message: impl Into<String>) -> Self {
        Self {
            code,
            message: message.into(),
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::Parse(_) | Error::StateFile(_) => 1,
            Error::NonFinite(_) | Error::Singular => 3,
            _ => 2,
        };
        Failure::new(code, e.to_string())
    }
}

fn load_state(cli: &Cli) -> Result<QubitState, Failure> {
    let source = cli
        .state
        .as_deref()
        .ok_or_else(|| Failure::new(2, "--state is required"))?;
    let path = Path::new(source);
    let text = if path.is_file() {
        fs::read_to_string(path).map_err(|e| Failure::new(2, format!("cannot read {source}: {e}")))?
    } else {
        source.to_string()
    };
    let state = if text.trim_start().starts_with('{') {
        QubitState::from_json(&text, cli.normalize)?
    } else {
        hopf_qubit::parse_state_with(text.trim(), cli.normalize)?
    };
    Ok(state)
}

fn emit(cli: &Cli, text: &str) -> Result<(), Failure> {
    match &cli.out {
        Some(p) => fs::write(p, text).map_err(|e| Failure::new(2, format!("cannot write {}: {e}", p.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn with_newline(mut s: String) -> String {
    if !s.ends_with('\n') {
        s.push('\n');
    }
    s
}

fn analyze(cli: &Cli) -> Result<(), Failure> {
    let state = load_state(cli)?;
    let r = EntanglementReport::for_qubit(&state, cli.qubit, cli.encoding.into())?;
    let text = match cli.format.unwrap_or(Format::Json) {
        Format::Json => with_newline(r.to_json()),
        Format::Csv => r.to_csv(),
    };
    emit(cli, &text)
}

fn verify_paper(cli: &Cli) -> Result<(), Failure> {
    let rows = report::verify_paper()?;
    let text = match cli.format {
        None => report::conformance_table(&rows),
        Some(Format::Json) => with_newline(serde_json::to_string_pretty(&rows).expect("rows serialize")),
        Some(Format::Csv) => {
            let mut s = format!("{}\n", ConformanceRow::csv_header());
            for r in &rows {
                s.push_str(&r.to_csv_line());
                s.push('\n');
            }
            s
        }
    };
    emit(cli, &text)?;
    let bad = rows.iter().filter(|r| !r.matches).count();
    if cli.strict && bad > 0 {
        return Err(Failure::new(4, format!("{bad} conformance rows mismatch")));
    }
    Ok(())
}

fn sample(cli: &Cli, n: usize, count: u64) -> Result<(), Failure> {
    if count == 0 {
        return Err(Failure::new(2, "--count must be at least 1"));
    }
    let rows = report::sample(n, count, cli.seed)?;
    let text = match cli.format.unwrap_or(Format::Csv) {
        Format::Csv => report::sample_csv(n, &rows),
        Format::Json => with_newline(serde_json::to_string_pretty(&rows).expect("rows serialize")),
    };
    emit(cli, &text)
}

fn zero_divisors(cli: &Cli, table: bool, level: u8) -> Result<(), Failure> {
    if table {
        let mut s = String::from("a,b,sign,index\n");
        for p in cd::basis_product_table(level)? {
            let sign = if p.sign > 0 { '+' } else { '-' };
            s.push_str(&format!("{},{},{},{}\n", p.a, p.b, sign, p.index));
        }
        return emit(cli, &s);
    }
    let mut found: Vec<(u8, Vec<(CdElement, CdElement)>)> = Vec::new();
    for level in 1..=cd::MAX_LEVEL {
        found.push((level, cd::find_basis_zero_divisors(level)?));
    }
    let text = match cli.format {
        Some(Format::Json) => {
            let levels: Vec<_> = found
                .iter()
                .map(|(level, pairs)| {
                    let pairs: Vec<[String; 2]> = pairs.iter().map(|(x, y)| [x.to_string(), y.to_string()]).collect();
                    serde_json::json!({ "level": level, "count": pairs.len(), "pairs": pairs })
                })
                .collect();
            with_newline(serde_json::to_string_pretty(&serde_json::json!({ "levels": levels })).expect("json"))
        }
        Some(Format::Csv) => {
            let mut s = String::from("level,x,y\n");
            for (level, pairs) in &found {
                for (x, y) in pairs {
                    s.push_str(&format!("{level},{x},{y}\n"));
                }
            }
            s
        }
        None => {
            let mut s = String::new();
            for (level, pairs) in &found {
                if pairs.is_empty() {
                    s.push_str(&format!("level {level}: none\n"));
                    continue;
                }
                s.push_str(&format!("level {level}: {} pairs\n", pairs.len()));
                for (x, y) in pairs {
                    s.push_str(&format!("  ({x})·({y}) = 0\n"));
                }
            }
            s
        }
    };
    emit(cli, &text)
}

fn run(cli: &Cli) -> Result<(), Failure> {
    match &cli.command {
        Command::Analyze => analyze(cli),
        Command::VerifyPaper => verify_paper(cli),
        Command::Sample { qubits, count } => sample(cli, *qubits, *count),
        Command::ZeroDivisors { table, level } => zero_divisors(cli, *table, *level),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("hopfq: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}

//! `codelen` — analyze bitstreams with code-length randomness tests, generate
//! adversarial and calibration streams, and inspect battery layouts.
//!
//! Exit status: 0 = input judged random, 1 = non-random, 2 = usage or I/O
//! error.

use std::fs;
use std::io::{Read, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};

use codelen::generators::{
    build_y_sequence, generate_bernoulli, generate_two_faced, TwoFacedParams, TwoFacedVariant,
    YSequenceParams, YSource,
};
use codelen::testkit::{
    default_battery, run_battery, BatteryConfig, Verdict, DEFAULT_BATTERY_MIN_N,
};
use codelen::{BitSequence, Format};
use codelen_cli::{parse_test_spec, render_json, render_text};

#[derive(Parser)]
#[command(
    name = "codelen",
    version,
    about = "Compression-based randomness tests"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a battery or a single test on a bitstream and report verdicts.
    Analyze(AnalyzeArgs),
    /// Produce calibration or adversarial bitstreams.
    Generate(GenerateArgs),
    /// Show the default battery composition for a given input length.
    BatteryInfo(BatteryInfoArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum FormatArg {
    /// Each byte is 8 bits, most significant first.
    Raw,
    /// Characters '0'/'1', whitespace ignored.
    Ascii01,
}

impl From<FormatArg> for Format {
    fn from(f: FormatArg) -> Format {
        match f {
            FormatArg::Raw => Format::RawMsbFirst,
            FormatArg::Ascii01 => Format::Ascii01,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum OutputArg {
    Text,
    Json,
}

#[derive(Args)]
struct AnalyzeArgs {
    /// Input file; "-" or omitted reads stdin.
    input: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "raw")]
    format: FormatArg,
    /// Overall significance level in (0,1).
    #[arg(long, default_value_t = 0.01)]
    alpha: f64,
    /// Battery to run (only "default" is built in).
    #[arg(long, conflicts_with = "test")]
    battery: Option<String>,
    /// Single test spec: kt:m=<m>[,t=<t>] | mixture[:M=<M>,t=<t>] | lz77.
    #[arg(long)]
    test: Option<String>,
    #[arg(long, value_enum, default_value = "text")]
    output: OutputArg,
}

#[derive(Args)]
struct GenerateArgs {
    #[command(subcommand)]
    source: GenerateCommand,
}

#[derive(Args)]
struct SinkArgs {
    /// Output file; omitted writes stdout.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "raw")]
    format: FormatArg,
}

#[derive(Subcommand)]
enum GenerateCommand {
    /// Order-k two-faced Markov stream: k-blocks are exactly uniform, yet
    /// the order-k entropy is h(nu).
    TwoFaced {
        #[arg(long)]
        k: usize,
        #[arg(long)]
        nu: f64,
        #[arg(long, value_enum, default_value = "t")]
        variant: VariantArg,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        seed: u64,
        #[command(flatten)]
        sink: SinkArgs,
    },
    /// Duplicated-block sequence y = u_0 u_0^g u_1 u_1^g ... from a seeded
    /// source or a source file.
    Y {
        #[arg(long, default_value_t = 1.0)]
        gamma: f64,
        #[arg(long)]
        n: usize,
        #[arg(long, conflicts_with = "source")]
        seed: Option<u64>,
        /// Read source symbols from this file instead of a seeded stream.
        #[arg(long)]
        source: Option<PathBuf>,
        #[arg(long, value_enum, default_value = "raw")]
        source_format: FormatArg,
        #[command(flatten)]
        sink: SinkArgs,
    },
    /// Independent bits with P(1) = p.
    Bernoulli {
        #[arg(long)]
        p: f64,
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[command(flatten)]
        sink: SinkArgs,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum VariantArg {
    T,
    THat,
}

#[derive(Args)]
struct BatteryInfoArgs {
    /// Input length the battery would be built for.
    #[arg(long)]
    n: usize,
    #[arg(long, default_value_t = 0.01)]
    alpha: f64,
    #[arg(long, value_enum, default_value = "text")]
    output: OutputArg,
}

fn main() -> ExitCode {
    match run() {
        Ok(code) => code,
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::from(2)
        }
    }
}

fn run() -> Result<ExitCode> {
    match Cli::parse().command {
        Command::Analyze(args) => analyze(args),
        Command::Generate(args) => {
            generate(args)?;
            Ok(ExitCode::SUCCESS)
        }
        Command::BatteryInfo(args) => {
            battery_info(args)?;
            Ok(ExitCode::SUCCESS)
        }
    }
}

fn check_alpha(alpha: f64) -> Result<()> {
    if !(alpha > 0.0 && alpha < 1.0) {
        bail!("--alpha must lie strictly inside (0,1), got {alpha}");
    }
    Ok(())
}

fn read_input(path: Option<&PathBuf>) -> Result<Vec<u8>> {
    match path {
        Some(p) if p.as_os_str() != "-" => {
            fs::read(p).with_context(|| format!("reading {}", p.display()))
        }
        _ => {
            let mut buf = Vec::new();
            std::io::stdin()
                .read_to_end(&mut buf)
                .context("reading stdin")?;
            Ok(buf)
        }
    }
}

fn analyze(args: AnalyzeArgs) -> Result<ExitCode> {
    check_alpha(args.alpha)?;
    let raw = read_input(args.input.as_ref())?;
    let bits = BitSequence::parse(&raw, args.format.into())?;
    if bits.is_empty() {
        bail!("input holds no bits");
    }

    let config = if let Some(spec) = &args.test {
        let code = parse_test_spec(spec, bits.len()).map_err(anyhow::Error::msg)?;
        BatteryConfig::new(args.alpha, vec![code], vec![1.0])
    } else {
        match args.battery.as_deref() {
            None | Some("default") => {
                if bits.len() < DEFAULT_BATTERY_MIN_N {
                    bail!(
                        "default battery needs at least {DEFAULT_BATTERY_MIN_N} bits, got {}",
                        bits.len()
                    );
                }
                default_battery(bits.len(), args.alpha)
            }
            Some(other) => bail!("unknown battery {other:?}; only \"default\" is built in"),
        }
    };

    for member in &config.members {
        if let codelen::testkit::CodeSpec::Krichevsky { memory, block_len } = member {
            if codelen::krichevsky::KrichevskyParams::new(*memory, *block_len).overparameterized() {
                eprintln!(
                    "warning: memory {memory} gives more contexts than the {block_len}-bit \
                     block has symbols"
                );
            }
        }
    }

    let report = run_battery(&bits, &config);
    match args.output {
        OutputArg::Text => print!("{}", render_text(&report)),
        OutputArg::Json => println!("{}", render_json(&report)),
    }
    Ok(match report.verdict {
        Verdict::Random => ExitCode::SUCCESS,
        Verdict::NonRandom => ExitCode::from(1),
    })
}

fn write_output(bits: &BitSequence, sink: &SinkArgs) -> Result<()> {
    let bytes = match sink.format {
        FormatArg::Raw => bits.to_bytes_msb().map_err(|_| {
            anyhow::anyhow!(
                "{} bits do not fill whole bytes; use --format ascii01",
                bits.len()
            )
        })?,
        FormatArg::Ascii01 => bits.to_string01().into_bytes(),
    };
    match &sink.out {
        Some(path) => {
            fs::write(path, bytes).with_context(|| format!("writing {}", path.display()))?
        }
        None => std::io::stdout()
            .write_all(&bytes)
            .context("writing stdout")?,
    }
    Ok(())
}

fn generate(args: GenerateArgs) -> Result<()> {
    match args.source {
        GenerateCommand::TwoFaced {
            k,
            nu,
            variant,
            n,
            seed,
            sink,
        } => {
            if k < 1 {
                bail!("--k must be at least 1");
            }
            if !(nu > 0.0 && nu < 1.0) {
                bail!("--nu must lie strictly inside (0,1), got {nu}");
            }
            if n < k {
                bail!("--n must be at least the order k");
            }
            let variant = match variant {
                VariantArg::T => TwoFacedVariant::T,
                VariantArg::THat => TwoFacedVariant::THat,
            };
            let params = TwoFacedParams::new(k, nu, variant, seed);
            write_output(&generate_two_faced(&params, n), &sink)
        }
        GenerateCommand::Y {
            gamma,
            n,
            seed,
            source,
            source_format,
            sink,
        } => {
            if !(gamma > 0.0 && gamma <= 1.0) {
                bail!("--gamma must lie in (0,1], got {gamma}");
            }
            if n < 4 {
                bail!("--n must be at least 4");
            }
            let y_source = match (seed, source) {
                (Some(seed), None) => YSource::Seeded(seed),
                (None, Some(path)) => {
                    let raw =
                        fs::read(&path).with_context(|| format!("reading {}", path.display()))?;
                    YSource::Bits(BitSequence::parse(&raw, source_format.into())?)
                }
                (None, None) => bail!("y needs either --seed or --source"),
                (Some(_), Some(_)) => unreachable!("clap forbids both"),
            };
            let params = YSequenceParams::new(y_source, gamma, n);
            write_output(&build_y_sequence(&params)?, &sink)
        }
        GenerateCommand::Bernoulli { p, n, seed, sink } => {
            if !(0.0..=1.0).contains(&p) {
                bail!("--p must lie in [0,1], got {p}");
            }
            write_output(&generate_bernoulli(p, n, seed), &sink)
        }
    }
}

fn battery_info(args: BatteryInfoArgs) -> Result<()> {
    check_alpha(args.alpha)?;
    if args.n < DEFAULT_BATTERY_MIN_N {
        bail!(
            "default battery needs at least {DEFAULT_BATTERY_MIN_N} bits, got {}",
            args.n
        );
    }
    let config = default_battery(args.n, args.alpha);
    match args.output {
        OutputArg::Json => {
            #[derive(serde::Serialize)]
            struct Info<'a> {
                version: u32,
                n: usize,
                alpha: f64,
                alpha_budget: f64,
                members: Vec<Member<'a>>,
            }
            #[derive(serde::Serialize)]
            struct Member<'a> {
                name: String,
                code: &'a codelen::testkit::CodeSpec,
                weight: f64,
                alpha_i: f64,
            }
            let info = Info {
                version: codelen_cli::REPORT_VERSION,
                n: args.n,
                alpha: args.alpha,
                alpha_budget: config.alpha_budget(),
                members: config
                    .members
                    .iter()
                    .enumerate()
                    .map(|(i, code)| Member {
                        name: code.name(),
                        code,
                        weight: config.weights[i],
                        alpha_i: config.member_alpha(i),
                    })
                    .collect(),
            };
            println!("{}", serde_json::to_string_pretty(&info)?);
        }
        OutputArg::Text => {
            println!(
                "default battery for n = {} at alpha = {}:",
                args.n, args.alpha
            );
            println!("{:<26} {:>12} {:>14}", "test", "weight", "alpha_i");
            for (i, code) in config.members.iter().enumerate() {
                println!(
                    "{:<26} {:>12.6} {:>14.3e}",
                    code.name(),
                    config.weights[i],
                    config.member_alpha(i)
                );
            }
            println!(
                "sum(alpha_i) = {:.6} <= alpha = {}",
                config.alpha_budget(),
                args.alpha
            );
        }
    }
    Ok(())
}

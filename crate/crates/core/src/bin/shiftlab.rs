use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use shiftlab::family::FamilyProxy;
use shiftlab::io::write_text;
use shiftlab::report::{output_path, run_to_string, Command, Criterion, Format, RunConfig};

#[derive(Parser)]
#[command(name = "shiftlab", version, about = "Finite-horizon experiments on weighted backward shifts")]
struct Cli {
    #[command(subcommand)]
    command: Cmd,
    #[command(flatten)]
    common: Common,
}

#[derive(Args)]
struct Common {
    /// Report path; defaults to $SHIFTLAB_OUT_DIR/<command>.<ext>, else stdout.
    #[arg(long, global = true)]
    out: Option<String>,
    #[arg(long, global = true, value_enum, default_value = "json")]
    format: FormatArg,
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
}

#[derive(Clone, Copy, ValueEnum)]
enum FormatArg {
    Json,
    Csv,
}

#[derive(Clone, Copy, ValueEnum)]
enum ProxyArg {
    Cofinite,
    Syndetic,
    Banach,
}

#[derive(Subcommand)]
enum Cmd {
    /// Window and prefix statistics of a set file.
    Density {
        #[arg(long)]
        set: String,
        #[arg(long, value_delimiter = ',', required = true)]
        windows: Vec<u64>,
        /// Ignore windows starting at or before this point.
        #[arg(long, default_value_t = 0)]
        floor: u64,
        /// Also search for the longest arithmetic progression up to this length.
        #[arg(long)]
        ap_max: Option<u64>,
    },
    /// Weight-product criteria for a generator.
    Weights {
        #[arg(long)]
        spec: String,
        #[arg(long, value_delimiter = ',', default_value = "multrec")]
        criteria: Vec<String>,
        #[arg(long = "M", value_delimiter = ',', default_value = "1")]
        m: Vec<String>,
        #[arg(long = "N")]
        n: u64,
        #[arg(long = "j", value_delimiter = ',', default_value = "0", allow_negative_numbers = true)]
        j: Vec<i64>,
        /// Largest order m of the multiple-recurrence condition.
        #[arg(long, default_value_t = 6)]
        order: u64,
        #[arg(long, default_value_t = 1)]
        r: u64,
        #[arg(long, default_value_t = 8)]
        gap: u64,
        #[arg(long = "t0", default_value_t = 1)]
        t0: u64,
        /// Family proxy of the direct-sum criterion (cofinite uses --t0).
        #[arg(long, value_enum)]
        proxy: Option<ProxyArg>,
        #[arg(long, default_value_t = 0.5)]
        delta: f64,
        #[arg(long, default_value_t = 16)]
        s: u64,
    },
    /// Return-set recurrence scan for a scheduled vector.
    Recur {
        #[arg(long)]
        spec: String,
        #[arg(long, conflicts_with = "geometric")]
        schedule: Option<String>,
        /// `base,count`: target e_0 at times base, base², …
        #[arg(long, value_delimiter = ',')]
        geometric: Option<Vec<u64>>,
        #[arg(long, default_value = "e0:1/2")]
        ball: String,
        #[arg(long, default_value = "l2")]
        space: String,
        #[arg(long, default_value_t = 1)]
        r: u64,
        #[arg(long = "K")]
        k: u64,
        #[arg(long = "N")]
        n: u64,
        #[arg(long, default_value_t = 64)]
        s: u64,
        #[arg(long)]
        delta: Option<f64>,
    },
}

fn config(cli: Cli) -> Result<RunConfig, shiftlab::Error> {
    let command = match cli.command {
        Cmd::Density {
            set,
            windows,
            floor,
            ap_max,
        } => Command::Density {
            set,
            windows,
            window_floor: floor,
            ap_max,
        },
        Cmd::Weights {
            spec,
            criteria,
            m,
            n,
            j,
            order,
            r,
            gap,
            t0,
            proxy,
            delta,
            s,
        } => Command::Weights {
            spec,
            horizon: n,
            criteria: criteria
                .iter()
                .map(|c| c.parse::<Criterion>())
                .collect::<Result<_, _>>()?,
            thresholds: m,
            offsets: j,
            order,
            r,
            gap,
            tail_start: t0,
            proxy: proxy.map(|p| match p {
                ProxyArg::Cofinite => FamilyProxy::cofinite(t0),
                ProxyArg::Syndetic => FamilyProxy::syndetic(gap),
                ProxyArg::Banach => FamilyProxy::banach_lower(delta, s),
            }),
        },
        Cmd::Recur {
            spec,
            schedule,
            geometric,
            ball,
            space,
            r,
            k,
            n,
            s,
            delta,
        } => Command::Recur {
            spec,
            schedule,
            geometric: match geometric.as_deref() {
                None => None,
                Some(&[base, count]) => Some((base, count as u32)),
                Some(_) => {
                    return Err(shiftlab::Error::OutOfRange(
                        "--geometric takes base,count".into(),
                    ))
                }
            },
            ball,
            space,
            r,
            k_max: k,
            horizon: n,
            window: s,
            delta,
        },
    };
    Ok(RunConfig {
        command,
        seed: cli.common.seed,
        format: match cli.common.format {
            FormatArg::Json => Format::Json,
            FormatArg::Csv => Format::Csv,
        },
        output: cli.common.out,
    })
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = config(cli).and_then(|cfg| {
        let text = run_to_string(&cfg)?;
        match output_path(&cfg) {
            Some(path) => {
                write_text(&path, &text)?;
                eprintln!("wrote {}", path.display());
            }
            None => print!("{text}"),
        }
        Ok(())
    });
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("shiftlab: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
